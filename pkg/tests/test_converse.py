import pytest

from localview.converse import genie_reduce, no_universal_strategy_search
from localview.errors import ContractViolation, NotReducibleError, SizeGuardError
from localview.network import OTHER, Topology, class_topology, classify_component, connected_components
from localview.oracle import brute_force_sum_capacity, gain_assignments
from localview.strategy import decodable


def _is_other_triple(t, users):
    sub = t.restrict(users)
    blocks = connected_components(sub)
    return len(blocks) == 1 and classify_component(sub, blocks[0]).kind == OTHER


def test_reduce_picks_hub_neighbour():
    t = Topology.from_cross(4, [(1, 2), (4, 2), (3, 4)])
    r = genie_reduce(t)
    assert r.users == (1, 2, 4) and r.case == 1
    assert _is_other_triple(t, r.users)


def test_reduce_three_user_block_is_returned_whole():
    t = Topology.from_cross(4, [(1, 2), (4, 2)])
    r = genie_reduce(t)
    assert r.users == (1, 2, 4) and r.case == 0


def test_reduce_full_degree_pattern():
    t = Topology.from_cross(4, [(1, 2), (1, 3), (1, 4), (2, 1), (2, 3), (2, 4)])
    r = genie_reduce(t)
    assert r.case == 2 and r.users == (1, 2, 3)
    assert _is_other_triple(t, r.users)


def test_reduce_refuses_qualifying_topologies():
    both = Topology(4, frozenset({(a, b) for a in (1, 2) for b in (1, 2)}
                                 | {(a, b) for a in (3, 4) for b in (3, 4)}))
    with pytest.raises(NotReducibleError):
        genie_reduce(both)


@pytest.mark.parametrize("label", ["e", "f"])
def test_no_table_for_non_qualifying(label):
    r = no_universal_strategy_search(class_topology(label), 1)
    assert not r.feasible and r.table is None and r.verdict == "infeasible"


@pytest.mark.parametrize("label", list("abcdp"))
def test_table_exists_for_qualifying(label):
    t = class_topology(label)
    r = no_universal_strategy_search(t, 1)
    assert r.feasible
    for gm in gain_assignments(t, 1):
        s = r.table.strategy_for(gm)
        assert decodable(gm, s).ok
        assert s.rates.sum == brute_force_sum_capacity(gm).sum_rate


def test_core_is_a_small_subset():
    t = class_topology("e")
    r = no_universal_strategy_search(t, 1, minimize=True)
    assert r.core and 2 <= len(r.core) < r.assignments
    assert all(gm.topology == t for gm in r.core)


def test_search_guards():
    with pytest.raises(ContractViolation):
        no_universal_strategy_search(Topology.fully_connected(2), 1)
    with pytest.raises(SizeGuardError):
        no_universal_strategy_search(class_topology("a"), 3)
