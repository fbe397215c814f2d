import itertools
import random

import pytest

from localview._masks import mask_space
from localview.errors import ContractViolation, SizeGuardError
from localview.network import GainMatrix, Topology, class_topology
from localview.oracle import (QUALIFIER, brute_force_sum_capacity, collides, cross_validate,
                              decodable_index_tuples, find_encoders, gain_assignments,
                              one_to_many_sum_capacity, optimal_assignment)
from localview.strategy import LevelStrategy, decodable

from helpers import simulated_sum_capacity


def _random_gm(rng, K, g, p=0.4):
    pairs = list(itertools.permutations(range(1, K + 1), 2))
    t = Topology.from_cross(K, [l for l in pairs if rng.random() < p])
    return GainMatrix.from_dict(t, {l: rng.randint(0, g) for l in t.links})


def test_diagonal_sums_direct_gains():
    gm = GainMatrix.from_triples(3, [(1, 1, 2), (2, 2, 5), (3, 3, 0)])
    res = brute_force_sum_capacity(gm)
    assert res.sum_rate == 7 and res.rates == (2, 5, 0)
    assert res.qualifier == QUALIFIER


def test_many_to_one_unit_gains():
    gm = GainMatrix.uniform(class_topology("e"), 1)
    res = brute_force_sum_capacity(gm)
    assert res.sum_rate == 2
    assert res.rates == (1, 0, 1)


def test_named_three_user_instance():
    gm = GainMatrix.from_triples(3, [(1, 1, 3), (2, 2, 3), (3, 3, 3), (2, 3, 3), (3, 2, 3),
                                     (1, 2, 2), (2, 1, 2)])
    assert brute_force_sum_capacity(gm).sum_rate >= 6
    enc = find_encoders(gm, (3, 0, 3))
    assert enc is not None
    assert decodable(gm, LevelStrategy.from_subspaces(enc)).ok


def test_witness_always_decodes():
    rng = random.Random(11)
    for _ in range(200):
        gm = _random_gm(rng, rng.randint(1, 4), rng.randint(0, 3))
        res = brute_force_sum_capacity(gm)
        assert decodable(gm, LevelStrategy.from_subspaces(res.encoders)).ok
        assert [e.dim for e in res.encoders] == list(res.rates)


def test_simulated_reference_anchors():
    assert simulated_sum_capacity(GainMatrix.uniform(class_topology("e"), 1)) == 2
    assert simulated_sum_capacity(GainMatrix.uniform(Topology.fully_connected(2), 1)) == 1
    assert simulated_sum_capacity(GainMatrix.uniform(Topology.fully_connected(2), 2)) == 2


def test_matches_simulated_brute_force():
    rng = random.Random(5)
    values = []
    for _ in range(80):
        gm = _random_gm(rng, 3, 2, p=0.5)
        values.append(simulated_sum_capacity(gm))
        assert brute_force_sum_capacity(gm).sum_rate == values[-1]
    assert len(set(values)) > 3


def test_matches_simulated_brute_force_two_users_exhaustive():
    for cross in itertools.chain.from_iterable(
            itertools.combinations([(1, 2), (2, 1)], r) for r in range(3)):
        t = Topology.from_cross(2, cross)
        for gm in gain_assignments(t, 2):
            assert brute_force_sum_capacity(gm).sum_rate == simulated_sum_capacity(gm)


def test_methods_agree():
    rng = random.Random(7)
    for _ in range(60):
        gm = _random_gm(rng, 3, 4, p=0.5)
        a = brute_force_sum_capacity(gm, method="enumerate")
        b = brute_force_sum_capacity(gm, method="branch")
        assert a == b


def test_result_is_deterministic():
    gm = GainMatrix.from_triples(3, [(1, 1, 4), (2, 2, 3), (3, 3, 4), (1, 2, 2), (2, 3, 1), (3, 1, 3)])
    assert brute_force_sum_capacity(gm) == brute_force_sum_capacity(gm)


def test_full_listing_agrees_with_oracle():
    rng = random.Random(9)
    for _ in range(30):
        gm = _random_gm(rng, 3, 2, p=0.5)
        rows, ok = decodable_index_tuples(gm, 2)
        best = int(mask_space(2).dims[rows[ok]].sum(axis=1).max())
        assert best == brute_force_sum_capacity(gm).sum_rate


def test_guards():
    big = GainMatrix.uniform(Topology.fully_connected(5), 1)
    with pytest.raises(SizeGuardError):
        brute_force_sum_capacity(big)
    tall = GainMatrix.from_triples(2, [(1, 1, 7), (2, 2, 1), (1, 2, 1)])
    with pytest.raises(SizeGuardError):
        brute_force_sum_capacity(tall)
    four = GainMatrix.uniform(Topology.fully_connected(4), 5)
    with pytest.raises(SizeGuardError):
        brute_force_sum_capacity(four)
    # the guard applies per component, so large networks of small blocks are fine
    apart = GainMatrix.from_triples(6, [(k, k, 6) for k in range(1, 7)])
    assert brute_force_sum_capacity(apart).sum_rate == 36


def test_find_encoders_infeasible_and_levels_only():
    gm = GainMatrix.uniform(Topology.fully_connected(2), 1)
    assert find_encoders(gm, (1, 1)) is None
    enc = find_encoders(gm, (0, 1), levels_only=True)
    assert [e.dim for e in enc] == [0, 1]
    with pytest.raises(ContractViolation):
        find_encoders(gm, (1,))


def test_optimal_assignment_is_canonical():
    gm = GainMatrix.uniform(Topology.fully_connected(2), 2)
    got = optimal_assignment(gm, [1, 2])
    assert sum(s.dim for s in got.values()) == 2
    # lexicographically smallest rate vector wins the tie
    assert (got[1].dim, got[2].dim) == (0, 2)


def test_collision_rule():
    assert collides(1, 1, 1)
    assert not collides(2, 1, 1) and collides(2, 1, 2)
    assert not any(collides(0, 3, k) for k in range(1, 4))


def test_one_to_many_examples():
    assert one_to_many_sum_capacity(GainMatrix.from_triples(3, [(1, 1, 2), (2, 2, 1), (3, 3, 3)]), 1) == 2
    two = GainMatrix.from_triples(2, [(1, 1, 2), (2, 2, 1), (1, 2, 1)])
    assert one_to_many_sum_capacity(two, 1) == 2 == brute_force_sum_capacity(two).sum_rate
    three = GainMatrix.from_triples(3, [(1, 1, 3), (1, 2, 2), (2, 2, 2), (1, 3, 3), (3, 3, 1)])
    assert one_to_many_sum_capacity(three, 1) == 3 == brute_force_sum_capacity(three).sum_rate


def test_one_to_many_rejects_other_blocks():
    with pytest.raises(ContractViolation):
        one_to_many_sum_capacity(GainMatrix.uniform(class_topology("e"), 1), 1)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_cross_validate_gain_bound_two(L):
    t = Topology.from_cross(L, [(1, i) for i in range(2, L + 1)])
    report = cross_validate(t, 2)
    assert report.ok and report.cases == 3 ** (2 * L - 1)


def test_cross_validate_guards():
    with pytest.raises(ContractViolation):
        cross_validate(class_topology("e"), 1)
    with pytest.raises(SizeGuardError):
        cross_validate(Topology.from_cross(2, [(1, 2)]), 4)


def test_gain_assignments_count():
    t = class_topology("b")
    assert sum(1 for _ in gain_assignments(t, 2)) == 3 ** 4
