import pytest

from localview.counterexamples import (STEPS, Counterexample, builtin_counterexamples,
                                       check_view_claims, counterexample, replay)
from localview.errors import ContractViolation
from localview.network import GainMatrix, three_user_class
from localview.oracle import brute_force_sum_capacity

from helpers import simulated_decodable

CLAIMED = {"e": (1, 2), "f": (1, 2), "g": (5, 6), "h": (10, 11), "i": (3, 4), "j": (4, 6),
           "k": (5, 6), "l": (10, 11), "m": (8, 11), "n": (8, 9), "o": (10, 11)}


def test_builtin_table():
    cases = builtin_counterexamples()
    assert [c.label for c in cases] == sorted(CLAIMED)
    assert {c.label: (c.forced_sum, c.centralized_sum) for c in cases} == CLAIMED
    assert counterexample("e").centralized_sum == 2
    assert counterexample("n").witness_rates == (3, 3, 3)
    with pytest.raises(KeyError):
        counterexample("a")


def test_each_instance_sits_in_its_class():
    for c in builtin_counterexamples():
        assert three_user_class(c.topology).label == c.label


def test_instance_contract():
    gm = GainMatrix.from_triples(1, [(1, 1, 1)])
    with pytest.raises(ContractViolation):
        Counterexample("x", gm, (1,), (1,), 1, 1)
    with pytest.raises(ContractViolation):
        Counterexample("x", gm, (0,), (1,), 0, 2)


@pytest.mark.parametrize("label,gap", [("e", 1), ("m", 3), ("l", 1)])
def test_replay_examples(label, gap):
    r = replay(counterexample(label))
    assert r.ok and counterexample(label).claimed_gap == gap
    assert [s.name for s in r.steps] == list(STEPS)


@pytest.mark.parametrize("label", sorted(CLAIMED))
def test_view_claims_hold(label):
    claims = check_view_claims(counterexample(label))
    assert claims and all(s.ok for s in claims)


@pytest.mark.parametrize("label", sorted(CLAIMED))
def test_claimed_points_decode(label):
    r = replay(counterexample(label))
    by_name = {s.name: s for s in r.steps}
    assert by_name["witness decodes"].ok
    assert by_name["forced point decodes"].ok
    assert by_name["positive gap"].ok


@pytest.mark.parametrize("label,oracle", [("h", 12), ("i", 6)])
def test_oracle_beats_the_claimed_optimum(label, oracle):
    # the oracle's witness is confirmed by listing every joint message
    c = counterexample(label)
    res = brute_force_sum_capacity(c.gains)
    assert res.sum_rate == oracle > c.centralized_sum
    assert simulated_decodable(c.gains, c.gains.q, [e.basis for e in res.encoders])
    r = replay(c)
    assert r.failed_steps == ["oracle matches claimed sum"]
