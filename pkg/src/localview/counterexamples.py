"""Built-in three-user instances where local views cost sum rate, and their replay.

Each instance carries the operating point that any universal rule is
pushed into (``forced``) and a better point available with full
information (``witness``).  Replay checks both points by constructing
encoders and running the decodability test, compares the claimed
full-information sum with the oracle, and re-derives the view claims
(which links a transmitter cannot see) from the hop rule.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._data import instance_data
from .errors import ContractViolation
from .gf2 import Subspace, word_levels
from .network import GainMatrix, Link, Topology
from .oracle import brute_force_sum_capacity, find_encoders
from .strategy import LevelStrategy, decodable
from .views import tx_view

STEPS = ("witness decodes", "oracle matches claimed sum", "forced point decodes", "positive gap")


@dataclass(frozen=True)
class Counterexample:
    label: str
    gains: GainMatrix
    forced_rates: tuple[int, ...]
    witness_rates: tuple[int, ...]
    forced_sum: int
    centralized_sum: int
    blind: tuple[tuple[int, tuple[Link, ...]], ...] = ()
    sees_all: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.forced_sum < self.centralized_sum:
            raise ContractViolation(f"({self.label}): forced sum must be below the centralized sum")
        if sum(self.witness_rates) != self.centralized_sum:
            raise ContractViolation(f"({self.label}): witness rates must sum to the centralized sum")

    @property
    def topology(self) -> Topology:
        return self.gains.topology

    @property
    def claimed_gap(self) -> int:
        return self.centralized_sum - self.forced_sum


def _tx(name: str) -> int:
    if not name.startswith("T"):
        raise ContractViolation(f"expected a transmitter name like T2, got {name!r}")
    return int(name[1:])


def builtin_counterexamples() -> list[Counterexample]:
    out = []
    for raw in instance_data()["instances"]:
        blind = tuple(sorted((_tx(k), tuple(tuple(l) for l in v)) for k, v in raw.get("blind", {}).items()))
        out.append(Counterexample(
            label=raw["label"],
            gains=GainMatrix.from_triples(3, raw["links"]),
            forced_rates=tuple(raw["forced"]),
            witness_rates=tuple(raw["witness"]),
            forced_sum=raw["forced_sum"],
            centralized_sum=raw["centralized_sum"],
            blind=blind,
            sees_all=tuple(sorted(_tx(k) for k in raw.get("sees_all", []))),
        ))
    return out


def counterexample(label: str) -> Counterexample:
    for c in builtin_counterexamples():
        if c.label == label:
            return c
    raise KeyError(f"no built-in instance labelled {label!r}")


@dataclass(frozen=True)
class Step:
    name: str
    ok: bool
    detail: str


@dataclass(frozen=True)
class ReplayReport:
    label: str
    steps: tuple[Step, ...]
    oracle_sum: int
    forced_encoders: tuple[Subspace, ...] | None
    witness_encoders: tuple[Subspace, ...] | None
    view_claims: tuple[Step, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.steps)

    @property
    def failed_steps(self) -> list[str]:
        return [s.name for s in self.steps if not s.ok]

    @property
    def views_ok(self) -> bool:
        return all(s.ok for s in self.view_claims)


def _realize(gm: GainMatrix, rates) -> tuple[tuple[Subspace, ...] | None, str]:
    """Encoders for ``rates``, preferring raw level sets; checked independently."""
    for levels_only, kind in ((True, "levels"), (False, "coded")):
        enc = find_encoders(gm, rates, levels_only=levels_only)
        if enc is not None:
            verdict = decodable(gm, LevelStrategy.from_subspaces(enc))
            if not verdict.ok:  # pragma: no cover - would mean the search and the test disagree
                return None, "search returned encoders that fail the decodability test"
            return enc, kind
    return None, "no decodable encoders exist"


def _describe(q: int, enc) -> str:
    parts = []
    for s in enc:
        if all(v & (v - 1) == 0 for v in s.basis):
            parts.append("{" + ",".join(map(str, word_levels(q, sum(s.basis)))) + "}")
        else:
            parts.append(str(s))
    return " ".join(parts)


def check_view_claims(c: Counterexample) -> tuple[Step, ...]:
    steps = []
    for k, links in c.blind:
        seen = tx_view(c.gains, k).links
        hidden = [l for l in links if l not in seen]
        ok = len(hidden) == len(links)
        steps.append(Step(f"T{k} blind to {', '.join(f'n{a}{b}' for a, b in links)}", ok,
                          "hidden" if ok else f"visible: {sorted(set(links) - set(hidden))}"))
    for k in c.sees_all:
        ok = tx_view(c.gains, k).links == c.topology.links
        steps.append(Step(f"T{k} sees every link", ok, "covered" if ok else "partial view"))
    return tuple(steps)


def replay(c: Counterexample) -> ReplayReport:
    gm = c.gains
    q = gm.q
    steps = []

    w_enc, how = _realize(gm, c.witness_rates)
    steps.append(Step(STEPS[0], w_enc is not None,
                      f"{c.witness_rates} via {how} {_describe(q, w_enc)}" if w_enc else how))

    oracle = brute_force_sum_capacity(gm)
    steps.append(Step(STEPS[1], oracle.sum_rate == c.centralized_sum,
                      f"oracle {oracle.sum_rate} ({oracle.qualifier}, witness {oracle.rates}), "
                      f"claimed {c.centralized_sum}"))

    f_enc, how = _realize(gm, c.forced_rates)
    sums = sum(c.forced_rates) == c.forced_sum
    steps.append(Step(STEPS[2], f_enc is not None and sums,
                      (f"{c.forced_rates} via {how} {_describe(q, f_enc)}" if f_enc else how)
                      + ("" if sums else f"; rates sum to {sum(c.forced_rates)}, not {c.forced_sum}")))

    gap = c.centralized_sum - c.forced_sum
    steps.append(Step(STEPS[3], gap > 0, f"{c.centralized_sum} - {c.forced_sum} = {gap}"))

    return ReplayReport(c.label, tuple(steps), oracle.sum_rate, f_enc, w_enc, check_view_claims(c))
