"""Whole-network runs: one simulation, and sweeps over gain assignments."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .errors import ContractViolation, InvariantViolation, SizeGuardError
from .network import Classification, GainMatrix, Topology, components, qualifies
from .oracle import QUALIFIER, CapacityResult, brute_force_sum_capacity, gain_assignments
from .strategy import LevelStrategy, decisions, run_distributed


@dataclass(frozen=True)
class ComponentRun:
    component_id: int
    members: tuple[int, ...]
    tag: Classification
    distributed_sum: int
    oracle_sum: int | None
    notice: str = ""

    @property
    def gap(self) -> int | None:
        return None if self.oracle_sum is None else self.oracle_sum - self.distributed_sum


@dataclass(frozen=True)
class RunReport:
    label: str
    gains: GainMatrix
    genie: bool
    strategy: LevelStrategy
    cases: tuple[str, ...]
    decodable: bool
    components: tuple[ComponentRun, ...]
    oracle: CapacityResult | None
    timings: dict = field(default_factory=dict, compare=False)
    qualifier: str = QUALIFIER

    @property
    def rates(self) -> tuple[int, ...]:
        return self.strategy.rates.rates

    @property
    def distributed_sum(self) -> int:
        return sum(self.rates)

    @property
    def oracle_sum(self) -> int | None:
        if any(c.oracle_sum is None for c in self.components):
            return None
        return sum(c.oracle_sum for c in self.components)

    @property
    def gap(self) -> int | None:
        o = self.oracle_sum
        return None if o is None else o - self.distributed_sum

    @property
    def universal_strategy_exists(self) -> bool:
        return all(c.tag.qualifies for c in self.components)


def simulate(gm: GainMatrix, genie: bool = False, label: str = "scenario") -> RunReport:
    """Run the distributed strategy and, where the guard allows, the oracle per component."""
    t0 = time.perf_counter()
    strategy, verdict = run_distributed(gm, genie)
    if not verdict.ok:
        raise InvariantViolation(f"distributed strategy failed to decode on {label}")
    cases = tuple(d.case for d in decisions(gm, genie))
    t1 = time.perf_counter()
    rows = []
    for i, comp in enumerate(components(gm.topology), 1):
        dist = sum(strategy.rates[u] for u in comp.members)
        sub = gm.restrict(comp.members)
        try:
            o = brute_force_sum_capacity(sub).sum_rate
            notice = ""
        except SizeGuardError as exc:
            o, notice = None, f"oracle skipped: {exc}"
        rows.append(ComponentRun(i, comp.members, comp.tag, dist, o, notice))
    t2 = time.perf_counter()
    oracle = None
    if all(r.oracle_sum is not None for r in rows):
        oracle = brute_force_sum_capacity(gm)
    return RunReport(label, gm, genie, strategy, cases, verdict.ok, tuple(rows), oracle,
                     {"strategy_s": t1 - t0, "oracle_s": t2 - t1})


@dataclass(frozen=True)
class SweepCase:
    gains: GainMatrix
    distributed_sum: int
    oracle_sum: int

    @property
    def gap(self) -> int:
        return self.oracle_sum - self.distributed_sum


@dataclass(frozen=True)
class SweepReport:
    topology: Topology
    gain_bound: int
    genie: bool
    sampled: bool
    assignments: int
    qualifies: bool
    max_gap: int
    gap_cases: tuple[SweepCase, ...]
    decode_failures: tuple[GainMatrix, ...]

    @property
    def gap_positive(self) -> int:
        return len(self.gap_cases)

    @property
    def consistent(self) -> bool:
        """No decoding failures, and no gap where a universal strategy should exist."""
        return not self.decode_failures and not (self.qualifies and self.gap_cases)


MAX_SWEEP_USERS = 3
MAX_SAMPLED_USERS = 4
MAX_SWEEP_GAIN = 3


def random_gains(t: Topology, g: int, rng: random.Random) -> GainMatrix:
    return GainMatrix(t, tuple((l, rng.randint(0, g)) for l in sorted(t.links)))


def sweep(t: Topology, g: int, genie: bool = False, samples: int | None = None,
          seed: int = 0) -> SweepReport:
    """Distributed sum against the oracle for every gain assignment in 0..g.

    Topologies with four users are sampled (``samples`` seeded draws)
    instead of swept.
    """
    if not 0 <= g <= MAX_SWEEP_GAIN:
        raise SizeGuardError(f"sweep gain bound must be in 0..{MAX_SWEEP_GAIN}, got {g}")
    if t.K > MAX_SAMPLED_USERS:
        raise SizeGuardError(f"sweeps support at most {MAX_SAMPLED_USERS} users, got K = {t.K}")
    sampled = t.K > MAX_SWEEP_USERS or samples is not None
    if sampled:
        rng = random.Random(seed)
        count = 500 if samples is None else samples
        if count < 1:
            raise ContractViolation("sample count must be positive")
        cases = (random_gains(t, g, rng) for _ in range(count))
    else:
        cases = gain_assignments(t, g)
    n = 0
    gaps, failures = [], []
    max_gap = 0
    for gm in cases:
        n += 1
        strategy, verdict = run_distributed(gm, genie)
        if not verdict.ok:
            failures.append(gm)
            continue
        dist = strategy.rates.sum
        o = brute_force_sum_capacity(gm).sum_rate
        if o < dist:
            raise InvariantViolation(f"distributed sum {dist} exceeds oracle {o} on {gm.describe()}")
        if o > dist:
            gaps.append(SweepCase(gm, dist, o))
            max_gap = max(max_gap, o - dist)
    return SweepReport(t, g, genie, sampled, n, qualifies(t), max_gap, tuple(gaps), tuple(failures))
