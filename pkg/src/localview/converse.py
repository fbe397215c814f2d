"""Impossibility side: the three-user reduction and the universal-rule search.

``genie_reduce`` picks three users out of a large non-qualifying block
whose induced topology is itself connected and non-qualifying.

``no_universal_strategy_search`` asks whether a single table from local
views to codebooks can reach the oracle optimum for every gain assignment
on a fixed three-user topology.  Each (transmitter, view) pair is a
variable whose domain is the set of codebooks; each gain assignment is a
table constraint listing the optimal decodable codebook tuples.  The
search is backtracking with generalised arc consistency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ._masks import mask_space
from .errors import ContractViolation, NotReducibleError, SizeGuardError
from .gf2 import Subspace
from .network import (OTHER, GainMatrix, Topology, class_topology, classify_component,
                      connected_components)
from .oracle import brute_force_sum_capacity, decodable_index_tuples, gain_assignments
from .strategy import LevelStrategy, decodable
from .views import LocalView, tx_view

MAX_SEARCH_GAIN = 2


# --- reduction --------------------------------------------------------------

@dataclass(frozen=True)
class Reduction:
    users: tuple[int, int, int]
    case: int
    induced: Topology


def _induced_ok(t: Topology, users) -> bool:
    sub = t.restrict(users)
    blocks = connected_components(sub)
    return len(blocks) == 1 and classify_component(sub, blocks[0]).kind == OTHER


def genie_reduce(t: Topology) -> Reduction:
    """Three users of a non-qualifying block whose induced topology stays non-qualifying.

    Case 1: some transmitter ``a`` reaches d receivers with 1 < d < m.
    Take the first pair ``b`` outside a's reach that touches it; pair
    ``a`` with ``b`` and with a receiver ``j`` of ``a``, choosing ``j``
    linked to ``b`` unless ``b`` already reaches receiver ``a``.

    Case 2: every degree is 1 or m; take two full-degree users and one
    degree-1 user.
    """
    block = None
    for c in connected_components(t):
        if len(c) >= 3 and not classify_component(t, c).qualifies:
            block = c
            break
    if block is None:
        raise NotReducibleError("every component is one-to-many or fully connected")
    m = len(block)
    if m == 3:
        return Reduction(tuple(block), 0, t.restrict(block))

    def touches(x: int, y: int) -> bool:
        return (x, y) in t.links or (y, x) in t.links

    for a in block:
        reach = t.receivers_of(a)
        if 1 < len(reach) < m:
            b = next(u for u in block if u not in reach and any(touches(u, x) for x in reach))
            others = [j for j in reach if j != a]
            if (b, a) in t.links:
                j = others[0]
            else:
                j = next(j for j in others if touches(b, j))
            users = tuple(sorted((a, b, j)))
            break
    else:
        full = [u for u in block if t.degree(u) == m]
        single = [u for u in block if t.degree(u) == 1]
        if len(full) < 2 or not single:  # pragma: no cover - excluded by the classification
            raise NotReducibleError(f"block {list(block)} has an unexpected degree pattern")
        users = tuple(sorted((full[0], full[1], single[0])))
        if not _induced_ok(t, users):  # pragma: no cover
            raise AssertionError("case 2 selection must be non-qualifying")
        return Reduction(users, 2, t.restrict(users))
    if not _induced_ok(t, users):  # pragma: no cover
        raise AssertionError("case 1 selection must be non-qualifying")
    return Reduction(users, 1, t.restrict(users))


# --- universal rule search ----------------------------------------------------

@dataclass(frozen=True)
class StrategyTable:
    """Codebook per (transmitter, local view), over ``q`` = gain bound levels."""

    q: int
    entries: dict

    def decide(self, view: LocalView) -> Subspace:
        return self.entries[view.key()]

    def strategy_for(self, gm: GainMatrix, genie: bool = True) -> LevelStrategy:
        subs = [self.decide(tx_view(gm, k, genie)) for k in gm.topology.users]
        return LevelStrategy.from_subspaces(subs)

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class UniversalSearchResult:
    topology: Topology
    gain_bound: int
    genie: bool
    feasible: bool
    table: StrategyTable | None
    assignments: int
    variables: int
    nodes: int
    core: tuple[GainMatrix, ...] | None = None

    @property
    def verdict(self) -> str:
        return "feasible" if self.feasible else "infeasible"


class _TableCSP:
    def __init__(self, scopes, allowed, domain_size):
        self.scopes = scopes
        self.allowed = allowed
        self.vars = sorted({v for s in scopes for v in s}, key=repr)
        self.domain_size = domain_size
        self.by_var = {v: [] for v in self.vars}
        for c, s in enumerate(scopes):
            for v in set(s):
                self.by_var[v].append(c)
        self.nodes = 0

    def _revise(self, domains, queue) -> bool:
        while queue:
            c = queue.pop()
            scope = self.scopes[c]
            live = [tup for tup in self.allowed[c]
                    if all(x in domains[v] for x, v in zip(tup, scope))]
            if not live:
                return False
            for i, v in enumerate(scope):
                support = {tup[i] for tup in live}
                if support != domains[v]:
                    domains[v] = domains[v] & support
                    if not domains[v]:
                        return False
                    queue.update(self.by_var[v])
        return True

    def solve(self, constraints: Iterable[int] | None = None):
        active = set(range(len(self.scopes))) if constraints is None else set(constraints)
        used = {v for c in active for v in self.scopes[c]}
        domains = {v: set(range(self.domain_size)) for v in used}
        by_var = self.by_var
        self.by_var = {v: [c for c in by_var[v] if c in active] for v in used}
        try:
            if not self._revise(domains, set(active)):
                return None
            solution = {}
            # constraints that share no open variable are solved separately
            for group in self._groups(domains):
                found = self._search(domains, group)
                if found is None:
                    return None
                solution.update({v: found[v] for v in group})
            return solution
        finally:
            self.by_var = by_var

    def _groups(self, domains):
        seen = set()
        for start in sorted(domains, key=repr):
            if start in seen:
                continue
            group, todo = [], [start]
            seen.add(start)
            while todo:
                v = todo.pop()
                group.append(v)
                if len(domains[v]) == 1:
                    continue
                for c in self.by_var[v]:
                    for u in self.scopes[c]:
                        if u not in seen and len(domains[u]) > 1:
                            seen.add(u)
                            todo.append(u)
            yield group

    def _search(self, domains, group):
        # _revise rebinds shrunken domains instead of mutating them, so a
        # shallow copy of the mapping is enough to undo a failed branch
        self.nodes += 1
        open_vars = [v for v in group if len(domains[v]) > 1]
        if not open_vars:
            return {v: next(iter(domains[v])) for v in group}
        v = min(open_vars, key=lambda x: (len(domains[x]), repr(x)))
        for value in sorted(domains[v]):
            trial = dict(domains)
            trial[v] = {value}
            if self._revise(trial, set(self.by_var[v])):
                found = self._search(trial, group)
                if found is not None:
                    return found
        return None


def _optimal_tuples(gm: GainMatrix, q: int) -> tuple[set[tuple[int, ...]], int]:
    rows, ok = decodable_index_tuples(gm, q)
    dims = mask_space(q).dims[rows].sum(axis=1)
    best = int(dims[ok].max())
    oracle = brute_force_sum_capacity(gm).sum_rate
    if best != oracle:  # pragma: no cover - two searches over the same space
        raise AssertionError(f"tuple listing max {best} disagrees with oracle {oracle}")
    keep = rows[ok & (dims == best)]
    return {tuple(int(x) for x in r) for r in keep}, best


def no_universal_strategy_search(t: Topology, g: int, genie: bool = True,
                                 minimize: bool = False) -> UniversalSearchResult:
    """Search for one view-to-codebook table that is optimal for every gain assignment in 0..g."""
    if t.K != 3:
        raise ContractViolation("universal search is defined for three-user topologies")
    if not 1 <= g <= MAX_SEARCH_GAIN:
        raise SizeGuardError(f"universal search limited to gain bound 1..{MAX_SEARCH_GAIN}, got {g}")
    q = g
    ms = mask_space(q)
    instances, scopes, allowed = [], [], []
    for gm in gain_assignments(t, g):
        keys = tuple(tx_view(gm, k, genie).key() for k in t.users)
        tuples, _ = _optimal_tuples(gm, q)
        instances.append(gm)
        scopes.append(keys)
        allowed.append(tuples)

    csp = _TableCSP(scopes, allowed, len(ms.subspaces))
    solution = csp.solve()
    table = None
    core = None
    if solution is not None:
        table = StrategyTable(q, {v: ms.subspaces[i] for v, i in solution.items()})
        for gm in instances:
            s = table.strategy_for(gm, genie)
            if not decodable(gm, s).ok or s.rates.sum != brute_force_sum_capacity(gm).sum_rate:
                raise AssertionError("search returned a table that is not optimal everywhere")  # pragma: no cover
    elif minimize:
        core = tuple(instances[c] for c in _deletion_core(csp))
    return UniversalSearchResult(t, g, genie, solution is not None, table, len(instances),
                                 len(csp.vars), csp.nodes, core)


def _deletion_core(csp: _TableCSP) -> list[int]:
    """An irreducible set of gain assignments that already admits no common table."""
    keep = list(range(len(csp.scopes)))
    i = 0
    while i < len(keep):
        trial = keep[:i] + keep[i + 1:]
        if csp.solve(trial) is None:
            keep = trial
        else:
            i += 1
    return keep


def class_search(labels: Iterable[str], g: int = 1, genie: bool = True) -> dict[str, UniversalSearchResult]:
    return {lab: no_universal_strategy_search(class_topology(lab), g, genie) for lab in labels}

