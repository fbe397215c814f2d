"""Centralized linear single-shot sum-capacity oracle.

Each transmitter picks one subspace of GF(2)^q as its codebook.  The
search runs per connected component (components cannot interfere) and
returns the maximum total dimension over all decodable tuples, together
with a canonical witness: the optimal tuple whose rate vector is
lexicographically smallest, ties broken by canonical subspace order.

Two search methods share the same candidate sets:

* ``enumerate`` checks every tuple at once with precomputed sum and
  intersection tables (q <= 5);
* ``branch`` is a depth-first branch and bound over membership masks.

Candidates are pruned without loss: a codebook must be injective under
its own direct link, and codebooks with identical images at every
receiver are interchangeable, so only the canonically smallest of each
class is kept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._masks import MaskSpace, mask_dim, mask_space
from .errors import ContractViolation, SizeGuardError
from .gf2 import Subspace
from .network import (ONE_TO_MANY, GainMatrix, Topology, classify_component,
                      connected_components)

QUALIFIER = "linear single-shot"

MAX_COMPONENT_USERS = 4
MAX_LEVELS_BY_SIZE = {1: 6, 2: 6, 3: 6, 4: 4}
MAX_TABLE_LEVELS = 5
ENUMERATE_LIMIT = 20_000


@dataclass(frozen=True)
class CapacityResult:
    sum_rate: int
    rates: tuple[int, ...]
    encoders: tuple[Subspace, ...]
    qualifier: str = QUALIFIER
    component_sums: tuple[tuple[tuple[int, ...], int], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.sum_rate != sum(self.rates):
            raise ContractViolation("sum rate must equal the sum of the witness rates")


def check_guard(gm: GainMatrix, members: Sequence[int] | None = None) -> None:
    """Raise ``SizeGuardError`` if a (sub)network is too large to search."""
    members = tuple(members) if members is not None else tuple(gm.topology.users)
    size = len(members)
    q = _component_q(gm, members)
    if size > MAX_COMPONENT_USERS:
        raise SizeGuardError(
            f"oracle searches at most {MAX_COMPONENT_USERS} coupled users; "
            f"users {list(members)} form a block of {size}")
    if q > MAX_LEVELS_BY_SIZE[size]:
        raise SizeGuardError(
            f"oracle bound for {size} coupled users is q <= {MAX_LEVELS_BY_SIZE[size]}; "
            f"users {list(members)} need q = {q}")


def _component_q(gm: GainMatrix, members) -> int:
    ms = set(members)
    return max([1] + [n for (t, r), n in gm.entries if t in ms and r in ms])


def _gain_key(gm: GainMatrix, members) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(gm.n(t, r) for r in members) for t in members)


# --- lookup tables for the enumerate method ---------------------------------

@lru_cache(maxsize=None)
def _tables(q: int) -> tuple[np.ndarray, np.ndarray]:
    """``add[i, j]`` = index of subspace i + j; ``trivial[i, j]`` = i and j meet only in 0."""
    ms = mask_space(q)
    order = np.argsort(ms.masks_np)
    sorted_masks = ms.masks_np[order]
    count = len(ms.subspaces)
    add = np.empty((count, count), dtype=np.int32)
    for j, s in enumerate(ms.subspaces):
        m = ms.masks_np.copy()
        for v in s.basis:
            m |= ms.translate_var(m, np.full(count, v, dtype=np.uint64))
        add[:, j] = order[np.searchsorted(sorted_masks, m)]
    trivial = (ms.masks_np[:, None] & ms.masks_np[None, :]) == np.uint64(1)
    return add, trivial


# --- per-component search ---------------------------------------------------

@lru_cache(maxsize=4096)
def _candidates(q: int, own: int, cross: tuple[int, ...], levels_only: bool) -> np.ndarray:
    """Canonical representatives of the useful codebooks for one transmitter.

    Only the gains matter: the codebook must be injective under ``own``,
    and two codebooks with equal images under ``own`` and every gain in
    ``cross`` are interchangeable.
    """
    ms = mask_space(q)
    ok = ms.injective[own]
    if levels_only:
        ok = ok & ms.coordinate
    idx = np.flatnonzero(ok)
    count = len(ms.subspaces)
    key = np.zeros(len(idx), dtype=np.int64)
    for n in (own,) + tuple(sorted(set(cross))):
        key = key * count + ms.image[n][idx]
    _, first = np.unique(key, return_index=True)
    result = idx[np.sort(first)]
    result.setflags(write=False)
    return result


class _Component:
    """Search state for one coupled block, users relabelled 0..m-1."""

    def __init__(self, gains: tuple[tuple[int, ...], ...], levels_only: bool = False):
        self.n = gains
        self.m = len(gains)
        self.q = max([1] + [x for row in gains for x in row])
        self.ms: MaskSpace = mask_space(self.q)
        ms = self.ms
        m = self.m
        self.out = [[j for j in range(m) if j != k and gains[k][j] > 0] for k in range(m)]
        self.into = [[k for k in range(m) if k != j and gains[k][j] > 0] for j in range(m)]

        self.cands = [_candidates(self.q, gains[k][k], tuple(sorted(gains[k][j] for j in self.out[k])),
                                  levels_only) for k in range(m)]
        self.dims = [ms.dims[c] for c in self.cands]

    # enumerate -------------------------------------------------------------

    def tuple_count(self, cands=None) -> int:
        cands = self.cands if cands is None else cands
        return int(np.prod([len(c) for c in cands], dtype=np.float64))

    def _grid(self, cands):
        grids = np.meshgrid(*cands, indexing="ij")
        return [g.ravel() for g in grids]

    def _decodable_grid(self, cols) -> np.ndarray:
        add, trivial = _tables(self.q)
        img = self.ms.image
        ok = np.ones(len(cols[0]), dtype=bool)
        for j in range(self.m):
            if not self.into[j]:
                continue
            interf = None
            for k in self.into[j]:
                part = img[self.n[k][j]][cols[k]]
                interf = part if interf is None else add[interf, part]
            own = img[self.n[j][j]][cols[j]]
            ok &= trivial[own, interf]
        return ok

    def enumerate_best(self, rates=None):
        cands = self.cands
        if rates is not None:
            cands = [c[self.ms.dims[c] == r] for c, r in zip(cands, rates)]
            if any(len(c) == 0 for c in cands):
                return None
        cols = self._grid(cands)
        ok = self._decodable_grid(cols)
        if not ok.any():
            return None
        dims = [self.ms.dims[c] for c in cols]
        total = np.sum(dims, axis=0)
        best = total[ok].max()
        sel = np.flatnonzero(ok & (total == best))
        keys = [c[sel] for c in reversed(cols)] + [d[sel] for d in reversed(dims)]
        pick = sel[np.lexsort(keys)[0]]
        return int(best), tuple(int(c[pick]) for c in cols)

    # branch and bound ------------------------------------------------------

    def _prepare_masks(self):
        if hasattr(self, "_own_masks"):
            return
        ms = self.ms
        self._own_masks = [ms.masks_np[ms.image[self.n[k][k]][c]] for k, c in enumerate(self.cands)]
        self._out_masks = [{j: ms.masks_np[ms.image[self.n[k][j]][c]] for j in self.out[k]}
                           for k, c in enumerate(self.cands)]
        self._img_dims = [{j: ms.dims[ms.image[self.n[k][j]][c]] for j in self.out[k]}
                          for k, c in enumerate(self.cands)]
        # levels visible at each receiver
        self._seen = [max(self.n[k][j] for k in range(self.m)) for j in range(self.m)]

    def _basis(self, k, j, idx):
        return self.ms.subspaces[int(self.ms.image[self.n[k][j]][idx])].basis

    def _filter(self, u, state, allowed):
        """Positions of user ``u``'s candidates compatible with the partial assignment."""
        interf, spans = state
        ok = allowed[u].copy()
        if interf[u] != 1:
            ok &= (self._own_masks[u] & np.uint64(interf[u])) == np.uint64(1)
        for j, mk in self._out_masks[u].items():
            if spans[j] is not None:
                # a new interferer must avoid (own + interference) minus interference
                forbid = np.uint64(spans[j] & ~interf[j])
                ok &= (mk & forbid) == np.uint64(0)
        return ok

    def _assign(self, u, idx, state):
        """State after user ``u`` takes subspace ``idx``.

        The state holds, per receiver, the interference mask and (once the
        receiver's own user is placed) the mask of own image + interference.
        """
        add = self.ms.add_basis
        interf, spans = list(state[0]), list(state[1])
        spans[u] = add(interf[u], self._basis(u, u, idx))
        for j in self.out[u]:
            b = self._basis(u, j, idx)
            interf[j] = add(interf[j], b)
            if spans[j] is not None:
                spans[j] = add(spans[j], b)
        return interf, spans

    def _start(self):
        return [1] * self.m, [None] * self.m

    def _next_user(self, oks):
        # fewest compatible candidates first, lowest index on ties
        return min(oks, key=lambda v: (int(oks[v].sum()), v))

    def _bound(self, rest, state, oks, maxd):
        """Upper bound on the rate still to be placed.

        Besides the per-user maxima, each interfering pair k -> j of
        unplaced users obeys r_j + dim(interference at j) <= levels seen at j.
        """
        interf = state[0]
        single = sum(maxd.values())
        bound = single
        for k in rest:
            for j in self.out[k]:
                if j not in maxd:
                    continue
                pos = oks[k]
                room = self._seen[j] - np.maximum(mask_dim(interf[j]), self._img_dims[k][j][pos])
                pair = int((self.dims[k][pos] + np.minimum(maxd[j], room)).max())
                bound = min(bound, single - maxd[k] - maxd[j] + pair)
        return bound

    def branch_best(self):
        self._prepare_masks()
        allowed = [np.ones(len(c), dtype=bool) for c in self.cands]
        best = -1

        def dfs(rest, state, total):
            nonlocal best
            oks = {u: self._filter(u, state, allowed) for u in rest}
            if not all(o.any() for o in oks.values()):
                return
            maxd = {u: int(self.dims[u][oks[u]].max()) for u in rest}
            if total + self._bound(rest, state, oks, maxd) <= best:
                return
            if len(rest) == 1:
                best = total + maxd[rest[0]]
                return
            u = self._next_user(oks)
            later = [v for v in rest if v != u]
            bound = sum(maxd[v] for v in later)
            pos = np.flatnonzero(oks[u])
            pos = pos[np.argsort(-self.dims[u][pos], kind="stable")]
            for p in pos:
                d = int(self.dims[u][p])
                if total + d + bound <= best:
                    break
                dfs(later, self._assign(u, int(self.cands[u][p]), state), total + d)

        dfs(list(range(self.m)), self._start(), 0)
        return best

    def _exists(self, rest, state, allowed):
        oks = {u: self._filter(u, state, allowed) for u in rest}
        if not all(o.any() for o in oks.values()):
            return False
        if len(rest) == 1:
            return True
        u = self._next_user(oks)
        later = [v for v in rest if v != u]
        return any(self._exists(later, self._assign(u, int(self.cands[u][p]), state), allowed)
                   for p in np.flatnonzero(oks[u]))

    def branch_find(self, rates):
        """Canonically first tuple with exactly these rates, or ``None``.

        Feasibility is settled first with dynamic ordering; the canonical
        tuple is then fixed one user at a time in index order.
        """
        self._prepare_masks()
        m = self.m
        allowed = [self.dims[k] == rates[k] for k in range(m)]
        if not all(a.any() for a in allowed):
            return None
        state = self._start()
        if not self._exists(list(range(m)), state, allowed):
            return None
        chosen = ()
        for u in range(m):
            rest = list(range(u + 1, m))
            ok = self._filter(u, state, allowed)
            for p in np.flatnonzero(ok):
                idx = int(self.cands[u][p])
                nxt = self._assign(u, idx, state)
                if not rest or self._exists(rest, nxt, allowed):
                    chosen += (idx,)
                    state = nxt
                    break
            else:  # pragma: no cover - feasibility was established above
                raise AssertionError("lost a feasible completion")
        return chosen

    # shared ----------------------------------------------------------------

    def solve(self, method: str = "auto"):
        if method == "auto":
            small = self.q <= MAX_TABLE_LEVELS and self.tuple_count() <= ENUMERATE_LIMIT
            method = "enumerate" if small else "branch"
        if method == "enumerate":
            if self.q > MAX_TABLE_LEVELS:
                raise SizeGuardError(f"enumerate method limited to q <= {MAX_TABLE_LEVELS}")
            return self.enumerate_best()
        if method != "branch":
            raise ValueError(f"unknown oracle method {method!r}")
        best = self.branch_best()
        for rates in _rate_vectors(best, [int(d.max()) for d in self.dims]):
            found = self.branch_find(rates)
            if found is not None:
                return best, found
        raise AssertionError("branch and bound optimum has no witness")  # pragma: no cover

    def find(self, rates, method: str = "auto"):
        if method == "auto":
            method = "enumerate" if self.q <= MAX_TABLE_LEVELS and self.tuple_count() <= ENUMERATE_LIMIT else "branch"
        if method == "enumerate":
            got = self.enumerate_best(rates)
            return None if got is None else got[1]
        return self.branch_find(rates)


def _rate_vectors(total: int, caps: list[int]):
    """Rate vectors with the given sum and per-user caps, in lexicographic order."""
    if not caps:
        if total == 0:
            yield ()
        return
    rest_cap = sum(caps[1:])
    for r in range(max(0, total - rest_cap), min(caps[0], total) + 1):
        for tail in _rate_vectors(total - r, caps[1:]):
            yield (r,) + tail


@lru_cache(maxsize=1 << 18)
def _solve(gains: tuple[tuple[int, ...], ...], method: str):
    return _Component(gains).solve(method)


# --- public API -------------------------------------------------------------

def _embed(q_from: int, q_to: int, s: Subspace) -> Subspace:
    shift = q_to - q_from
    return Subspace(q_to, tuple(v << shift for v in s.basis))


def _blocks(gm: GainMatrix, split: bool) -> list[tuple[int, ...]]:
    if split:
        return connected_components(gm.topology)
    return [tuple(gm.topology.users)]


def brute_force_sum_capacity(gm: GainMatrix, method: str = "auto", split: bool = True) -> CapacityResult:
    """Maximum total rate over decodable single-shot linear codebook tuples."""
    blocks = _blocks(gm, split)
    for members in blocks:
        check_guard(gm, members)
    q = gm.q
    rates = [0] * gm.K
    encoders: list[Subspace] = [Subspace(q)] * gm.K
    sums = []
    for members in blocks:
        key = _gain_key(gm, members)
        best, idx = _solve(key, method)
        qc = _component_q(gm, members)
        subs = mask_space(qc).subspaces
        for u, i in zip(members, idx):
            encoders[u - 1] = _embed(qc, q, subs[i])
            rates[u - 1] = subs[i].dim
        sums.append((members, best))
    return CapacityResult(sum(rates), tuple(rates), tuple(encoders), component_sums=tuple(sums))


def optimal_assignment(gm: GainMatrix, members: Sequence[int]) -> dict[int, Subspace]:
    """The canonical optimal codebooks of one block, in the block's own level count.

    Every node that knows the block's gains computes the same answer.
    """
    members = tuple(sorted(members))
    check_guard(gm, members)
    _, idx = _solve(_gain_key(gm, members), "auto")
    subs = mask_space(_component_q(gm, members)).subspaces
    return {u: subs[i] for u, i in zip(members, idx)}


def find_encoders(gm: GainMatrix, rates: Sequence[int], levels_only: bool = False,
                  method: str = "auto") -> tuple[Subspace, ...] | None:
    """Codebooks achieving exactly ``rates`` (raw level sets if ``levels_only``)."""
    if len(rates) != gm.K:
        raise ContractViolation(f"need {gm.K} rates, got {len(rates)}")
    q = gm.q
    out: list[Subspace] = [Subspace(q)] * gm.K
    for members in connected_components(gm.topology):
        check_guard(gm, members)
        comp = _Component(_gain_key(gm, members), levels_only=levels_only)
        found = comp.find([rates[u - 1] for u in members], method)
        if found is None:
            return None
        for u, i in zip(members, found):
            out[u - 1] = _embed(comp.q, q, comp.ms.subspaces[i])
    return tuple(out)


def decodable_index_tuples(gm: GainMatrix, q: int) -> tuple[np.ndarray, np.ndarray]:
    """Every codebook tuple over all subspaces of GF(2)^q, with a decodability flag.

    No candidate pruning is applied, so the rows cover the whole strategy
    space.  ``q`` must be at least the largest gain.
    """
    if q < gm.q and any(n for _, n in gm.entries):
        raise ContractViolation(f"ambient q={q} below the largest gain {gm.q}")
    if gm.K > 3 or q > 3:
        raise SizeGuardError("full tuple listing limited to K <= 3, q <= 3")
    gains = tuple(tuple(gm.n(t, r) for r in gm.topology.users) for t in gm.topology.users)
    comp = _Component.__new__(_Component)
    comp.n, comp.m, comp.q = gains, gm.K, q
    comp.ms = mask_space(q)
    comp.into = [[k for k in range(comp.m) if k != j and gains[k][j] > 0] for j in range(comp.m)]
    every = np.arange(len(comp.ms.subspaces))
    cols = comp._grid([every] * comp.m)
    ok = comp._decodable_grid(cols)
    for k in range(comp.m):
        ok &= comp.ms.injective[gains[k][k]][cols[k]]
    return np.stack(cols, axis=1), ok


# --- one-to-many closed form ------------------------------------------------

def collides(n_hub_victim: int, n_victim: int, level: int) -> bool:
    """Does hub level ``level`` land on one of the victim's top ``n_victim`` received levels?"""
    return n_hub_victim - n_victim < level <= n_hub_victim


def one_to_many_sum_capacity(gm: GainMatrix, hub: int) -> int:
    """Closed-form sum rate of the one-to-many block around ``hub``."""
    block = next(c for c in connected_components(gm.topology) if hub in c)
    tag = classify_component(gm.topology, block)
    if tag.kind != ONE_TO_MANY or tag.hub != hub:
        raise ContractViolation(f"users {list(block)} do not form a one-to-many block with hub {hub}")
    others = [i for i in block if i != hub]
    free = sum(1 for level in range(1, gm.n(hub, hub) + 1)
               if not any(collides(gm.n(hub, i), gm.n(i, i), level) for i in others))
    return sum(gm.n(i, i) for i in others) + free


@dataclass(frozen=True)
class CrossValidation:
    topology: Topology
    gain_bound: int
    cases: int
    mismatches: tuple[tuple[GainMatrix, int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def gain_assignments(t: Topology, g: int):
    links = sorted(t.links)
    for values in itertools.product(range(g + 1), repeat=len(links)):
        yield GainMatrix(t, tuple(zip(links, values)))


def cross_validate(t: Topology, g: int) -> CrossValidation:
    """Compare the closed form against the oracle for every gain assignment in 0..g."""
    blocks = connected_components(t)
    hubs = []
    for b in blocks:
        tag = classify_component(t, b)
        if tag.kind != ONE_TO_MANY:
            raise ContractViolation(f"block {list(b)} is not one-to-many")
        if len(b) > 3:
            raise SizeGuardError("cross validation limited to blocks of at most 3 users")
        hubs.append(tag.hub)
    if not 0 <= g <= 3:
        raise SizeGuardError("cross validation limited to gain bound 3")
    cases = 0
    bad = []
    for gm in gain_assignments(t, g):
        cases += 1
        closed = sum(one_to_many_sum_capacity(gm, h) for h in hubs)
        brute = brute_force_sum_capacity(gm).sum_rate
        if closed != brute:
            bad.append((gm, closed, brute))
    return CrossValidation(t, g, cases, tuple(bad))

