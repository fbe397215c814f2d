"""The local-view distributed strategy and the zero-error decodability test.

Every transmitter looks only at its own view and recognises one of four
local pictures:

1. it reaches only its own receiver, which hears at most one other
   transmitter: it sends its top ``n_kk`` levels;
2. it is the hub of a one-to-many picture: it sends on the levels that
   land clear of every victim's own top levels;
3. its receivers all hear exactly the same transmitter set as it reaches:
   it sends its share of the shared canonical optimum for that block;
4. anything else: it stays silent.

With the genie switched on, the picture is read from the true component
instead of the visible links.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import ContractViolation, DimensionError, InvariantViolation, SizeGuardError
from .gf2 import BitMatrix, Subspace, gf2_rank, levels_word, shift_word, word_levels
from .network import (FULLY_CONNECTED, ONE_TO_MANY, GainMatrix, Topology,
                      classify_component, connected_components)
from .oracle import collides, optimal_assignment
from .views import TX, LocalView, tx_view

CASE_MEMBER = "one-to-many member"
CASE_HUB = "one-to-many hub"
CASE_FULL = "fully-connected share"
CASE_SILENT = "silent"


@dataclass(frozen=True)
class RateVector:
    rates: tuple[int, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.rates):
            raise ContractViolation("rates must be nonnegative")

    @property
    def sum(self) -> int:
        return sum(self.rates)

    def __getitem__(self, k: int) -> int:
        """Rate of user ``k`` (1-indexed)."""
        return self.rates[k - 1]

    def __iter__(self):
        return iter(self.rates)

    def __len__(self):
        return len(self.rates)


@dataclass(frozen=True)
class LevelStrategy:
    """Per-transmitter generator matrices, stored as their column words."""

    q: int
    columns: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for k, cols in enumerate(self.columns, 1):
            if any(not 0 <= c < 1 << self.q for c in cols):
                raise DimensionError(f"transmitter {k} has a column wider than q={self.q}")
            if gf2_rank(cols) != len(cols):
                raise ContractViolation(f"transmitter {k} has dependent generator columns")

    @classmethod
    def from_levels(cls, q: int, level_sets: Sequence[Sequence[int]]) -> LevelStrategy:
        return cls(q, tuple(tuple(levels_word(q, [l]) for l in sorted(ls)) for ls in level_sets))

    @classmethod
    def from_subspaces(cls, subspaces: Sequence[Subspace]) -> LevelStrategy:
        qs = {s.q for s in subspaces}
        if len(qs) != 1:
            raise DimensionError("all codebooks must share one level count")
        return cls(qs.pop(), tuple(s.basis for s in subspaces))

    @classmethod
    def silent(cls, q: int, K: int) -> LevelStrategy:
        return cls(q, ((),) * K)

    @property
    def K(self) -> int:
        return len(self.columns)

    @property
    def rates(self) -> RateVector:
        return RateVector(tuple(len(c) for c in self.columns))

    def generator(self, k: int) -> BitMatrix:
        return BitMatrix.from_columns(self.q, self.columns[k - 1])

    def subspace(self, k: int) -> Subspace:
        return Subspace.span(self.q, self.columns[k - 1])

    def levels(self, k: int) -> tuple[int, ...] | None:
        """The raw levels used by transmitter ``k``, or None if its columns are coded."""
        cols = self.columns[k - 1]
        if any(c & (c - 1) for c in cols):
            return None
        return word_levels(self.q, sum(cols))


@dataclass(frozen=True)
class Decodability:
    ok: bool
    receivers: tuple[bool, ...]


def decodable(gm: GainMatrix, s: LevelStrategy) -> Decodability:
    """Zero-error single-shot check at every receiver.

    Receiver j decodes iff its own image keeps full rank and meets the
    sum of the interfering images only in zero.
    """
    if s.K != gm.K:
        raise DimensionError(f"strategy has {s.K} transmitters, network has {gm.K}")
    if s.q < gm.q:
        raise DimensionError(f"strategy uses q={s.q} but gains reach {gm.q}")
    q = s.q
    verdicts = []
    for j in gm.topology.users:
        own = [shift_word(q, gm.n(j, j), c) for c in s.columns[j - 1]]
        interference = [shift_word(q, gm.n(k, j), c)
                        for k in gm.topology.transmitters_into(j) if k != j
                        for c in s.columns[k - 1]]
        r = len(own)
        full_rank = gf2_rank(own) == r
        rank_i = gf2_rank(interference)
        verdicts.append(full_rank and gf2_rank(own + interference) == r + rank_i)
    return Decodability(all(verdicts), tuple(verdicts))


# --- per-transmitter decisions ------------------------------------------------

@dataclass(frozen=True)
class TxDecision:
    """A transmitter's choice, as column words over its own ``q_local`` top levels."""

    case: str
    q_local: int
    columns: tuple[int, ...] = ()

    def embed(self, q: int) -> tuple[int, ...]:
        if q < self.q_local:
            raise DimensionError(f"decision needs {self.q_local} levels, network has {q}")
        return tuple(c << (q - self.q_local) for c in self.columns)

    @property
    def rate(self) -> int:
        return len(self.columns)


def _top_levels(n: int) -> TxDecision:
    q = max(n, 1)
    return TxDecision(CASE_MEMBER, q, tuple(levels_word(q, [l]) for l in range(1, n + 1)))


def _owner(view: LocalView) -> int:
    if view.owner.role != TX:
        raise ContractViolation(f"strategy decisions need a transmitter view, got {view.owner}")
    return view.owner.index


def _true_block(view: LocalView) -> tuple[tuple[int, ...], object]:
    t = view.genie_topology
    k = _owner(view)
    block = next(c for c in connected_components(t) if k in c)
    return block, classify_component(t, block)


def _local_hub_victims(view: LocalView) -> list[int] | None:
    """Victims of a one-to-many picture centred on the view's owner, if it shows one."""
    k = _owner(view)
    reach = view.receivers_of(k)
    if len(reach) < 2 or view.transmitters_into(k) != [k]:
        return None
    victims = [j for j in reach if j != k]
    if all(view.transmitters_into(j) == sorted({k, j}) for j in victims):
        return victims
    return None


def _local_full_block(view: LocalView) -> list[int] | None:
    k = _owner(view)
    reach = view.receivers_of(k)
    if len(reach) >= 2 and all(view.transmitters_into(j) == reach for j in reach):
        return reach
    return None


def hub_free_levels(view: LocalView) -> frozenset[int]:
    """Hub levels that land below every victim's own top levels."""
    h = _owner(view)
    if view.genie_topology is not None:
        block, tag = _true_block(view)
        if tag.kind != ONE_TO_MANY or tag.hub != h:
            raise ContractViolation(f"T{h} is not the hub of a one-to-many component")
        victims = [i for i in block if i != h]
    else:
        victims = _local_hub_victims(view)
        if victims is None:
            if view.receivers_of(h) == [h]:
                victims = []
            else:
                raise ContractViolation(f"T{h}'s view does not show a one-to-many picture")
    g = view.gains
    n_hh = g[(h, h)]
    return frozenset(level for level in range(1, n_hh + 1)
                     if not any(collides(g[(h, i)], g[(i, i)], level) for i in victims))


def fully_connected_assignment(view: LocalView, members: Sequence[int] | None = None) -> dict[int, Subspace]:
    """The canonical optimum of a fully-connected block, from one member's view.

    Codebooks are over the block's own level count, top-aligned.
    """
    if members is None:
        members = _local_full_block(view)
        if members is None:
            raise ContractViolation(f"{view.owner}'s view does not show a fully-connected block")
    members = sorted(members)
    g = view.gains
    need = [(t, r) for t in members for r in members]
    if not all(l in g for l in need):
        raise ContractViolation(f"{view.owner}'s view does not cover the block {members}")
    key = tuple(tuple(g[(t, r)] for r in members) for t in members)
    try:
        shares = _block_optimum(key)
    except SizeGuardError as exc:
        raise SizeGuardError(f"fully-connected share for users {members} needs the oracle: {exc}") from None
    return dict(zip(members, shares))


@lru_cache(maxsize=1 << 16)
def _block_optimum(key: tuple[tuple[int, ...], ...]) -> tuple[Subspace, ...]:
    L = len(key)
    local = GainMatrix(Topology.fully_connected(L),
                       tuple(((t + 1, r + 1), key[t][r]) for t in range(L) for r in range(L)))
    got = optimal_assignment(local, range(1, L + 1))
    return tuple(got[u] for u in range(1, L + 1))


def _full_share(view: LocalView, members) -> TxDecision:
    k = _owner(view)
    share = fully_connected_assignment(view, members)[k]
    return TxDecision(CASE_FULL, share.q, share.basis)


def _hub(view: LocalView) -> TxDecision:
    levels = sorted(hub_free_levels(view))
    q = max(view.gain((_owner(view),) * 2), 1)
    return TxDecision(CASE_HUB, q, tuple(levels_word(q, [l]) for l in levels))


def transmitter_decision(view: LocalView) -> TxDecision:
    """What one transmitter sends, as a function of its own view alone."""
    k = _owner(view)
    n_kk = view.gain((k, k))
    if view.genie_topology is not None:
        block, tag = _true_block(view)
        if tag.kind == ONE_TO_MANY:
            return _hub(view) if tag.hub == k and len(block) > 1 else _top_levels(n_kk)
        if tag.kind == FULLY_CONNECTED:
            return _full_share(view, block)
        return TxDecision(CASE_SILENT, 1)

    if view.receivers_of(k) == [k] and len(view.transmitters_into(k)) <= 2:
        return _top_levels(n_kk)
    if _local_hub_victims(view) is not None:
        return _hub(view)
    block = _local_full_block(view)
    if block is not None:
        return _full_share(view, block)
    return TxDecision(CASE_SILENT, 1)


def distributed_strategy(views: Sequence[LocalView], q: int | None = None) -> LevelStrategy:
    """Assemble the per-transmitter decisions into one strategy.

    ``views`` holds one transmitter view per user, in user order.  The
    network level count defaults to the largest gain any view reports.
    """
    for k, v in enumerate(views, 1):
        if v.owner.role != TX or v.owner.index != k:
            raise ContractViolation(f"view {k} belongs to {v.owner}, expected T{k}")
    if q is None:
        q = max([1] + [n for v in views for _, n in v.known])
    decisions = [transmitter_decision(v) for v in views]
    return LevelStrategy(q, tuple(d.embed(q) for d in decisions))


def decisions(gm: GainMatrix, genie: bool = False) -> list[TxDecision]:
    return [transmitter_decision(tx_view(gm, k, genie)) for k in gm.topology.users]


def run_distributed(gm: GainMatrix, genie: bool = False) -> tuple[LevelStrategy, Decodability]:
    views = [tx_view(gm, k, genie) for k in gm.topology.users]
    s = distributed_strategy(views, gm.q)
    return s, decodable(gm, s)


def achieved_sum_rate(gm: GainMatrix, genie: bool = False) -> RateVector:
    """Rates of the distributed strategy; raises if any receiver fails to decode."""
    s, verdict = run_distributed(gm, genie)
    if not verdict.ok:
        failed = [j for j, ok in enumerate(verdict.receivers, 1) if not ok]
        raise InvariantViolation(f"distributed strategy not decodable at receivers {failed} "
                                 f"for gains {gm.describe()}")
    return s.rates

