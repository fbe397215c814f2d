"""Topologies, gain matrices, the received-signal map and component tags."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from ._data import instance_data
from .errors import ContractViolation, DimensionError, InvalidGainError
from .gf2 import BitVector, shift_matrix

Link = tuple[int, int]  # (transmitter, receiver), 1-indexed


@dataclass(frozen=True)
class Topology:
    """User count plus the set of existing links; direct links always exist."""

    K: int
    links: frozenset[Link]

    def __post_init__(self):
        if self.K < 1:
            raise ContractViolation(f"K must be positive, got {self.K}")
        object.__setattr__(self, "links", frozenset(self.links))
        for t, r in self.links:
            if not (1 <= t <= self.K and 1 <= r <= self.K):
                raise ContractViolation(f"link ({t}, {r}) outside users 1..{self.K}")
        missing = [k for k in self.users if (k, k) not in self.links]
        if missing:
            raise ContractViolation(f"direct links missing for users {missing}")

    @classmethod
    def from_cross(cls, K: int, cross: Iterable[Link]) -> Topology:
        return cls(K, frozenset(cross) | {(k, k) for k in range(1, K + 1)})

    @classmethod
    def fully_connected(cls, K: int) -> Topology:
        return cls(K, frozenset(itertools.product(range(1, K + 1), repeat=2)))

    @property
    def users(self) -> range:
        return range(1, self.K + 1)

    @property
    def cross_links(self) -> frozenset[Link]:
        return frozenset(l for l in self.links if l[0] != l[1])

    def receivers_of(self, t: int) -> list[int]:
        return sorted(r for (tt, r) in self.links if tt == t)

    def transmitters_into(self, r: int) -> list[int]:
        return sorted(t for (t, rr) in self.links if rr == r)

    def degree(self, t: int) -> int:
        return len(self.receivers_of(t))

    def relabel(self, perm: Mapping[int, int] | Sequence[int]) -> Topology:
        """Move user pair ``k`` to ``perm[k]`` (a sequence is read 1-indexed)."""
        p = _perm_map(perm, self.K)
        return Topology(self.K, frozenset((p[t], p[r]) for t, r in self.links))

    def restrict(self, members: Iterable[int]) -> Topology:
        """Induced topology on ``members``, relabelled 1..m in ascending order."""
        order = sorted(members)
        new = {u: i + 1 for i, u in enumerate(order)}
        return Topology(len(order), frozenset(
            (new[t], new[r]) for t, r in self.links if t in new and r in new))

    def without_users(self, drop: Iterable[int]) -> Topology:
        drop = set(drop)
        return self.restrict(u for u in self.users if u not in drop)

    def cross_string(self) -> str:
        return " ".join(f"{t}{r}" if self.K < 10 else f"{t}-{r}"
                        for t, r in sorted(self.cross_links)) or "-"


def _perm_map(perm, K: int) -> dict[int, int]:
    p = dict(perm) if isinstance(perm, Mapping) else {i + 1: v for i, v in enumerate(perm)}
    if sorted(p) != list(range(1, K + 1)) or sorted(p.values()) != list(range(1, K + 1)):
        raise ContractViolation(f"not a permutation of 1..{K}: {perm!r}")
    return p


@dataclass(frozen=True)
class GainMatrix:
    """Integer gains on the links of a topology, ``n[(t, r)]``.

    Existing links may carry gain 0; absent links are identically zero and
    are not stored.
    """

    topology: Topology
    entries: tuple[tuple[Link, int], ...]
    _gains: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        gains = dict(self.entries)
        if len(gains) != len(self.entries):
            raise ContractViolation("duplicate link in gain entries")
        if set(gains) != set(self.topology.links):
            extra = sorted(set(gains) - self.topology.links)
            missing = sorted(self.topology.links - set(gains))
            raise ContractViolation(f"gains must cover exactly the links (extra={extra}, missing={missing})")
        for link, n in gains.items():
            if not isinstance(n, int) or isinstance(n, bool) or n < 0:
                raise InvalidGainError(f"gain on {link} must be a nonnegative integer, got {n!r}")
        object.__setattr__(self, "entries", tuple(sorted(gains.items())))
        object.__setattr__(self, "_gains", gains)

    @classmethod
    def from_dict(cls, topology: Topology, gains: Mapping[Link, int]) -> GainMatrix:
        return cls(topology, tuple(gains.items()))

    @classmethod
    def from_triples(cls, K: int, triples: Iterable[Sequence[int]]) -> GainMatrix:
        triples = [tuple(x) for x in triples]
        topo = Topology(K, frozenset((t, r) for t, r, _ in triples))
        return cls(topo, tuple(((t, r), n) for t, r, n in triples))

    @classmethod
    def uniform(cls, topology: Topology, n: int) -> GainMatrix:
        return cls(topology, tuple((l, n) for l in topology.links))

    @property
    def K(self) -> int:
        return self.topology.K

    @property
    def gains(self) -> dict[Link, int]:
        return dict(self._gains)

    def n(self, t: int, r: int) -> int:
        return self._gains.get((t, r), 0)

    @property
    def q(self) -> int:
        """Max gain over the network; an all-zero network still has one level."""
        return max(max(self._gains.values()), 1)

    def with_gains(self, updates: Mapping[Link, int]) -> GainMatrix:
        for link in updates:
            if link not in self._gains:
                raise ContractViolation(f"{link} is not a link of this topology")
        return GainMatrix(self.topology, tuple({**self._gains, **updates}.items()))

    def relabel(self, perm) -> GainMatrix:
        p = _perm_map(perm, self.K)
        return GainMatrix(self.topology.relabel(p),
                          tuple(((p[t], p[r]), n) for (t, r), n in self.entries))

    def restrict(self, members: Iterable[int]) -> GainMatrix:
        order = sorted(members)
        new = {u: i + 1 for i, u in enumerate(order)}
        return GainMatrix(self.topology.restrict(order), tuple(
            ((new[t], new[r]), n) for (t, r), n in self.entries if t in new and r in new))

    def triples(self) -> list[tuple[int, int, int]]:
        return [(t, r, n) for (t, r), n in self.entries]

    def describe(self) -> str:
        return " ".join(f"n{t}{r}={n}" if self.K < 10 else f"n{t},{r}={n}"
                        for (t, r), n in self.entries)


def received_signal(gm: GainMatrix, inputs: Sequence[BitVector]) -> list[BitVector]:
    """Receiver outputs: ``Y_j = XOR_k S(q, n_kj) X_k``."""
    q = gm.q
    if len(inputs) != gm.K:
        raise DimensionError(f"expected {gm.K} transmit vectors, got {len(inputs)}")
    for k, x in enumerate(inputs, 1):
        if x.q != q:
            raise DimensionError(f"input of transmitter {k} has {x.q} levels, network has q={q}")
    out = []
    for j in gm.topology.users:
        y = BitVector(q, 0)
        for k in gm.topology.transmitters_into(j):
            y = y ^ shift_matrix(q, gm.n(k, j)).matvec(inputs[k - 1])
        out.append(y)
    return out


def connected_components(t: Topology) -> list[tuple[int, ...]]:
    """User groups joined through the undirected tx/rx link graph.

    Every link ``(a, b)`` joins user pair ``a`` with user pair ``b`` because
    the direct links tie each transmitter to its own receiver.
    """
    return list(_components(t))


@lru_cache(maxsize=4096)
def _components(t: Topology) -> tuple[tuple[int, ...], ...]:
    parent = {u: u for u in t.users}

    def find(u):
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for a, b in t.links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for u in t.users:
        groups.setdefault(find(u), []).append(u)
    return tuple(sorted(tuple(g) for g in groups.values()))


ONE_TO_MANY = "one-to-many"
FULLY_CONNECTED = "fully-connected"
OTHER = "other"


@dataclass(frozen=True)
class Classification:
    kind: str
    hub: int | None = None

    @property
    def qualifies(self) -> bool:
        return self.kind in (ONE_TO_MANY, FULLY_CONNECTED)

    def __str__(self):
        if self.kind == ONE_TO_MANY:
            return f"OneToMany(hub={self.hub})"
        return "FullyConnected" if self.kind == FULLY_CONNECTED else "Other"


@dataclass(frozen=True)
class Component:
    members: tuple[int, ...]
    tag: Classification


def classify_component(t: Topology, members: Iterable[int]) -> Classification:
    return _classify(t, tuple(sorted(set(members))))


@lru_cache(maxsize=4096)
def _classify(t: Topology, members: tuple[int, ...]) -> Classification:
    if members not in _components(t):
        raise ContractViolation(f"{members} is not a connected component of the topology")
    m = len(members)
    links = [(a, b) for a, b in t.links if a in members]
    if m == 1:
        return Classification(ONE_TO_MANY, members[0])
    if len(links) == 2 * m - 1:
        hubs = [u for u in members if t.degree(u) == m]
        others_own_only = all(t.receivers_of(u) == [u] for u in members if u not in hubs)
        if len(hubs) == 1 and others_own_only:
            return Classification(ONE_TO_MANY, hubs[0])
    if len(links) == m * m:
        return Classification(FULLY_CONNECTED)
    return Classification(OTHER)


def components(t: Topology) -> list[Component]:
    return [Component(g, classify_component(t, g)) for g in connected_components(t)]


def qualifies(t: Topology) -> bool:
    """True iff every component is one-to-many or fully connected."""
    return all(c.tag.qualifies for c in components(t))


# --- three-user equivalence classes -------------------------------------

CROSS3: tuple[Link, ...] = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))


def _cross_mask(links: Iterable[Link]) -> int:
    s = set(links)
    return sum(1 << i for i, l in enumerate(CROSS3) if l in s)


def _mask_links(mask: int) -> list[Link]:
    return [l for i, l in enumerate(CROSS3) if mask >> i & 1]


def canonical_cross_mask(t: Topology) -> int:
    """Smallest cross-link mask over all relabelings of the three user pairs."""
    if t.K != 3:
        raise ContractViolation("three-user classes need K = 3")
    cross = t.cross_links
    return min(_cross_mask((p[a - 1], p[b - 1]) for a, b in cross)
               for p in itertools.permutations((1, 2, 3)))


@dataclass(frozen=True)
class ThreeUserClass:
    label: str
    canonical: Topology
    orbit_size: int
    representative: Topology

    @property
    def qualifies(self) -> bool:
        return qualifies(self.canonical)


def enumerate_three_user_classes() -> list[ThreeUserClass]:
    """The 16 orbits of the 64 cross-link subsets under user relabeling."""
    orbits: dict[int, int] = {}
    for mask in range(1 << len(CROSS3)):
        key = canonical_cross_mask(Topology.from_cross(3, _mask_links(mask)))
        orbits[key] = orbits.get(key, 0) + 1

    reps = {label: Topology.from_cross(3, map(tuple, cross))
            for label, cross in instance_data()["classes"].items()}
    by_key = {canonical_cross_mask(rep): label for label, rep in reps.items()}
    if set(by_key) != set(orbits):
        raise ContractViolation("class table in the data file does not cover every orbit")
    out = [ThreeUserClass(by_key[key], Topology.from_cross(3, _mask_links(key)), size,
                          reps[by_key[key]])
           for key, size in orbits.items()]
    return sorted(out, key=lambda c: c.label)


def three_user_class(t: Topology) -> ThreeUserClass:
    key = canonical_cross_mask(t)
    for c in enumerate_three_user_classes():
        if canonical_cross_mask(c.canonical) == key:
            return c
    raise AssertionError("unreachable: every topology lies in some orbit")


def class_topology(label: str) -> Topology:
    for c in enumerate_three_user_classes():
        if c.label == label:
            return c.representative
    raise KeyError(f"unknown topology class {label!r}")
