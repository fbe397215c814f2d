"""Local views after one and a half rounds of link-state message passing.

Nodes are transmitters and receivers of a bipartite graph with one edge
per link.  A link's distance from a node is one more than the graph
distance to the nearer of its two endpoints, so links incident to the node
sit at distance 1.  Transmitters end up knowing the links within distance
2 and receivers the links within distance 3.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import ContractViolation
from .network import GainMatrix, Link, Topology

TX, RX = "T", "R"
INF = math.inf

TX_RADIUS = 2
RX_RADIUS = 3


@dataclass(frozen=True, order=True)
class NodeId:
    role: str
    index: int

    def __post_init__(self):
        if self.role not in (TX, RX):
            raise ContractViolation(f"role must be {TX!r} or {RX!r}, got {self.role!r}")
        if self.index < 1:
            raise ContractViolation(f"node index must be positive, got {self.index}")

    def __str__(self):
        return f"{self.role}{self.index}"

    @classmethod
    def parse(cls, text: str) -> NodeId:
        text = text.strip().upper()
        if len(text) < 2 or text[0] not in (TX, RX) or not text[1:].isdigit():
            raise ValueError(f"node must look like T3 or R1, got {text!r}")
        return cls(text[0], int(text[1:]))


def _check_node(t: Topology, v: NodeId) -> None:
    if v.index > t.K:
        raise ContractViolation(f"{v} is outside users 1..{t.K}")


@lru_cache(maxsize=4096)
def _distances(t: Topology, v: NodeId) -> dict[NodeId, int]:
    dist = {v: 0}
    todo = deque([v])
    while todo:
        u = todo.popleft()
        if u.role == TX:
            nbrs = [NodeId(RX, r) for r in t.receivers_of(u.index)]
        else:
            nbrs = [NodeId(TX, s) for s in t.transmitters_into(u.index)]
        for w in nbrs:
            if w not in dist:
                dist[w] = dist[u] + 1
                todo.append(w)
    return dist


def link_hop_distance(t: Topology, v: NodeId, e: Link) -> float:
    """Hop distance from node ``v`` to link ``e``; ``math.inf`` if unreachable."""
    _check_node(t, v)
    if e not in t.links:
        raise ContractViolation(f"{e} is not a link of the topology")
    dist = _distances(t, v)
    near = min(dist.get(NodeId(TX, e[0]), INF), dist.get(NodeId(RX, e[1]), INF))
    return near + 1


@lru_cache(maxsize=4096)
def links_within(t: Topology, v: NodeId, radius: int) -> frozenset[Link]:
    return frozenset(e for e in t.links if link_hop_distance(t, v, e) <= radius)


@dataclass(frozen=True)
class LocalView:
    """What one node knows: the gains of the links in its ball.

    ``genie_topology`` carries global connectivity (no gains) when the
    genie is switched on.
    """

    owner: NodeId
    known: tuple[tuple[Link, int], ...]
    genie_topology: Topology | None = None

    @property
    def gains(self) -> dict[Link, int]:
        return dict(self.known)

    @property
    def links(self) -> frozenset[Link]:
        return frozenset(l for l, _ in self.known)

    def gain(self, link: Link) -> int:
        for l, n in self.known:
            if l == link:
                return n
        raise KeyError(f"{self.owner} does not know link {link}")

    def receivers_of(self, t: int) -> list[int]:
        return sorted(r for (s, r), _ in self.known if s == t)

    def transmitters_into(self, r: int) -> list[int]:
        return sorted(s for (s, rr), _ in self.known if rr == r)

    def covers(self, links) -> bool:
        return set(links) <= self.links

    def key(self) -> tuple:
        """Hashable identity of the view, used to index strategy tables."""
        return (self.owner, self.known, self.genie_topology)


def _view(gm: GainMatrix, v: NodeId, radius: int, genie: bool) -> LocalView:
    _check_node(gm.topology, v)
    ball = links_within(gm.topology, v, radius)
    known = tuple(sorted((l, gm.n(*l)) for l in ball))
    return LocalView(v, known, gm.topology if genie else None)


def tx_view(gm: GainMatrix, k: int, genie: bool = False) -> LocalView:
    return _view(gm, NodeId(TX, k), TX_RADIUS, genie)


def rx_view(gm: GainMatrix, j: int, genie: bool = False) -> LocalView:
    return _view(gm, NodeId(RX, j), RX_RADIUS, genie)


def view_of(gm: GainMatrix, node: NodeId, genie: bool = False) -> LocalView:
    return tx_view(gm, node.index, genie) if node.role == TX else rx_view(gm, node.index, genie)

