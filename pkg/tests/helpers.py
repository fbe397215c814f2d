"""Reference implementations used only by the tests.

Everything here is written from scratch by direct simulation so that the
package's rank and bitmask shortcuts are checked against something they
do not share code with.
"""

from __future__ import annotations

import itertools

from localview.gf2 import enumerate_subspaces
from localview.network import CROSS3, GainMatrix, Topology


def all_three_user_topologies():
    for mask in range(1 << len(CROSS3)):
        yield Topology.from_cross(3, [l for i, l in enumerate(CROSS3) if mask >> i & 1])


def codewords(q, basis):
    """Every (coefficients, codeword) pair of a generator given by columns."""
    out = []
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        w = 0
        for c, b in zip(coeffs, basis):
            if c:
                w ^= b
        out.append((coeffs, w))
    return out


def received_word(gm, q, j, words):
    y = 0
    for k in gm.topology.transmitters_into(j):
        y ^= words[k - 1] >> (q - gm.n(k, j))
    return y


def simulated_decodable(gm: GainMatrix, q: int, bases) -> bool:
    """Zero-error check by listing every joint message.

    Receiver j decodes iff its received word determines transmitter j's
    message coefficients, whatever the others send.
    """
    books = [codewords(q, b) for b in bases]
    for j in gm.topology.users:
        seen = {}
        for combo in itertools.product(*books):
            y = received_word(gm, q, j, [w for _, w in combo])
            msg = combo[j - 1][0]
            if seen.setdefault(y, msg) != msg:
                return False
    return True


def simulated_sum_capacity(gm: GainMatrix) -> int:
    """Best total dimension over every tuple of subspaces, by simulation."""
    q = gm.q
    subs = enumerate_subspaces(q)
    best = 0
    for tup in itertools.product(subs, repeat=gm.K):
        total = sum(s.dim for s in tup)
        if total > best and simulated_decodable(gm, q, [s.basis for s in tup]):
            best = total
    return best


def view_links_by_bfs(t: Topology, role: str, index: int, radius: int):
    """Links whose nearer endpoint is within ``radius - 1`` hops, by plain BFS."""
    adj = {}
    for a, b in t.links:
        adj.setdefault(("T", a), set()).add(("R", b))
        adj.setdefault(("R", b), set()).add(("T", a))
    start = (role, index)
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for w in adj.get(u, ()):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    inf = float("inf")
    return {(a, b) for a, b in t.links
            if min(dist.get(("T", a), inf), dist.get(("R", b), inf)) + 1 <= radius}
