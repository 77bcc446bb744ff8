"""Labeled simple graphs as bitmask adjacency rows, plus domination primitives.

Vertex sets are plain Python ints used as bitmasks (bit v = vertex v); they
are the universal currency of every domination check in this package.
Python ints are arbitrary precision, so the same code covers both the fast
path (n <= 64, one machine word per row) and the documented slower
multi-word path for larger n.  Graphs are immutable after construction and
safe to share across threads; all mutation builds new values.

Plain-text serialization (golden files, CLI): first line ``n m``, then m
lines ``u v`` with u < v, sorted lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import hashlib

from .rng import RngStream

# Hard ceiling for graph construction; C(n,2) pair draws stay tractable.
MAX_VERTICES = 4096


class CapacityError(ValueError):
    """Requested size exceeds the supported maximum."""


def to_mask(vertices: Iterable[int]) -> int:
    """Pack an iterable of vertex labels into a bitmask."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def to_vertices(mask: int) -> list[int]:
    """Unpack a bitmask into the sorted list of vertex labels."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    adj[v] is the open-neighborhood bitmask of v.  Invariants: no
    self-loops, symmetric adjacency, no bits at positions >= n.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not (1 <= self.n <= MAX_VERTICES):
            raise CapacityError(f"n={self.n} outside supported range 1..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("adj must have exactly n rows")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def validate(self) -> None:
        """Check all Graph invariants; raises ValueError on violation."""
        full = self.full_mask
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"adjacency row {v} has bits beyond vertex {self.n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at vertex {v}")
        for v in range(self.n):
            for u in iter_bits(self.adj[v]):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric edge ({u},{v})")

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(row.bit_count() for row in self.adj)

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """All edges as sorted (u, v) pairs with u < v, lexicographic."""
        out = []
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1)
            for off in iter_bits(rest):
                out.append((u, u + 1 + off))
        return out

    def canonical_hash(self) -> str:
        """Stable hex digest of the labeled adjacency structure."""
        return hashlib.sha256(to_text(self).encode()).hexdigest()[:16]


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from an edge list (pairs in either order, no duplicates checked)."""
    adj = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop ({u},{v})")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def generate_gnp(n: int, p: float, rng: RngStream) -> Graph:
    """Sample G(n,p): each unordered pair (i,j), i<j, visited in lexicographic
    order, draws exactly one uniform variate; the edge exists iff variate < p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0,1]")
    if not 1 <= n <= MAX_VERTICES:
        raise CapacityError(f"n={n} outside supported range 1..{MAX_VERTICES}")
    m = n * (n - 1) // 2
    u = rng.uniforms(m)
    adj = [0] * n
    idx = 0
    for i in range(n - 1):
        row = u[idx : idx + (n - 1 - i)]
        idx += n - 1 - i
        for off in (row < p).nonzero()[0]:
            j = i + 1 + int(off)
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return Graph(n, tuple(adj))


def undominated(g: Graph, s_bits: int) -> int:
    """Vertices not in S and with no neighbor in S, as a bitmask.

    Complement of the closed-neighborhood union of S; S dominates G iff the
    result is 0.
    """
    cover = s_bits
    m = s_bits
    while m:
        low = m & -m
        cover |= g.adj[low.bit_length() - 1]
        m ^= low
    return g.full_mask & ~cover


def is_dominating(g: Graph, s_bits: int) -> bool:
    return undominated(g, s_bits) == 0


def induced_subgraph(g: Graph, w_bits: int) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph on the vertex set `w_bits`.

    Returns (subgraph, relabeling) where relabeling[new] = old, ascending.
    """
    if w_bits == 0:
        raise ValueError("induced subgraph of the empty vertex set")
    if w_bits & ~g.full_mask:
        raise ValueError("W contains vertices outside the graph")
    old = to_vertices(w_bits)
    pos = {o: i for i, o in enumerate(old)}
    adj = [0] * len(old)
    for i, o in enumerate(old):
        for nb in iter_bits(g.adj[o] & w_bits):
            adj[i] |= 1 << pos[nb]
    return Graph(len(old), tuple(adj)), tuple(old)


def toggle_edges(
    g: Graph,
    remove: Sequence[tuple[int, int]] = (),
    add: Sequence[tuple[int, int]] = (),
) -> Graph:
    """New graph with `remove` edges deleted and `add` edges inserted.

    Every pair in `remove` must currently be an edge; every pair in `add`
    must be a non-edge and not a self-loop; the lists must be disjoint as
    unordered pairs.  Violations raise ValueError naming the offending pair.
    """
    norm_remove = []
    for u, v in remove:
        if u == v:
            raise ValueError(f"remove pair ({u},{v}) is a self-loop")
        if not g.has_edge(u, v):
            raise ValueError(f"remove pair ({u},{v}) is not an edge")
        norm_remove.append((min(u, v), max(u, v)))
    norm_add = []
    for u, v in add:
        if u == v:
            raise ValueError(f"add pair ({u},{v}) is a self-loop")
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise ValueError(f"add pair ({u},{v}) out of range")
        if g.has_edge(u, v):
            raise ValueError(f"add pair ({u},{v}) is already an edge")
        norm_add.append((min(u, v), max(u, v)))
    seen: set[tuple[int, int]] = set()
    for pair in norm_remove + norm_add:
        if pair in seen:
            raise ValueError(f"pair ({pair[0]},{pair[1]}) listed twice")
        seen.add(pair)
    adj = list(g.adj)
    for u, v in norm_remove:
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
    for u, v in norm_add:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(g.n, tuple(adj))


def to_text(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Graph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header line: {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ValueError(f"header declares {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise ValueError(f"edge line must have u < v: {ln!r}")
        edges.append((u, v))
    g = from_edges(n, edges)
    g.validate()
    return g
