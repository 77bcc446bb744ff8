"""Four-vertex edge swaps that flip dominating-set existence, with certificates.

The forward swap takes a graph whose k-set S dominates everything, picks an
outside vertex v whose only S-neighbor is u, a second set vertex z, and an
outside vertex w such that among {u,v,z,w} the only edges are (u,v) and
(z,w); removing those two edges and adding (u,z),(v,w) preserves every
degree and any induced subgraph avoiding the four vertices, while v loses
its last S-neighbor.  The reverse swap does the opposite: it hands the one
undominated vertex v a neighbor in S.  Each application emits a
MappingCertificate whose flags are filled by independent re-verification.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum

from .graph import Graph, induced_subgraph, iter_bits, to_vertices, toggle_edges, undominated
from .rng import RngStream
from .solver import classify_sweep, sweep_k_sets


class Direction(str, Enum):
    FORWARD = "FORWARD"  # dominating set exists -> none
    REVERSE = "REVERSE"  # none (but near-dominating S) -> S dominating


@dataclass(frozen=True)
class MappingCertificate:
    """Machine-checkable record of one swap application.

    quad is (u, v, z, w); removed/added are the two edge pairs in role
    order.  h_vertices and s_bits are the protected induced-subgraph vertex
    set and the target k-set.  pre_class/post_class, h_unchanged and
    flipped stay None until verify_certificate fills them.
    """

    direction: Direction
    quad: tuple[int, int, int, int]
    removed: tuple[tuple[int, int], tuple[int, int]]
    added: tuple[tuple[int, int], tuple[int, int]]
    h_vertices: int
    s_bits: int | None = None
    degree_preserved: bool | None = None
    h_unchanged: bool | None = None
    flipped: bool | None = None
    pre_class: str | None = None
    post_class: str | None = None
    hash_before: str | None = None
    hash_after: str | None = None

    def to_record(self) -> dict:
        """Flat JSON-ready record (one line per certificate in logs)."""
        return {
            "direction": self.direction.value,
            "quad": list(self.quad),
            "removed": [list(e) for e in self.removed],
            "added": [list(e) for e in self.added],
            "h_vertices": to_vertices(self.h_vertices),
            "s": to_vertices(self.s_bits) if self.s_bits is not None else None,
            "degree_preserved": self.degree_preserved,
            "h_unchanged": self.h_unchanged,
            "flipped": self.flipped,
            "pre_class": self.pre_class,
            "post_class": self.post_class,
            "hash_before": self.hash_before,
            "hash_after": self.hash_after,
        }


def _only_edges(g: Graph, quad: tuple[int, int, int, int], edges: set[frozenset[int]]) -> bool:
    """True iff among the 6 pairs of `quad`, exactly `edges` are present."""
    for idx, a in enumerate(quad):
        for b in quad[idx + 1 :]:
            want = frozenset((a, b)) in edges
            if g.has_edge(a, b) != want:
                return False
    return True


def _ordered(items: list[int], rng: RngStream | None) -> list[int]:
    return rng.shuffled(items) if rng is not None else items


def find_forward_witness(
    g: Graph, s_bits: int, h_bits: int, rng: RngStream | None = None
) -> tuple[int, int, int, int] | None:
    """Quadruple (u,v,z,w) enabling the forward swap, or None.

    Preconditions: S dominates g and S is disjoint from H.  Deterministic
    search order is v ascending then (z,w) ascending; passing an rng
    randomizes candidate order instead.
    """
    if undominated(g, s_bits) != 0:
        raise ValueError("S is not a dominating set")
    if s_bits & h_bits:
        raise ValueError("S intersects H")
    if s_bits.bit_count() < 2:
        return None  # z must differ from u
    outside = g.full_mask & ~(h_bits | s_bits)
    v_candidates = [v for v in iter_bits(outside) if (g.adj[v] & s_bits).bit_count() == 1]
    for v in _ordered(v_candidates, rng):
        u = (g.adj[v] & s_bits).bit_length() - 1
        for z in _ordered([z for z in iter_bits(s_bits) if z != u], rng):
            for w in _ordered([w for w in iter_bits(outside) if w != v], rng):
                quad = (u, v, z, w)
                if _only_edges(g, quad, {frozenset((u, v)), frozenset((z, w))}):
                    return quad
    return None


def find_reverse_witness(
    g: Graph, s_bits: int, v: int, h_bits: int, rng: RngStream | None = None
) -> tuple[int, int, int] | None:
    """Triple (u,z,w) enabling the reverse swap, or None.

    Preconditions: v is the only vertex S fails to dominate, and S + v
    avoids H.  Deterministic order: triples (u,z,w) ascending with u < z.
    After the swap v gains neighbor u and w gains z.
    """
    if undominated(g, s_bits) != 1 << v:
        raise ValueError("S must dominate all vertices except exactly v")
    if (s_bits | 1 << v) & h_bits:
        raise ValueError("S + v intersects H")
    outside = g.full_mask & ~(h_bits | s_bits | 1 << v)
    s_verts = to_vertices(s_bits)
    pairs = [
        (u, z)
        for i, u in enumerate(s_verts)
        for z in s_verts[i + 1 :]
        if g.has_edge(u, z)
    ]
    w_candidates = list(iter_bits(g.adj[v] & outside))
    for u, z in _ordered(pairs, rng):
        for w in _ordered(w_candidates, rng):
            if _only_edges(g, (u, v, z, w), {frozenset((v, w)), frozenset((u, z))}):
                return (u, z, w)
    return None


def swap_edits(
    quad: tuple[int, int, int, int], direction: Direction
) -> tuple[tuple[tuple[int, int], tuple[int, int]], tuple[tuple[int, int], tuple[int, int]]]:
    """(removed, added) edge pairs for a quad, in role order."""
    u, v, z, w = quad
    if direction is Direction.FORWARD:
        return ((u, v), (z, w)), ((u, z), (v, w))
    return ((v, w), (u, z)), ((v, u), (z, w))


def apply_mapping(
    g: Graph,
    quad: tuple[int, int, int, int],
    direction: Direction,
    *,
    s_bits: int | None = None,
    h_bits: int = 0,
) -> tuple[Graph, MappingCertificate]:
    """Rewire the quad and return (new graph, certificate skeleton).

    The edge/non-edge pattern required by `direction` is validated by the
    edit itself (violations raise naming the failing pair).  Classification
    fields are left unset for verify_certificate.
    """
    if len(set(quad)) != 4:
        raise ValueError(f"quad {quad} has repeated vertices")
    for x in quad:
        if h_bits >> x & 1:
            raise ValueError(f"quad vertex {x} lies inside the protected subgraph")
    removed, added = swap_edits(quad, direction)
    g2 = toggle_edges(g, remove=removed, add=added)
    cert = MappingCertificate(
        direction=direction,
        quad=quad,
        removed=removed,
        added=added,
        h_vertices=h_bits,
        s_bits=s_bits,
        degree_preserved=g.degree_sequence() == g2.degree_sequence(),
        hash_before=g.canonical_hash(),
        hash_after=g2.canonical_hash(),
    )
    return g2, cert


def verify_certificate(
    g_before: Graph, g_after: Graph, cert: MappingCertificate, k: int
) -> MappingCertificate:
    """Fill h_unchanged, flipped, and pre/post classification by re-solving.

    The three flags are independent so failures stay diagnosable: flipped
    requires dominating-count 1 -> 0 for FORWARD and 0 -> >=1 for REVERSE
    (with the certificate's S dominating afterwards, when recorded).
    """
    if cert.h_vertices:
        sub_b, _ = induced_subgraph(g_before, cert.h_vertices)
        sub_a, _ = induced_subgraph(g_after, cert.h_vertices)
        h_unchanged = sub_b.adj == sub_a.adj
    else:
        h_unchanged = True
    sweep_b = sweep_k_sets(g_before, k)
    sweep_a = sweep_k_sets(g_after, k)
    if cert.direction is Direction.FORWARD:
        flipped = sweep_b.counts.dominating == 1 and sweep_a.counts.dominating == 0
    else:
        flipped = sweep_b.counts.dominating == 0 and sweep_a.counts.dominating >= 1
        if cert.s_bits is not None:
            flipped = flipped and undominated(g_after, cert.s_bits) == 0
    return dataclasses.replace(
        cert,
        h_unchanged=h_unchanged,
        flipped=flipped,
        pre_class=classify_sweep(sweep_b).tag.value,
        post_class=classify_sweep(sweep_a).tag.value,
    )


def local_soundness(g_after: Graph, cert: MappingCertificate) -> bool:
    """Solver-free check of the swap's direct effect on S.

    FORWARD: v must now be undominated by S.  REVERSE: S must now dominate
    everything.  Requires the certificate to carry s_bits.
    """
    if cert.s_bits is None:
        raise ValueError("certificate lacks the target set S")
    miss = undominated(g_after, cert.s_bits)
    if cert.direction is Direction.FORWARD:
        return bool(miss >> cert.quad[1] & 1)
    return miss == 0
