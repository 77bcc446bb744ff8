"""Ground truth by brute force over every labeled graph on n <= 7 vertices.

For each of the 2^C(n,2) edge subsets the dominating and near-dominating
k-set counts are computed by naive subset enumeration (vectorized across
the whole graph space), then expectations are taken under the G(n,p)
measure p^e (1-p)^(M-e).

Edge bits are ordered lexicographically: bit 0 = pair (0,1), bit 1 = (0,2),
..., matching the pair order of the generator.  The per-graph statistics
depend only on (n, k), so they are aggregated once into exact integer sums
per edge-count class e = 0..M and cached; a probability p then only weights
those M+1 class sums.  Final accumulation is math.fsum over ascending e
(the documented summation order).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, asdict
from functools import lru_cache

import numpy as np

from .graph import CapacityError

MAX_ORACLE_N = 7


@dataclass(frozen=True)
class OracleReport:
    """Exact expectations and probabilities over the labeled graph space."""

    n: int
    k: int
    p: float
    e_x: float
    e_x2: float
    e_n: float
    e_n2: float
    p_x_pos: float    # Pr(X > 0)
    p_unique: float   # Pr(X = 1)
    p_near_pos: float # Pr(N > 0)
    graphs_enumerated: int

    def to_dict(self) -> dict:
        return asdict(self)


def _edge_bit_index(n: int) -> dict[tuple[int, int], int]:
    idx = {}
    b = 0
    for i in range(n):
        for j in range(i + 1, n):
            idx[(i, j)] = b
            b += 1
    return idx


@lru_cache(maxsize=64)
def _class_sums(n: int, k: int):
    """Exact integer statistics per edge-count class, independent of p.

    Returns (S_X, S_X2, S_N, S_N2, C_xpos, C_x1, C_npos, C_all): arrays of
    length M+1 where entry e aggregates over all graphs with e edges.
    """
    m_edges = n * (n - 1) // 2
    bit = _edge_bit_index(n)
    space = 1 << m_edges
    graphs = np.arange(space, dtype=np.uint32)
    x_counts = np.zeros(space, dtype=np.uint8)
    n_counts = np.zeros(space, dtype=np.uint8)
    cnt = np.empty(space, dtype=np.uint8)
    for combo in itertools.combinations(range(n), k):
        in_s = set(combo)
        cnt.fill(0)
        for v in range(n):
            if v in in_s:
                continue
            mask = 0
            for s in combo:
                mask |= 1 << bit[(min(v, s), max(v, s))]
            # v is undominated by this S iff none of its S-edges is present
            cnt += ((graphs & np.uint32(mask)) == 0).astype(np.uint8)
        x_counts += (cnt == 0).astype(np.uint8)
        n_counts += (cnt == 1).astype(np.uint8)
    pop = np.bitwise_count(graphs).astype(np.int64)
    xf = x_counts.astype(np.float64)
    nf = n_counts.astype(np.float64)
    args = dict(minlength=m_edges + 1)
    return (
        np.bincount(pop, weights=xf, **args),
        np.bincount(pop, weights=xf * xf, **args),
        np.bincount(pop, weights=nf, **args),
        np.bincount(pop, weights=nf * nf, **args),
        np.bincount(pop, weights=(x_counts > 0).astype(np.float64), **args),
        np.bincount(pop, weights=(x_counts == 1).astype(np.float64), **args),
        np.bincount(pop, weights=(n_counts > 0).astype(np.float64), **args),
    )


@lru_cache(maxsize=8)
def _space_class_counts(n: int) -> tuple[float, ...]:
    """Number of labeled graphs per edge count, from the enumerated space."""
    m_edges = n * (n - 1) // 2
    graphs = np.arange(1 << m_edges, dtype=np.uint32)
    pop = np.bitwise_count(graphs).astype(np.int64)
    return tuple(np.bincount(pop, minlength=m_edges + 1).astype(np.float64))


def class_weights(n: int, p: float) -> list[float]:
    """G(n,p) weight of a single graph with e edges, for e = 0..C(n,2)."""
    m_edges = n * (n - 1) // 2
    out = []
    for e in range(m_edges + 1):
        if p == 0.0:
            out.append(1.0 if e == 0 else 0.0)
        elif p == 1.0:
            out.append(1.0 if e == m_edges else 0.0)
        else:
            out.append(p**e * (1.0 - p) ** (m_edges - e))
    return out


def enumerate_graph_space(n: int, k: int, p: float) -> OracleReport:
    """Exact G(n,p) expectations of the k-set statistics; n <= 7 only."""
    if n > MAX_ORACLE_N:
        raise CapacityError(f"oracle supports n <= {MAX_ORACLE_N}, got {n}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0,1]")
    s_x, s_x2, s_n, s_n2, c_xpos, c_x1, c_npos = _class_sums(n, k)
    w = class_weights(n, p)

    def dot(sums: np.ndarray) -> float:
        return math.fsum(sums[e] * w[e] for e in range(len(w)))

    return OracleReport(
        n=n,
        k=k,
        p=p,
        e_x=dot(s_x),
        e_x2=dot(s_x2),
        e_n=dot(s_n),
        e_n2=dot(s_n2),
        p_x_pos=dot(c_xpos),
        p_unique=dot(c_x1),
        p_near_pos=dot(c_npos),
        graphs_enumerated=1 << (n * (n - 1) // 2),
    )


def total_weight(n: int, p: float) -> float:
    """Sum of graph weights over the whole space (should be 1)."""
    counts = _space_class_counts(n)
    w = class_weights(n, p)
    return math.fsum(counts[e] * w[e] for e in range(len(w)))
