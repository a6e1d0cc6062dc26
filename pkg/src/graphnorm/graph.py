"""Immutable weighted-graph representation and independent-set predicates.

Graphs are simple, undirected, with strictly positive vertex weights.
Adjacency is stored in compressed sparse row form with neighbor lists
sorted ascending; the square roots of the weights are cached because the
dynamics use them on every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Raised for invalid graph construction or out-of-range vertex indices."""


class WeightedGraph:
    """Undirected simple graph with positive vertex weights.

    Attributes:
        n: vertex count.
        indptr, indices: CSR neighbor lists, each list sorted ascending.
        w: float64 weight per vertex, strictly positive and finite.
        v: cached sqrt(w).

    Instances are immutable after construction (arrays are write-protected)
    and safe for unrestricted concurrent reads.
    """

    __slots__ = ("n", "indptr", "indices", "w", "v", "_adj")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, w: np.ndarray):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.w = w
        self.v = np.sqrt(w)
        for a in (self.indptr, self.indices, self.w, self.v):
            a.setflags(write=False)
        data = np.ones(len(indices), dtype=np.float64)
        self._adj = sp.csr_matrix((data, indices, indptr), shape=(self.n, self.n))

    @property
    def num_edges(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def adjacency(self) -> sp.csr_matrix:
        """Sparse 0/1 adjacency matrix (shared, read-only)."""
        return self._adj

    def edges(self) -> Iterable[tuple[int, int]]:
        """Edges as (u, v) with u < v, in ascending order."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if v > u:
                    yield u, int(v)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        j = np.searchsorted(nb, v)
        return j < len(nb) and nb[j] == v

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.num_edges})"


def build_graph(
    n: int,
    edges: Sequence[tuple[int, int]],
    weights: Sequence[float],
) -> WeightedGraph:
    """Validate and build a WeightedGraph.

    Duplicate edges and both orientations of the same edge are merged.
    Raises GraphError on self-loops, out-of-range indices, or weights
    that are missing, non-positive, or non-finite.
    """
    if n < 0:
        raise GraphError(f"vertex count must be nonnegative, got {n}")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise GraphError(f"expected {n} weights, got {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        bad = int(np.argmin(np.where(np.isfinite(w), w, -np.inf)))
        raise GraphError(f"weight of vertex {bad} must be positive and finite, got {w[bad]}")

    seen = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) has an endpoint outside [0,{n})")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        seen.add((u, v) if u < v else (v, u))

    deg = np.zeros(n + 1, dtype=np.int64)
    for u, v in seen:
        deg[u + 1] += 1
        deg[v + 1] += 1
    indptr = np.cumsum(deg)
    indices = np.empty(indptr[-1], dtype=np.int64)
    cursor = indptr[:-1].copy()
    for u, v in sorted(seen):
        indices[cursor[u]] = v
        cursor[u] += 1
        indices[cursor[v]] = u
        cursor[v] += 1
    # per-row neighbor lists must come out sorted; insertion order above
    # sorts the first endpoint only, so fix rows individually
    for i in range(n):
        row = indices[indptr[i] : indptr[i + 1]]
        row.sort()
    return WeightedGraph(n, indptr, indices, w)


def _check_members(g: WeightedGraph, members: Iterable[int]) -> np.ndarray:
    idx = np.fromiter((int(i) for i in members), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        raise GraphError(f"vertex index outside [0,{g.n})")
    return np.unique(idx)


def is_independent(g: WeightedGraph, members: Iterable[int]) -> bool:
    """True iff no edge joins two members."""
    idx = _check_members(g, members)
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    for i in idx:
        if mask[g.neighbors(i)].any():
            return False
    return True


def is_maximal_independent(g: WeightedGraph, members: Iterable[int]) -> bool:
    """True iff members form an independent set dominating every outside vertex."""
    idx = _check_members(g, members)
    mask = np.zeros(g.n, dtype=bool)
    mask[idx] = True
    for i in idx:
        if mask[g.neighbors(i)].any():
            return False
    for i in range(g.n):
        if not mask[i] and not mask[g.neighbors(i)].any():
            return False
    return True


def set_weight(g: WeightedGraph, members: Iterable[int]) -> float:
    """Total weight of a vertex subset; the empty set weighs 0."""
    idx = _check_members(g, members)
    return float(g.w[idx].sum())


@dataclass(frozen=True)
class MisSolution:
    """A vertex subset claimed independent, with validity flags.

    members is sorted ascending; weight is the recomputable sum of
    vertex weights over members.
    """

    members: tuple[int, ...]
    weight: float
    independent: bool
    maximal: bool

    @classmethod
    def from_members(cls, g: WeightedGraph, members: Iterable[int]) -> "MisSolution":
        idx = _check_members(g, members)
        return cls(
            members=tuple(int(i) for i in idx),
            weight=float(g.w[idx].sum()),
            independent=is_independent(g, idx),
            maximal=is_maximal_independent(g, idx),
        )


def erdos_renyi(
    n: int,
    p: float,
    seed,
    weight_low: float = 0.1,
    weight_high: float = 10.0,
) -> WeightedGraph:
    """G(n, p) with i.i.d. uniform vertex weights; deterministic per seed."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    pick = rng.random(len(iu)) < p
    edges = list(zip(iu[pick].tolist(), ju[pick].tolist()))
    weights = rng.uniform(weight_low, weight_high, size=n)
    return build_graph(n, edges, weights)
