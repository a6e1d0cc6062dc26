"""Connected-graph enumeration and the atomic census.

Graphs on up to 7 vertices are generated one representative per
isomorphism class by vertex augmentation with brute-force canonical
forms (lexicographically minimal upper-triangle bitstring over all
vertex permutations).  Larger orders are served through external
graph6 streams.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator

import numpy as np

from .analysis import SpectrumKind, atom_spectrum
from .io import parse_graph6

MAX_BUILTIN_N = 7


@dataclass(frozen=True)
class CensusRow:
    """One row of the atomic census table."""

    n: int
    connected_total: int
    irregular_discrete: int
    irregular_continuous: int
    regular_discrete: int
    regular_continuous: int

    @property
    def atomic_total(self) -> int:
        return (
            self.irregular_discrete
            + self.irregular_continuous
            + self.regular_discrete
            + self.regular_continuous
        )


@lru_cache(maxsize=None)
def _perm_arrays(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64)


def canonical_form(adj: np.ndarray) -> int:
    """Minimal upper-triangle bitstring over all vertex permutations."""
    adj = np.asarray(adj, dtype=np.int64)
    n = adj.shape[0]
    if n <= 1:
        return 0
    perms = _perm_arrays(n)
    iu, ju = np.triu_indices(n, k=1)
    permuted = adj[perms[:, :, None], perms[:, None, :]]
    bits = permuted[:, iu, ju]
    weights = 1 << np.arange(len(iu) - 1, -1, -1, dtype=np.int64)
    return int((bits @ weights).min())


def _adj_from_canonical(n: int, code: int) -> np.ndarray:
    adj = np.zeros((n, n), dtype=np.int8)
    iu, ju = np.triu_indices(n, k=1)
    nbits = len(iu)
    for k in range(nbits):
        if (code >> (nbits - 1 - k)) & 1:
            adj[iu[k], ju[k]] = adj[ju[k], iu[k]] = 1
    return adj


@lru_cache(maxsize=None)
def _connected_codes(n: int) -> tuple[int, ...]:
    """Canonical codes of all connected graphs on n vertices.

    Every connected graph on n vertices arises by attaching a new vertex
    (with nonempty neighborhood) to some connected graph on n - 1
    vertices, so augmenting the previous level and deduplicating by
    canonical form is exhaustive.
    """
    if n == 1:
        return (0,)
    seen: set[int] = set()
    for parent_code in _connected_codes(n - 1):
        parent = _adj_from_canonical(n - 1, parent_code)
        child = np.zeros((n, n), dtype=np.int8)
        child[: n - 1, : n - 1] = parent
        for hood in range(1, 1 << (n - 1)):
            child[n - 1, : n - 1] = 0
            child[: n - 1, n - 1] = 0
            for j in range(n - 1):
                if (hood >> j) & 1:
                    child[n - 1, j] = child[j, n - 1] = 1
            seen.add(canonical_form(child))
    return tuple(sorted(seen))


def connected_graphs_upto(n: int) -> Iterator[np.ndarray]:
    """Stream one adjacency matrix per isomorphism class of connected graphs.

    Built-in enumeration is capped at n = 7; larger orders must come from
    external graph6 streams.
    """
    if not 1 <= n <= MAX_BUILTIN_N:
        raise ValueError(f"built-in enumeration supports 1 <= n <= {MAX_BUILTIN_N}")
    for code in _connected_codes(n):
        yield _adj_from_canonical(n, code)


def _tally(n: int, graphs: Iterable[np.ndarray]) -> CensusRow:
    counts = {
        (False, SpectrumKind.DISCRETE): 0,
        (False, SpectrumKind.CONTINUOUS): 0,
        (True, SpectrumKind.DISCRETE): 0,
        (True, SpectrumKind.CONTINUOUS): 0,
    }
    total = 0
    for adj in graphs:
        total += 1
        spectrum = atom_spectrum(adj)
        if spectrum.kind is not SpectrumKind.EMPTY:
            counts[(spectrum.regular, spectrum.kind)] += 1
    return CensusRow(
        n=n,
        connected_total=total,
        irregular_discrete=counts[(False, SpectrumKind.DISCRETE)],
        irregular_continuous=counts[(False, SpectrumKind.CONTINUOUS)],
        regular_discrete=counts[(True, SpectrumKind.DISCRETE)],
        regular_continuous=counts[(True, SpectrumKind.CONTINUOUS)],
    )


def census(n: int) -> CensusRow:
    """Atomic census over the built-in enumeration (n <= 7)."""
    return _tally(n, connected_graphs_upto(n))


def census_from_stream(lines: Iterable[str]) -> tuple[CensusRow, int]:
    """Atomic census over externally supplied graph6 records.

    All records must decode to graphs of one common order; disconnected
    graphs are skipped and counted.  Returns (row, skipped).
    """
    from .analysis import _is_connected

    n = None
    kept: list[np.ndarray] = []
    skipped = 0
    for line in lines:
        if not line.strip():
            continue
        adj = parse_graph6(line)
        if n is None:
            n = adj.shape[0]
        elif adj.shape[0] != n:
            raise ValueError(
                f"mixed graph orders in stream: {adj.shape[0]} after {n}"
            )
        if not _is_connected(adj):
            skipped += 1
            continue
        kept.append(adj)
    if n is None:
        return CensusRow(0, 0, 0, 0, 0, 0), 0
    return _tally(n, kept), skipped


def format_census_table(rows: Iterable[CensusRow]) -> str:
    """Render census rows in the published table layout."""
    header = (
        f"{'n':>3} {'connected':>10} {'irr.disc':>9} {'irr.cont':>9} "
        f"{'reg.disc':>9} {'reg.cont':>9} {'atomic':>7} {'density':>8}"
    )
    lines = [header]
    for r in rows:
        density = 100.0 * r.atomic_total / r.connected_total if r.connected_total else 0.0
        lines.append(
            f"{r.n:>3} {r.connected_total:>10} {r.irregular_discrete:>9} "
            f"{r.irregular_continuous:>9} {r.regular_discrete:>9} "
            f"{r.regular_continuous:>9} {r.atomic_total:>7} {density:>7.1f}%"
        )
    return "\n".join(lines)
