"""Fixed-point diagnostics for the normalization dynamics.

Covers the stability score of a maximal independent set, the Jacobian
spectral radius at fixed points, exact classification of full-support
fractional fixed points on connected graphs, and evaluation of the
quadratic form on the weight-tilted simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .dynamics import gn_step, is_normalizable
from .graph import MisSolution, WeightedGraph, is_maximal_independent


def mis_stability(g: WeightedGraph, m: MisSolution, gamma: float) -> float:
    """Stability score of a maximal independent set.

    gamma * min over outside vertices i of sum_{j in N(i) cap M} sqrt(w_j/w_i).
    Scores above 1 mark asymptotically stable attractors.  Returns +inf when
    M covers every vertex (edgeless graphs), where the min runs over nothing.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    members = np.asarray(m.members, dtype=np.int64)
    if not is_maximal_independent(g, members):
        raise ValueError("solution is not a maximal independent set")
    mask = np.zeros(g.n, dtype=bool)
    mask[members] = True
    best = math.inf
    for i in range(g.n):
        if mask[i]:
            continue
        nb = g.neighbors(i)
        s = float(np.sum(np.sqrt(g.w[nb[mask[nb]]] / g.w[i])))
        best = min(best, s)
    return gamma * best if best < math.inf else math.inf


def fixed_point_residual(g: WeightedGraph, x: np.ndarray, gamma: float) -> float:
    """Infinity-norm distance between x and its image under the map."""
    x = np.asarray(x, dtype=np.float64)
    if not is_normalizable(g, x):
        raise ValueError("state is not normalizable")
    return float(np.max(np.abs(x - gn_step(g, x, gamma)))) if g.n else 0.0


def _weighted_closed_operator(g: WeightedGraph, gamma: float) -> np.ndarray:
    """Dense I + gamma * diag(v)^-1 A diag(v)."""
    B = gamma * g.adjacency().toarray() * np.outer(1.0 / g.v, g.v)
    np.fill_diagonal(B, 1.0)
    return B


def jacobian_spectral_radius(
    g: WeightedGraph,
    x: np.ndarray,
    gamma: float,
    dense_limit: int = 512,
    power_tol: float = 1e-10,
    power_cap: int = 100_000,
    seed: int = 0,
) -> float:
    """Spectral radius of the map's Jacobian at a fixed point.

    J_ij = (delta_ij - x_i B_ij) / (Bx)_i with B the weighted regularized
    closed adjacency operator.  Requires fixed_point_residual(x) < 1e-8.
    Sizes up to dense_limit use an exact dense eigensolve; beyond that a
    power iteration on J^T J returns the largest singular value, an upper
    bound on the radius.
    """
    x = np.asarray(x, dtype=np.float64)
    if fixed_point_residual(g, x, gamma) >= 1e-8:
        raise ValueError("state is not a fixed point (residual >= 1e-8)")
    v = g.v
    A = g.adjacency()
    Bx = x + gamma * (A @ (v * x)) / v
    if g.n <= dense_limit:
        B = _weighted_closed_operator(g, gamma)
        J = (np.eye(g.n) - x[:, None] * B) / Bx[:, None]
        return float(np.max(np.abs(np.linalg.eigvals(J))))

    def Jop(z):
        Bz = z + gamma * (A @ (v * z)) / v
        return (z - x * Bz) / Bx

    def JTop(u):
        s = x * u / Bx
        BTs = s + gamma * v * (A @ (s / v))
        return u / Bx - BTs

    rng = np.random.default_rng(seed)
    z = rng.standard_normal(g.n)
    z /= np.linalg.norm(z)
    lam_prev = 0.0
    for _ in range(power_cap):
        z2 = JTop(Jop(z))
        lam = float(np.linalg.norm(z2))
        if lam == 0.0:
            return 0.0
        z = z2 / lam
        if abs(lam - lam_prev) <= power_tol * max(1.0, lam):
            return math.sqrt(lam)
        lam_prev = lam
    raise RuntimeError(
        "power iteration did not converge; instance too large for dense fallback"
    )


# ---------------------------------------------------------------------------
# Atomic spectrum of a connected graph


class SpectrumKind(Enum):
    EMPTY = "empty"
    DISCRETE = "discrete"
    CONTINUOUS = "continuous"


@dataclass(frozen=True)
class SpectrumClassification:
    """Strictly positive solutions of (A + I) x = 1 on a connected graph.

    witness is an exact rational solution (None when empty); nullity is the
    dimension of the solution manifold; regular flags equal degrees.
    """

    kind: SpectrumKind
    witness: Optional[tuple[Fraction, ...]]
    nullity: int
    regular: bool


def _is_connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    if n == 0:
        return False
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for w_ in np.flatnonzero(adj[u]):
            if not seen[w_]:
                seen[w_] = True
                stack.append(int(w_))
    return bool(seen.all())


def _solve_exact(B: list[list[Fraction]], rhs: list[Fraction]):
    """RREF of [B | rhs] over the rationals.

    Returns (consistent, pivots, particular, kernel_basis).
    """
    n = len(B)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(B)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        pv = aug[r][c]
        aug[r] = [a / pv for a in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    consistent = all(
        aug[i][n] == 0 for i in range(r, n)
    )  # rows below rank must be fully zero
    particular = [Fraction(0)] * n
    for row, c in enumerate(pivots):
        particular[c] = aug[row][n]
    free = [c for c in range(n) if c not in pivots]
    kernel = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for row, c in enumerate(pivots):
            vec[c] = -aug[row][f]
        kernel.append(vec)
    return consistent, pivots, particular, kernel


def _solve_square_exact(M, rhs):
    """Solve a square rational system; None when singular."""
    d = len(rhs)
    aug = [list(M[i]) + [rhs[i]] for i in range(d)]
    for c in range(d):
        pivot = next((r for r in range(c, d) if aug[r][c] != 0), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        pv = aug[c][c]
        aug[c] = [a / pv for a in aug[c]]
        for r in range(d):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[c])]
    return [aug[i][d] for i in range(d)]


def _positive_point(particular, kernel):
    """Exact strictly positive solution of B x = 1, or None.

    Solutions are x = x_p + N z; any nonnegative one lies in the unit cube,
    so the feasible z form the polytope Q = {z : 0 <= x_p + N z <= 1}.  All
    vertices of Q are enumerated exactly (active-set combinations; N has
    full column rank, so Q is bounded).  Each coordinate x_i is affine and
    nonnegative on Q, hence it vanishes at the vertex centroid iff it
    vanishes on all of Q; the centroid therefore decides strict positivity
    and doubles as the witness.
    """
    from itertools import combinations

    d = len(kernel)
    n = len(particular)
    rows = []  # constraints a . z <= b
    for i in range(n):
        a = [kernel[k][i] for k in range(d)]
        rows.append(([-ak for ak in a], particular[i]))  # x_i >= 0
        rows.append((a, 1 - particular[i]))  # x_i <= 1
    vertices = set()
    for combo in combinations(range(len(rows)), d):
        z = _solve_square_exact(
            [rows[j][0] for j in combo], [rows[j][1] for j in combo]
        )
        if z is None:
            continue
        if all(
            sum(ak * zk for ak, zk in zip(a, z)) <= b for a, b in rows
        ):
            vertices.add(tuple(z))
    if not vertices:
        return None
    center = [
        sum(v[k] for v in vertices) / len(vertices) for k in range(d)
    ]
    x = [
        particular[i] + sum(kernel[k][i] * center[k] for k in range(d))
        for i in range(n)
    ]
    if all(xi > 0 for xi in x):
        return x
    return None


def atom_spectrum(adjacency) -> SpectrumClassification:
    """Classify the full-support fixed points of the unweighted map.

    Solves (A + I) x = 1, x > 0 with exact rational arithmetic.  A
    nonsingular system is discrete iff its unique solution is strictly
    positive; a singular consistent system is continuous iff the affine
    solution set meets the positive orthant, decided exactly by vertex
    enumeration of the boxed solution polytope.  Raises on disconnected
    input.
    """
    adj = np.asarray(adjacency)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError("adjacency must be square")
    n = adj.shape[0]
    if n < 1:
        raise ValueError("graph must have at least one vertex")
    if np.any(adj != adj.T) or np.any(np.diag(adj) != 0):
        raise ValueError("adjacency must be symmetric with zero diagonal")
    if not _is_connected(adj):
        raise ValueError("graph must be connected")

    degs = adj.sum(axis=1)
    regular = bool(np.all(degs == degs[0]))

    B = [
        [Fraction(int(adj[i, j]) + (1 if i == j else 0)) for j in range(n)]
        for i in range(n)
    ]
    rhs = [Fraction(1)] * n
    consistent, pivots, particular, kernel = _solve_exact(B, rhs)

    if not consistent:
        return SpectrumClassification(SpectrumKind.EMPTY, None, 0, regular)

    if not kernel:
        if all(c > 0 for c in particular):
            return SpectrumClassification(
                SpectrumKind.DISCRETE, tuple(particular), 0, regular
            )
        return SpectrumClassification(SpectrumKind.EMPTY, None, 0, regular)

    witness = _positive_point(particular, kernel)
    if witness is not None:
        if regular:
            # the uniform vector always normalizes a regular graph
            witness = [Fraction(1, int(degs[0]) + 1)] * n
        return SpectrumClassification(
            SpectrumKind.CONTINUOUS, tuple(witness), len(kernel), regular
        )
    return SpectrumClassification(SpectrumKind.EMPTY, None, 0, regular)


# ---------------------------------------------------------------------------
# Weight-tilted simplex quadratic form

SIMPLEX_TOL = 1e-9


def tilted_simplex_q(g: WeightedGraph, r: Sequence[float], gamma: float) -> float:
    """Evaluate r' (I + gamma A) r on the weight-tilted simplex.

    Membership (r >= 0 and sum sqrt(w_i) r_i = 1 within 1e-9) is enforced.
    At the point carried by a maximal independent set M the value is
    1 / weight(M).
    """
    r = np.asarray(r, dtype=np.float64)
    if len(r) != g.n:
        raise ValueError(f"vector has length {len(r)}, expected {g.n}")
    if np.any(r < 0):
        raise ValueError("tilted-simplex membership violated: negative entry")
    s = float(g.v @ r)
    if abs(s - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"tilted-simplex membership violated: sum {s!r}")
    return float(r @ r + gamma * (r @ (g.adjacency() @ r)))


def mis_simplex_point(g: WeightedGraph, members: Sequence[int]) -> np.ndarray:
    """Tilted-simplex point carried by an independent set: sqrt(w_i)/W on M."""
    idx = np.asarray(members, dtype=np.int64)
    W = float(g.w[idx].sum())
    r = np.zeros(g.n, dtype=np.float64)
    r[idx] = g.v[idx] / W
    return r
