"""Weighted regularized graph-normalization dynamics.

One step divides each coordinate by its weighted closed neighborhood sum,
with the neighbor contribution scaled by gamma and by the sqrt-weight
ratio.  Iterating with gamma rising through 1 drives the state to the
indicator of a maximal independent set while the energy decreases and the
weighted mass (the relaxed objective) increases at every step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import MisSolution, WeightedGraph

# Denominators at or below this threshold trigger the documented 0.5
# fallback instead of a division; cannot fire from a normalizable start.
SAFE_DIV_THRESHOLD = 1e-9
FALLBACK_VALUE = 0.5

CLAMP_FLOOR = 1e-3


class NormalizationError(ValueError):
    """Raised when a state has a zero closed neighborhood sum."""


@dataclass(frozen=True)
class GammaSchedule:
    """Interpolation plan for the regularization parameter.

    linear mode moves gamma from gamma0 at step 0 to gamma1 at the last
    step; constant mode holds gamma0 throughout.
    """

    gamma0: float
    gamma1: float
    iterations: int
    mode: str = "linear"

    def __post_init__(self):
        if self.mode not in ("constant", "linear"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.mode == "linear" and self.iterations < 2:
            raise ValueError("linear mode needs at least 2 iterations")
        if self.gamma0 < 0 or self.gamma1 < 0:
            raise ValueError("gamma must be nonnegative")

    @classmethod
    def constant(cls, gamma: float, iterations: int) -> "GammaSchedule":
        return cls(gamma, gamma, iterations, mode="constant")

    @classmethod
    def pursuit(
        cls, gamma0: float = 0.9, gamma1: float = 1.5, iterations: int = 1000
    ) -> "GammaSchedule":
        """Default graduated schedule: linear 0.9 -> 1.5 over 1000 steps."""
        return cls(gamma0, gamma1, iterations, mode="linear")

    def gamma_at(self, k: int) -> float:
        if self.mode == "constant":
            return self.gamma0
        p = float(k) / float(self.iterations - 1)
        return p * self.gamma1 + (1.0 - p) * self.gamma0

    @property
    def final_gamma(self) -> float:
        return self.gamma0 if self.mode == "constant" else self.gamma1


@dataclass
class SolveTrace:
    """Per-iteration record of one trajectory.

    gamma, step_inf, and fallbacks are always populated.  The energy and
    mass series are filled only when the run records a full trace:
    energy[k] is the post-step state at gamma[k] and pre_energy[k] the
    pre-step state at the same gamma, so per-step descent is checkable
    even under a moving schedule.
    """

    gamma: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    pre_energy: list[float] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    step_inf: list[float] = field(default_factory=list)
    fallbacks: list[int] = field(default_factory=list)

    @property
    def total_fallbacks(self) -> int:
        return sum(self.fallbacks)

    def __len__(self) -> int:
        return len(self.gamma)


def _step(g: WeightedGraph, x: np.ndarray, gamma: float) -> tuple[np.ndarray, int]:
    """One normalization step; returns (new state, fallback count)."""
    y = g.v * x
    d = y + gamma * (g.adjacency() @ y)
    ok = d > SAFE_DIV_THRESHOLD
    out = np.where(ok, y / np.where(ok, d, 1.0), FALLBACK_VALUE)
    return out, int(g.n - np.count_nonzero(ok))


def gn_step(g: WeightedGraph, x: np.ndarray, gamma: float) -> np.ndarray:
    """Apply the weighted regularized normalization map once.

    x'_i = x_i / (x_i + gamma * sum_{j ~ i} (v_j / v_i) x_j).  Entries whose
    denominator is at or below the safe-division threshold are set to the
    fallback value 0.5 instead of raising.
    """
    out, _ = _step(g, np.asarray(x, dtype=np.float64), float(gamma))
    return out


def is_normalizable(g: WeightedGraph, x: np.ndarray) -> bool:
    """All closed neighborhood sums positive (the domain of the map)."""
    x = np.asarray(x, dtype=np.float64)
    closed = x + g.adjacency() @ x
    return bool(np.all(closed > 0.0))


def run_wrgn(
    g: WeightedGraph,
    x0: np.ndarray,
    schedule: GammaSchedule,
    record_trace: bool = False,
    early_exit: bool = False,
) -> tuple[np.ndarray, SolveTrace]:
    """Iterate the map under a gamma schedule.

    Raises NormalizationError if x0 is not normalizable or a non-finite
    state appears mid-run.  When early_exit is set, stops once gamma has
    reached its final value and the step infinity-norm falls below 1e-12;
    otherwise runs the full budget.  Final entries are clamped to [0, 1].
    The returned trace carries the energy/mass series only when
    record_trace is set; step norms and fallback counts are always kept.
    """
    x = np.asarray(x0, dtype=np.float64).copy()
    if np.any(x < 0.0):
        raise NormalizationError("state entries must be nonnegative")
    if not is_normalizable(g, x):
        raise NormalizationError("initial state has a zero closed neighborhood sum")

    trace = SolveTrace()
    final_gamma = schedule.final_gamma
    prev_gamma = None
    prev_energy = None
    for k in range(schedule.iterations):
        gamma = schedule.gamma_at(k)
        if record_trace:
            # at unchanged gamma the pre-step energy is the previous
            # post-step energy, bit for bit
            if gamma == prev_gamma:
                trace.pre_energy.append(prev_energy)
            else:
                trace.pre_energy.append(energy(g, x, gamma))
        x_new, nfb = _step(g, x, gamma)
        step_inf = float(np.max(np.abs(x_new - x))) if g.n else 0.0
        trace.gamma.append(gamma)
        trace.step_inf.append(step_inf)
        trace.fallbacks.append(nfb)
        if record_trace:
            prev_energy = energy(g, x_new, gamma)
            prev_gamma = gamma
            trace.energy.append(prev_energy)
            trace.mass.append(weighted_mass(g, x_new))
        x = x_new
        if not np.all(np.isfinite(x)):
            raise NormalizationError(f"non-finite state at iteration {k}")
        if early_exit and gamma == final_gamma and step_inf < 1e-12:
            break
    np.clip(x, 0.0, 1.0, out=x)
    return x, trace


def init_random(n: int, seed) -> np.ndarray:
    """Exponentially sampled start, scaled by its max and clamped to [1e-3, 1]."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    e = -np.log(np.maximum(u, np.finfo(np.float64).tiny))
    x = e / e.max()
    return np.clip(x, CLAMP_FLOOR, 1.0)


def init_warm(values, n: Optional[int] = None) -> np.ndarray:
    """Clamp an externally supplied fractional vector to [1e-3, 1].

    The floor keeps the state strictly positive so every coordinate stays
    live (zeros are absorbing under the map).
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("warm start must be a 1-d vector")
    if n is not None and len(x) != n:
        raise ValueError(f"warm start has length {len(x)}, expected {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("warm start contains non-finite entries")
    return np.clip(x, CLAMP_FLOOR, 1.0)


def energy(g: WeightedGraph, x: np.ndarray, gamma: float) -> float:
    """Quadratic energy, evaluated sparsely in O(n + |E|).

    In the weighted state y = v*x this is (1/2) y'(I + gamma A)y - v'y,
    the Lyapunov function the dynamics strictly decrease at fixed gamma.
    """
    x = np.asarray(x, dtype=np.float64)
    y = g.v * x
    ay = g.adjacency() @ y
    return float(0.5 * (y @ y + gamma * (y @ ay)) - g.w @ x)


def weighted_mass(g: WeightedGraph, x: np.ndarray) -> float:
    """Relaxed objective sum(w_i x_i); strictly increases along trajectories."""
    return float(g.w @ np.asarray(x, dtype=np.float64))


def simplex_state(g: WeightedGraph, x: np.ndarray) -> np.ndarray:
    """Mass-normalized coordinates p_i = w_i x_i / sum_j w_j x_j."""
    x = np.asarray(x, dtype=np.float64)
    m = g.w @ x
    if not m > 0.0:
        raise ValueError("weighted mass must be positive")
    return (g.w * x) / m


def fitness(
    g: WeightedGraph, p: np.ndarray, gamma: float
) -> tuple[np.ndarray, float]:
    """Replicator fitness of a simplex state and its population average.

    f_i = v_i / ((I + gamma A)(p / v))_i.  The average satisfies
    fbar(p^k) = weighted mass of the next iterate.
    """
    p = np.asarray(p, dtype=np.float64)
    q = p / g.v
    d = q + gamma * (g.adjacency() @ q)
    if np.any(d <= 0.0):
        raise ValueError("zero denominator in fitness: state not normalizable")
    f = g.v / d
    return f, float(p @ f)


def round_to_mis(g: WeightedGraph, x: np.ndarray) -> MisSolution:
    """Binarize a state into a maximal independent set.

    Thresholds at 0.5, repairs conflicts by dropping the lighter endpoint
    (ties keep the larger index), then completes greedily by descending
    weight (ties prefer the smaller index).
    """
    x = np.asarray(x, dtype=np.float64)
    selected = x >= 0.5
    for u in range(g.n):
        if not selected[u]:
            continue
        for vtx in g.neighbors(u):
            vtx = int(vtx)
            if vtx <= u or not selected[vtx]:
                continue
            if g.w[u] < g.w[vtx] or (g.w[u] == g.w[vtx] and u < vtx):
                selected[u] = False
                break
            selected[vtx] = False
    order = sorted(range(g.n), key=lambda i: (-g.w[i], i))
    for i in order:
        if not selected[i] and not selected[g.neighbors(i)].any():
            selected[i] = True
    return MisSolution.from_members(g, np.flatnonzero(selected))
