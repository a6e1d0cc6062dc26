"""Exact small-instance solvers used as ground truth.

Branch-and-bound maximum-weight independent set, exhaustive maximal-IS
enumeration, and the correspondence check between stability scores and
local minima of the quadratic form on the weight-tilted simplex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import mis_simplex_point, mis_stability, tilted_simplex_q
from .graph import MisSolution, WeightedGraph

DESCENT_TOL = 1e-12
Q_MATCH_TOL = 1e-12
PROBE_MAGNITUDE = 1e-4

BRUTE_FORCE_LIMIT = 32
ENUMERATION_LIMIT = 24
CORRESPONDENCE_LIMIT = 16


def _neighbor_masks(g: WeightedGraph) -> list[int]:
    return [int(sum(1 << int(j) for j in g.neighbors(i))) for i in range(g.n)]


def _mask_members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def brute_force_mwis(g: WeightedGraph) -> MisSolution:
    """Exact maximum-weight independent set, n <= 32.

    Depth-first branch and bound pruned by the weight sum of remaining
    candidates.  The optimum is maximal already for positive weights; a
    greedy completion runs anyway as a weight-neutral safeguard.
    """
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force supports n <= {BRUTE_FORCE_LIMIT}, got {n}")
    if n == 0:
        return MisSolution.from_members(g, [])

    order = sorted(range(n), key=lambda i: (-g.w[i], i))
    pos_of = {orig: pos for pos, orig in enumerate(order)}
    wp = [float(g.w[orig]) for orig in order]
    nbr = [0] * n
    for orig in range(n):
        for j in g.neighbors(orig):
            nbr[pos_of[orig]] |= 1 << pos_of[int(j)]

    best_w = -1.0
    best_mask = 0

    def mask_weight(mask: int) -> float:
        s = 0.0
        while mask:
            low = mask & -mask
            s += wp[low.bit_length() - 1]
            mask ^= low
        return s

    def rec(cand: int, cand_w: float, cur_w: float, cur: int) -> None:
        nonlocal best_w, best_mask
        if cur_w + cand_w <= best_w:
            return
        if cand == 0:
            best_w, best_mask = cur_w, cur
            return
        low = cand & -cand
        vtx = low.bit_length() - 1
        removed = low | (cand & nbr[vtx])
        rec(cand ^ removed, cand_w - mask_weight(removed), cur_w + wp[vtx], cur | low)
        rec(cand ^ low, cand_w - wp[vtx], cur_w, cur)

    full = (1 << n) - 1
    rec(full, sum(wp), 0.0, 0)

    members = {order[p] for p in _mask_members(best_mask)}
    # weight-neutral completion to maximality (no-op when weights are positive)
    for i in sorted(range(n), key=lambda i: (-g.w[i], i)):
        if i not in members and not any(int(j) in members for j in g.neighbors(i)):
            members.add(i)
    return MisSolution.from_members(g, sorted(members))


def enumerate_mises(g: WeightedGraph) -> list[MisSolution]:
    """All maximal independent sets, n <= 24.

    Recursive extension over the vertex order: each vertex is either added
    (when compatible) or must later be dominated; branches where a skipped
    vertex can no longer acquire a selected neighbor are pruned.
    """
    n = g.n
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration supports n <= {ENUMERATION_LIMIT}, got {n}")
    if n == 0:
        return [MisSolution.from_members(g, [])]
    nbr = _neighbor_masks(g)
    results: list[int] = []

    def rec(i: int, chosen: int, undominated: int) -> None:
        if i == n:
            if undominated == 0:
                results.append(chosen)
            return
        future = ~((1 << i) - 1)
        probe = undominated
        while probe:
            low = probe & -probe
            if nbr[low.bit_length() - 1] & future == 0:
                return  # a skipped vertex can never be dominated now
            probe ^= low
        bit = 1 << i
        if nbr[i] & chosen:
            rec(i + 1, chosen, undominated)
        else:
            rec(i + 1, chosen | bit, undominated & ~nbr[i])
            rec(i + 1, chosen, undominated | bit)

    rec(0, 0, 0)
    solutions = [MisSolution.from_members(g, _mask_members(m)) for m in results]
    solutions.sort(key=lambda s: s.members)
    return solutions


@dataclass(frozen=True)
class MisCorrespondence:
    """Per-MIS record of the stability / local-minimum correspondence."""

    solution: MisSolution
    stab: float
    gamma_stable: bool
    q_value: float
    q_matches: bool  # Q at the carried point equals 1/weight
    local_min_verified: bool  # no probed direction decreases Q beyond 1e-12
    worst_descent: float  # most negative Q change seen over all probes


@dataclass(frozen=True)
class OracleReport:
    optimum: MisSolution
    mis_list: tuple[MisCorrespondence, ...]

    @property
    def violations(self) -> list[MisCorrespondence]:
        """Records contradicting the correspondence, marginal band excluded."""
        bad = []
        for rec in self.mis_list:
            if rec.stab > 1.05 and not rec.local_min_verified:
                bad.append(rec)
            if rec.stab < 0.95 and rec.local_min_verified:
                bad.append(rec)
        return bad


def _tangent_probes(
    g: WeightedGraph, members: np.ndarray, count: int, rng: np.random.Generator
) -> np.ndarray:
    """Admissible tangent directions at the point carried by a MIS.

    Rows satisfy sum sqrt(w) * delta = 0, are nonnegative off the support
    (the boundary side), and have norm PROBE_MAGNITUDE.  The first rows are
    one deterministic probe per outside vertex, raising it against a
    sqrt(w)-proportional decrease over the members; the rest are random.
    """
    n = g.n
    inside = np.zeros(n, dtype=bool)
    inside[members] = True
    outside = np.flatnonzero(~inside)
    sw = g.v
    W = float(g.w[members].sum())

    def retilt(D: np.ndarray) -> None:
        # push the sqrt(w)-tilt of each row back into the member coordinates
        tilt = D @ sw
        D[:, members] -= np.outer(tilt, sw[members]) / W

    probes = []
    for i in outside:
        d = np.zeros(n)
        d[i] = 1.0
        d[members] = -sw[members] * (sw[i] / W)
        probes.append(d)
    for _ in range(count):
        d = rng.standard_normal(n)
        d[outside] = np.abs(d[outside])
        probes.append(d)
    D = np.array(probes) if probes else np.zeros((0, n))
    retilt(D)
    norms = np.linalg.norm(D, axis=1)
    D = D[norms > 1e-9]  # drop draws with no tangent component left
    norms = norms[norms > 1e-9]
    D *= (PROBE_MAGNITUDE / norms)[:, None]
    retilt(D)  # kill the roundoff tilt amplified by the rescale
    return D


def correspondence_check(
    g: WeightedGraph, gamma: float, perturbations: int, seed: int = 0
) -> OracleReport:
    """Check every MIS against the tilted-simplex local-minimum picture.

    For each maximal independent set: the stability score, the quadratic
    form value at its carried point (expected 1/weight), and a local
    minimality probe over admissible tangent directions of magnitude 1e-4.
    """
    if g.n > CORRESPONDENCE_LIMIT:
        raise ValueError(f"correspondence check supports n <= {CORRESPONDENCE_LIMIT}")
    if gamma <= 1.0:
        raise ValueError("correspondence check requires gamma > 1")
    rng = np.random.default_rng(seed)
    B = gamma * g.adjacency().toarray()
    np.fill_diagonal(B, 1.0)

    records = []
    for sol in enumerate_mises(g):
        members = np.asarray(sol.members, dtype=np.int64)
        stab = mis_stability(g, sol, gamma)
        r = mis_simplex_point(g, members)
        q = tilted_simplex_q(g, r, gamma)
        q_matches = abs(q - 1.0 / sol.weight) <= Q_MATCH_TOL
        D = _tangent_probes(g, members, perturbations, rng)
        if len(D):
            # exact quadratic expansion: Q(r+d) - Q(r) = 2 d.Br + d.Bd
            Br = B @ r
            delta_q = 2.0 * (D @ Br) + np.einsum("ij,ij->i", D, D @ B.T)
            worst = float(delta_q.min())
        else:
            worst = 0.0
        records.append(
            MisCorrespondence(
                solution=sol,
                stab=stab,
                gamma_stable=stab > 1.0,
                q_value=q,
                q_matches=q_matches,
                local_min_verified=worst >= -DESCENT_TOL,
                worst_descent=worst,
            )
        )
    return OracleReport(optimum=brute_force_mwis(g), mis_list=tuple(records))
