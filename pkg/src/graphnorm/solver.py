"""Multi-start orchestration: run trajectories, round, and aggregate.

Each random start owns an RNG stream derived from (base seed, start
index), so results are byte-identical regardless of how many worker
threads execute the starts.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynamics import (
    GammaSchedule,
    NormalizationError,
    init_random,
    init_warm,
    round_to_mis,
    run_wrgn,
)
from .graph import WeightedGraph
from .io import SolveResult, StartRecord, make_result


@dataclass
class RunConfig:
    """Knobs of a solve run; defaults follow the standard pursuit protocol."""

    gamma0: float = 0.9
    gamma1: float = 1.5
    iterations: int = 1000
    starts: int = 16
    seed: int = 0
    trace: bool = False
    jobs: Optional[int] = None  # worker threads; None picks a sensible default

    def validate(self) -> None:
        if not self.gamma1 >= self.gamma0 > 0:
            raise ValueError("need gamma1 >= gamma0 > 0")
        mode = "constant" if self.gamma0 == self.gamma1 else "linear"
        if mode == "linear" and self.iterations < 2:
            raise ValueError("linear schedule needs at least 2 iterations")
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if self.starts < 1:
            raise ValueError("starts must be at least 1")

    def schedule(self) -> GammaSchedule:
        mode = "constant" if self.gamma0 == self.gamma1 else "linear"
        return GammaSchedule(self.gamma0, self.gamma1, self.iterations, mode=mode)


@dataclass
class RunStats:
    """Non-serialized run diagnostics."""

    fallback_events: int = 0
    aborted_starts: int = 0
    traces: dict = field(default_factory=dict)


def _run_single(
    g: WeightedGraph,
    x0: np.ndarray,
    schedule: GammaSchedule,
    start_id: str,
    record_trace: bool,
):
    t0 = time.perf_counter()
    try:
        x, trace = run_wrgn(g, x0, schedule, record_trace=record_trace)
    except NormalizationError:
        elapsed = (time.perf_counter() - t0) * 1000.0
        rec = StartRecord(
            start=start_id,
            objective=0.0,
            valid=False,
            maximal=False,
            iterations=0,
            wall_time_ms=elapsed,
        )
        return rec, 0, True, None
    elapsed = (time.perf_counter() - t0) * 1000.0
    solution = round_to_mis(g, x)
    rec = StartRecord(
        start=start_id,
        objective=solution.weight,
        valid=solution.independent,
        maximal=solution.maximal,
        iterations=len(trace),
        wall_time_ms=elapsed,
    )
    return rec, trace.total_fallbacks, False, (trace if record_trace else None)


def solve_instance(
    g: WeightedGraph,
    instance_name: str,
    config: RunConfig,
    warm_starts: Optional[list[np.ndarray]] = None,
    reference_objective: Optional[float] = None,
) -> tuple[SolveResult, RunStats]:
    """Run the configured number of starts and aggregate a SolveResult.

    With warm starts supplied, one trajectory runs per vector; otherwise
    `config.starts` random starts are used.
    """
    config.validate()
    schedule = config.schedule()

    tasks: list[tuple[str, np.ndarray]] = []
    if warm_starts:
        for i, vec in enumerate(warm_starts):
            tasks.append((f"warm-{i}", init_warm(vec, g.n)))
    else:
        for i in range(config.starts):
            tasks.append((f"seed-{config.seed}.{i}", init_random(g.n, [config.seed, i])))

    stats = RunStats()
    jobs = config.jobs or min(len(tasks), 8)

    def work(item):
        start_id, x0 = item
        return _run_single(g, x0, schedule, start_id, config.trace)

    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(work, tasks))
    else:
        outcomes = [work(t) for t in tasks]

    records = []
    for (start_id, _), (rec, fallbacks, aborted, trace) in zip(tasks, outcomes):
        records.append(rec)
        stats.fallback_events += fallbacks
        stats.aborted_starts += int(aborted)
        if trace is not None:
            stats.traces[start_id] = trace

    schedule_info = {
        "gamma0": schedule.gamma0,
        "gamma1": schedule.gamma1,
        "iterations": schedule.iterations,
        "mode": schedule.mode,
    }
    result = make_result(
        instance_name, g, records, schedule_info, reference_objective
    )
    return result, stats
