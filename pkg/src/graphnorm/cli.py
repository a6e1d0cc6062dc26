"""Command-line surface.

Subcommands:
    solve   multi-start run on one instance, JSON result
    verify  validate a vertex subset against an instance
    atoms   atomic census (built-in n <= 7 or a graph6 file)
    oracle  exact optimum and per-MIS correspondence report
    bench   directory sweep with gap table against reference objectives

Exit codes: 0 success, 1 invalid solution produced, 2 input error,
3 internal numerical anomaly (safe-division fallback fired).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .analysis import mis_stability
from .graph import GraphError, MisSolution, WeightedGraph
from .io import (
    FormatError,
    parse_instance,
    parse_warm_start,
    read_reference_csv,
    write_result,
)
from .oracle import correspondence_check
from .solver import RunConfig, solve_instance

EXIT_OK = 0
EXIT_INVALID_SOLUTION = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ANOMALY = 3


def _emit(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _load_instance(path: str) -> tuple[str, WeightedGraph]:
    p = Path(path)
    g = parse_instance(p.read_text())
    return p.stem, g


def _add_solve_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--gamma0", type=float, default=0.9)
    sp.add_argument("--gamma1", type=float, default=1.5)
    sp.add_argument("--iterations", type=int, default=1000)
    sp.add_argument("--starts", type=int, default=16)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument(
        "--warm-start",
        action="append",
        default=[],
        metavar="FILE",
        help="fractional start vector (repeatable; one trajectory per file)",
    )
    sp.add_argument("--reference", metavar="CSV", help="reference objectives")
    sp.add_argument("--output", metavar="FILE", help="result destination (default stdout)")
    sp.add_argument(
        "--trace",
        action="store_true",
        help="write per-iteration traces next to the result file",
    )


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        gamma0=args.gamma0,
        gamma1=args.gamma1,
        iterations=args.iterations,
        starts=args.starts,
        seed=args.seed,
        trace=args.trace,
    )


def _trace_payload(stats) -> str:
    payload = {
        sid: {
            "gamma": tr.gamma,
            "energy": tr.energy,
            "pre_energy": tr.pre_energy,
            "mass": tr.mass,
            "step_inf": tr.step_inf,
            "fallbacks": tr.fallbacks,
        }
        for sid, tr in stats.traces.items()
    }
    return json.dumps(payload, indent=2) + "\n"


def exit_code_for(result, stats) -> int:
    """Solution validity outranks the numerical-anomaly signal."""
    if not all(s.valid and s.maximal for s in result.starts):
        return EXIT_INVALID_SOLUTION
    if stats.fallback_events:
        return EXIT_NUMERICAL_ANOMALY
    return EXIT_OK


def cmd_solve(args) -> int:
    name, g = _load_instance(args.instance)
    config = _config_from_args(args)
    warm = None
    if args.warm_start:
        warm = [
            parse_warm_start(Path(w).read_text(), g.n) for w in args.warm_start
        ]
    reference = None
    if args.reference:
        table = read_reference_csv(Path(args.reference).read_text())
        reference = table.get(name)
    result, stats = solve_instance(g, name, config, warm, reference)
    _emit(write_result(result), args.output)
    if args.trace and args.output and args.output != "-":
        Path(args.output + ".trace.json").write_text(_trace_payload(stats))
    return exit_code_for(result, stats)


def _parse_solution_file(text: str) -> list[int]:
    tokens = (
        text.replace("{", " ").replace("}", " ").replace(",", " ").replace(";", " ")
    )
    return [int(tok) for tok in tokens.split()]


def cmd_verify(args) -> int:
    name, g = _load_instance(args.instance)
    members = _parse_solution_file(Path(args.solution).read_text())
    sol = MisSolution.from_members(g, members)
    lines = [
        f"instance: {name}",
        f"members: {list(sol.members)}",
        f"independent: {str(sol.independent).lower()}",
        f"maximal: {str(sol.maximal).lower()}",
        f"weight: {sol.weight:.12g}",
    ]
    if sol.independent and sol.maximal:
        stab = mis_stability(g, sol, args.gamma)
        lines.append(f"stability(gamma={args.gamma:g}): {stab:.12g}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if sol.independent else EXIT_INVALID_SOLUTION


def cmd_atoms(args) -> int:
    from .enumeration import census, census_from_stream, format_census_table

    if args.graph6:
        lines = Path(args.graph6).read_text().splitlines()
        row, skipped = census_from_stream(lines)
        text = format_census_table([row])
        if skipped:
            text += f"\nskipped {skipped} disconnected record(s)"
        _emit(text + "\n", args.output)
        return EXIT_OK
    rows = [census(k) for k in range(1, args.n + 1)] if args.cumulative else [census(args.n)]
    _emit(format_census_table(rows) + "\n", args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    name, g = _load_instance(args.instance)
    report = correspondence_check(g, args.gamma, args.perturbations, seed=args.seed)
    lines = [
        f"instance: {name}",
        f"optimum: {list(report.optimum.members)} weight {report.optimum.weight:.12g}",
        f"maximal independent sets: {len(report.mis_list)}",
    ]
    for rec in report.mis_list:
        lines.append(
            f"  members {list(rec.solution.members)} weight {rec.solution.weight:.12g}"
            f" stab {rec.stab:.6g} q {rec.q_value:.12g}"
            f" local_min {str(rec.local_min_verified).lower()}"
        )
    bad = report.violations
    lines.append(f"correspondence violations: {len(bad)}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if not bad else EXIT_INVALID_SOLUTION


def cmd_bench(args) -> int:
    directory = Path(args.directory)
    references = {}
    if args.reference:
        references = read_reference_csv(Path(args.reference).read_text())
    config = _config_from_args(args)

    instances = sorted(directory.glob("*.mwis")) + sorted(directory.glob("*.dimacs"))
    rows = []
    exit_code = EXIT_OK
    egaps: list[float] = []
    best_gaps: list[float] = []
    out_dir = Path(args.results_dir) if args.results_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for path in instances:
        name = path.stem
        try:
            g = parse_instance(path.read_text())
        except (FormatError, GraphError) as exc:
            rows.append(f"{name:>20}  parse error: {exc}")
            exit_code = max(exit_code, EXIT_INPUT_ERROR)
            continue
        reference = references.get(name)
        result, stats = solve_instance(g, name, config, None, reference)
        if out_dir:
            (out_dir / f"{name}.json").write_text(write_result(result))
        objectives = [s.objective for s in result.starts]
        mean_ms = sum(s.wall_time_ms for s in result.starts) / len(result.starts)
        if reference is not None and reference > 0:
            gaps = [(reference - o) / reference * 100.0 for o in objectives]
            egap = sum(gaps) / len(gaps)
            egaps.append(egap)
            best_gaps.append(result.gap_percent)
            rows.append(
                f"{name:>20} {g.n:>7} {g.num_edges:>9} {egap:>8.2f}% "
                f"{result.gap_percent:>8.2f}% {mean_ms:>9.1f}ms"
            )
        else:
            rows.append(
                f"{name:>20} {g.n:>7} {g.num_edges:>9} {'-':>9} {'-':>9} "
                f"{mean_ms:>9.1f}ms  best {result.best_objective:.12g}"
            )
        exit_code = max(exit_code, exit_code_for(result, stats))
    header = (
        f"{'instance':>20} {'n':>7} {'edges':>9} {'E[Gap]':>9} {'BestGap':>9} "
        f"{'meanTime':>11}"
    )
    lines = [header] + rows
    if egaps:
        lines.append(
            f"{'aggregate':>20} {len(egaps):>7} {'':>9} "
            f"{sum(egaps) / len(egaps):>8.2f}% "
            f"{sum(best_gaps) / len(best_gaps):>8.2f}%  over referenced instances"
        )
    _emit("\n".join(lines) + "\n", args.output)
    return exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="graphnorm",
        description="Graph-normalization dynamics for maximum-weight independent sets",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="multi-start solve of one instance")
    sp.add_argument("instance")
    _add_solve_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check a vertex subset against an instance")
    sp.add_argument("instance")
    sp.add_argument("solution", help="file of 0-based member indices")
    sp.add_argument("--gamma", type=float, default=1.5)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("atoms", help="atomic census table")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="built-in enumeration order (<= 7)")
    group.add_argument("--graph6", metavar="FILE", help="external graph6 stream")
    sp.add_argument("--cumulative", action="store_true", help="rows 1..n")
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_atoms)

    sp = sub.add_parser("oracle", help="exact optimum and correspondence report")
    sp.add_argument("instance")
    sp.add_argument("--gamma", type=float, default=1.5)
    sp.add_argument("--perturbations", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", help="sweep a directory of instances")
    sp.add_argument("directory")
    sp.add_argument(
        "--results-dir", metavar="DIR", help="write per-instance JSON results here"
    )
    _add_solve_flags(sp)
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, GraphError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
