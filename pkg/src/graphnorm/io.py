"""Instance, vector, and result serialization.

Three text formats live here:

* MWIS instances, DIMACS-flavored::

      c optional comments
      p mwis <n> <m>
      n <vertex-id> <weight>     (one line per vertex, ids 1-based)
      e <u> <v>                  (one line per edge, ids 1-based)

* warm-start vectors: exactly n lines, one finite decimal per line.

* graph6 records: standard sparse-graph encoding, one per line,
  single size byte (n <= 62), upper-triangle bits column-major,
  6 bits per payload byte offset by 63.

Solve results are JSON with a fixed key order and floats rendered to 12
significant digits, so serialize -> parse -> serialize is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .graph import GraphError, WeightedGraph, build_graph

FORMAT_VERSION = "0.1.0"


class FormatError(ValueError):
    """Raised on malformed instance, vector, graph6, or result text."""


# ---------------------------------------------------------------------------
# MWIS instances


def parse_instance(text: str) -> WeightedGraph:
    """Parse a DIMACS-flavored MWIS instance into a validated graph.

    Vertex ids are 1-based in the file and converted to 0-based here.
    """
    n = None
    m = None
    weights: dict[int, float] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        kind = parts[0]
        try:
            if kind == "p":
                if len(parts) != 4 or parts[1] != "mwis":
                    raise FormatError(f"line {lineno}: malformed problem line {line!r}")
                if n is not None:
                    raise FormatError(f"line {lineno}: duplicate problem line")
                n, m = int(parts[2]), int(parts[3])
            elif kind == "n":
                if n is None:
                    raise FormatError(f"line {lineno}: weight line before problem line")
                if len(parts) != 3:
                    raise FormatError(f"line {lineno}: malformed weight line {line!r}")
                vid = int(parts[1])
                if not 1 <= vid <= n:
                    raise FormatError(f"line {lineno}: vertex id {vid} outside 1..{n}")
                if vid in weights:
                    raise FormatError(f"line {lineno}: duplicate weight for vertex {vid}")
                weights[vid] = float(parts[2])
            elif kind == "e":
                if n is None:
                    raise FormatError(f"line {lineno}: edge line before problem line")
                if len(parts) != 3:
                    raise FormatError(f"line {lineno}: malformed edge line {line!r}")
                u, v = int(parts[1]), int(parts[2])
                if not (1 <= u <= n and 1 <= v <= n):
                    raise FormatError(f"line {lineno}: edge ({u},{v}) outside 1..{n}")
                edges.append((u - 1, v - 1))
            else:
                raise FormatError(f"line {lineno}: unknown line type {kind!r}")
        except ValueError as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(f"line {lineno}: cannot parse number in {line!r}") from exc
    if n is None:
        raise FormatError("missing problem line")
    if len(edges) != m:
        raise FormatError(f"problem line declares {m} edges, file has {len(edges)}")
    missing = [vid for vid in range(1, n + 1) if vid not in weights]
    if missing:
        raise FormatError(f"missing weight for vertex {missing[0]}")
    w = [weights[vid] for vid in range(1, n + 1)]
    try:
        return build_graph(n, edges, w)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


# Converter hook: external collections can register parsers for their own
# instance syntax under a format name.
# TODO(libmpopt): register a converter for the libmpopt instance format once
# its exact syntax is pinned down.
INSTANCE_PARSERS: dict[str, callable] = {"mwis": parse_instance}


def parse_instance_as(text: str, fmt: str = "mwis") -> WeightedGraph:
    """Parse an instance in a registered format (see INSTANCE_PARSERS)."""
    try:
        parser = INSTANCE_PARSERS[fmt]
    except KeyError:
        raise FormatError(
            f"no parser registered for format {fmt!r}; "
            f"known: {sorted(INSTANCE_PARSERS)}"
        ) from None
    return parser(text)


def write_instance(g: WeightedGraph, comment: Optional[str] = None) -> str:
    """Render a graph in the instance format (edges canonicalized u < v)."""
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"c {c}")
    lines.append(f"p mwis {g.n} {g.num_edges}")
    for i in range(g.n):
        lines.append(f"n {i + 1} {float(g.w[i])!r}")
    for u, v in g.edges():
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Warm-start vectors


def parse_warm_start(text: str, n: int) -> np.ndarray:
    """Parse a fractional start: exactly n non-empty lines of finite decimals."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) != n:
        raise FormatError(f"warm start has {len(lines)} values, expected {n}")
    values = np.empty(n, dtype=np.float64)
    for i, ln in enumerate(lines):
        try:
            values[i] = float(ln)
        except ValueError as exc:
            raise FormatError(f"warm start line {i + 1}: cannot parse {ln!r}") from exc
        if not np.isfinite(values[i]):
            raise FormatError(f"warm start line {i + 1}: non-finite value {ln!r}")
    return values


# ---------------------------------------------------------------------------
# graph6


def parse_graph6(line: str) -> np.ndarray:
    """Decode a single graph6 record into a symmetric 0/1 adjacency matrix."""
    s = line.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<") :]
    if not s:
        raise FormatError("empty graph6 record")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise FormatError(f"character {ch!r} outside graph6 alphabet")
    n = ord(s[0]) - 63
    if n == 63:
        raise FormatError("multi-byte graph6 sizes (n > 62) not supported")
    payload = s[1:]
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(payload) != expected:
        raise FormatError(
            f"graph6 payload has {len(payload)} bytes, expected {expected} for n={n}"
        )
    bits = []
    for ch in payload:
        val = ord(ch) - 63
        bits.extend((val >> shift) & 1 for shift in range(5, -1, -1))
    adj = np.zeros((n, n), dtype=np.int8)
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                adj[i, j] = adj[j, i] = 1
            k += 1
    return adj


def write_graph6(adj: np.ndarray) -> str:
    """Encode a symmetric 0/1 adjacency matrix as one graph6 record."""
    adj = np.asarray(adj)
    n = adj.shape[0]
    if n > 62:
        raise FormatError("graph6 writer supports n <= 62")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(int(adj[i, j]))
    while len(bits) % 6:
        bits.append(0)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


# ---------------------------------------------------------------------------
# Solve results


def _f12(x: float) -> float:
    """Quantize to 12 significant digits (the on-disk float resolution)."""
    return float(f"{x:.12g}")


@dataclass(frozen=True)
class StartRecord:
    """Outcome of a single trajectory."""

    start: str  # seed tag for random starts, file id for warm starts
    objective: float
    valid: bool
    maximal: bool
    iterations: int
    wall_time_ms: float


@dataclass(frozen=True)
class SolveResult:
    """Aggregated outcome of a multi-start run on one instance."""

    instance: str
    n: int
    edges: int
    starts: tuple[StartRecord, ...]
    best_objective: float
    schedule: dict
    reference_objective: Optional[float] = None
    gap_percent: Optional[float] = field(default=None)
    version: str = FORMAT_VERSION

    @staticmethod
    def gap_of(reference: float, best: float) -> Optional[float]:
        if reference > 0:
            return (reference - best) / reference * 100.0
        return None


def make_result(
    instance: str,
    g: WeightedGraph,
    starts: list[StartRecord],
    schedule: dict,
    reference_objective: Optional[float] = None,
) -> SolveResult:
    best = max((s.objective for s in starts), default=0.0)
    gap = None
    if reference_objective is not None:
        gap = SolveResult.gap_of(reference_objective, best)
    return SolveResult(
        instance=instance,
        n=g.n,
        edges=g.num_edges,
        starts=tuple(starts),
        best_objective=best,
        schedule=schedule,
        reference_objective=reference_objective,
        gap_percent=gap,
    )


def write_result(result: SolveResult) -> str:
    """Render a result as canonical JSON (stable keys, 12-digit floats)."""
    obj: dict = {
        "instance": result.instance,
        "n": result.n,
        "edges": result.edges,
        "starts": [
            {
                "start": s.start,
                "objective": _f12(s.objective),
                "valid": s.valid,
                "maximal": s.maximal,
                "iterations": s.iterations,
                "wall_time_ms": _f12(s.wall_time_ms),
            }
            for s in result.starts
        ],
        "best_objective": _f12(result.best_objective),
    }
    if result.reference_objective is not None:
        obj["reference_objective"] = _f12(result.reference_objective)
    if result.gap_percent is not None:
        obj["gap_percent"] = _f12(result.gap_percent)
    obj["schedule"] = {
        "gamma0": _f12(result.schedule["gamma0"]),
        "gamma1": _f12(result.schedule["gamma1"]),
        "iterations": result.schedule["iterations"],
        "mode": result.schedule["mode"],
    }
    obj["version"] = result.version
    return json.dumps(obj, indent=2) + "\n"


def parse_result(text: str) -> SolveResult:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed result JSON: {exc}") from exc
    starts = tuple(
        StartRecord(
            start=s["start"],
            objective=float(s["objective"]),
            valid=bool(s["valid"]),
            maximal=bool(s["maximal"]),
            iterations=int(s["iterations"]),
            wall_time_ms=float(s["wall_time_ms"]),
        )
        for s in obj["starts"]
    )
    return SolveResult(
        instance=obj["instance"],
        n=int(obj["n"]),
        edges=int(obj["edges"]),
        starts=starts,
        best_objective=float(obj["best_objective"]),
        schedule=obj["schedule"],
        reference_objective=obj.get("reference_objective"),
        gap_percent=obj.get("gap_percent"),
        version=obj.get("version", FORMAT_VERSION),
    )


def read_reference_csv(text: str) -> dict[str, float]:
    """Two-column CSV (instance name, best-known objective) -> lookup table."""
    import csv
    import io as _io

    table: dict[str, float] = {}
    for row in csv.reader(_io.StringIO(text)):
        if not row or not "".join(row).strip():
            continue
        if len(row) < 2:
            raise FormatError(f"reference row needs two columns: {row!r}")
        name = row[0].strip()
        try:
            value = float(row[1])
        except ValueError:
            if not table and name.lower() in ("instance", "name"):
                continue  # header row
            raise FormatError(f"cannot parse reference objective in {row!r}")
        table[name] = value
    return table
