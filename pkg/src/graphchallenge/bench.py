"""Benchmark harness: timed kernel runs, verification and report output.

Loading, normalisation and matrix construction happen once, untimed.  Only
the kernel is timed, ``reps`` times, with a monotonic clock.  The rate is
stored adjacency entries (both orientations of every edge, the line count
of a challenge TSV) divided by the mean kernel time.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import os
import platform
import statistics
import time
import tracemalloc
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import ingest, ktruss as kt, triangles
from .generator import GridSpec, grid_graph, oracle_expected_triangles
from .graph import EdgeList, Graph

DEFAULT_REPS = 100
MIN_TIMED_SECONDS = 1e-6
ORACLE_MAX_VERTICES = 2000

# published triangle counts for SNAP graphs: name -> (stored edges, triangles)
REFERENCE_SNAP_TABLE: dict[str, tuple[int, int]] = {
    "cit-HepTh-dates": (38488, 1418),
    "wiki-Vote": (201524, 608389),
    "email-Enron": (367662, 727044),
    "soc-sign-epinions": (1422420, 4910076),
    "flickrEdges": (4633896, 107987357),
    "web-Google": (8644102, 13391903),
    "cit-Patents": (33037894, 7515023),
}

KERNELS = ("triangles", "ktruss")
TRIANGLE_ALGORITHMS = ("hadamard", "lu", "incidence", "oracle")
REPORT_FORMATS = ("csv", "json", "table")


class Status(str, enum.Enum):
    VERIFIED = "verified"
    UNVERIFIED = "unverified"
    FAILED = "failed"


@dataclass
class MetricsRecord:
    dataset: str
    kernel: str
    algorithm: str
    edges: int
    undirected_edges: int
    mean_seconds: float
    rate: float | None
    peak_memory_bytes: int
    memory_method: str
    energy_joules: float | None
    processor: str
    status: Status
    repetitions: int
    rep_seconds: list[float] = field(default_factory=list)
    result: Any = None
    detail: str = ""
    load_seconds: float = 0.0

    @property
    def min_seconds(self) -> float:
        return min(self.rep_seconds) if self.rep_seconds else 0.0

    @property
    def max_seconds(self) -> float:
        return max(self.rep_seconds) if self.rep_seconds else 0.0

    @property
    def rate_per_joule(self) -> float | None:
        if self.rate is None or not self.energy_joules:
            return None
        return self.rate / self.energy_joules


@dataclass
class BenchConfig:
    """One benchmark job.

    ``source`` is a path, an open binary stream, a :class:`GridSpec` or an
    already-built :class:`Graph`.  ``expected`` is an int (triangle count), an
    :class:`EdgeList` (truss edges), the string ``"oracle"`` to compute ground
    truth by brute force, ``"reference"`` for the built-in published tables,
    or None.
    """

    source: Any
    kernel: str = "triangles"
    algorithm: str = "hadamard"
    k: int = 3
    fmt: str = "tsv"
    n: int | None = None
    reps: int = DEFAULT_REPS
    dataset: str | None = None
    expected: Any = None
    energy_joules: float | None = None
    measure_memory: bool = True


def processor_description() -> str:
    model = ""
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.lower().startswith("model name"):
                    model = line.split(":", 1)[1].strip()
                    break
    except OSError:
        pass
    model = model or platform.processor() or platform.machine() or "unknown"
    return f"1 x {model} (single thread)"


def _dataset_name(cfg: BenchConfig) -> str:
    if cfg.dataset:
        return cfg.dataset
    src = cfg.source
    if isinstance(src, GridSpec):
        return f"grid-{src.side}x{src.side}"
    if isinstance(src, (str, os.PathLike)):
        return os.path.basename(os.fspath(src))
    return "graph"


def load(cfg: BenchConfig) -> Graph:
    src = cfg.source
    if isinstance(src, Graph):
        return src
    if isinstance(src, GridSpec):
        return grid_graph(src)
    return ingest.read_graph(src, cfg.fmt, n=cfg.n)


def _kernel(cfg: BenchConfig, g: Graph) -> Callable[[], Any]:
    if cfg.kernel == "triangles":
        algo = triangles.Algorithm(cfg.algorithm)
        if algo is triangles.Algorithm.HADAMARD:
            a = g.adjacency
            return lambda: triangles.count_hadamard(a).count
        if algo is triangles.Algorithm.LU:
            a = g.adjacency
            return lambda: triangles.count_lu(a).count
        if algo is triangles.Algorithm.INCIDENCE:
            a, e = g.adjacency, g.incidence
            return lambda: triangles.count_incidence(a, e).count
        return lambda: triangles.oracle_enumerate(g)[0].count
    if cfg.kernel == "ktruss":
        e = g.incidence
        k = cfg.k
        return lambda: kt.ktruss(e, k).surviving_edges
    raise ValueError(f"unknown kernel {cfg.kernel!r}")


def reference_triangles(name: str) -> int | None:
    """Published triangle count for a SNAP dataset file or label, if known."""
    stem = os.path.basename(name).split(".")[0]
    for key, (_, tri) in REFERENCE_SNAP_TABLE.items():
        if stem == key or stem.startswith(key + "_"):
            return tri
    return None


def _oracle_expected(cfg: BenchConfig, g: Graph) -> Any:
    if cfg.kernel == "triangles":
        if isinstance(cfg.source, GridSpec):
            return oracle_expected_triangles(cfg.source.side)
        if g.n > ORACLE_MAX_VERTICES:
            raise ValueError(f"oracle limited to {ORACLE_MAX_VERTICES} vertices, graph has {g.n}")
        return triangles.oracle_enumerate(g)[0].count
    return kt.oracle_ktruss(g, cfg.k).surviving_edges


def verify(result: Any, expected: Any) -> tuple[Status, str]:
    """Exact comparison: integers for counts, edge sets for trusses."""
    if expected is None:
        return Status.UNVERIFIED, "no expected value"
    if isinstance(result, EdgeList) or isinstance(expected, EdgeList):
        got = set(result) if result is not None else set()
        want = set(expected)
        if got == want:
            return Status.VERIFIED, f"{len(got)} edges match"
        missing, extra = want - got, got - want
        return Status.FAILED, f"edge sets differ: {len(missing)} missing, {len(extra)} unexpected"
    if int(result) == int(expected):
        return Status.VERIFIED, f"{result} matches"
    return Status.FAILED, f"got {result}, expected {expected}"


def _peak_memory(fn: Callable[[], Any], g: Graph, cfg: BenchConfig) -> tuple[int, str]:
    if cfg.measure_memory:
        tracemalloc.start()
        try:
            fn()
            _, peak = tracemalloc.get_traced_memory()
        finally:
            tracemalloc.stop()
        return int(peak), "tracemalloc"
    # lower bound: CSR arrays (int64 index + int64 value) of the input matrices
    nnz = 2 * g.m if cfg.kernel == "triangles" else 4 * g.m
    return int(nnz * 16 + (g.n + 1) * 8), "analytic"


def run_benchmark(cfg: BenchConfig) -> MetricsRecord:
    if cfg.reps < 1:
        raise ValueError("reps must be >= 1")
    name = _dataset_name(cfg)
    t0 = time.perf_counter()
    g = load(cfg)
    fn = _kernel(cfg, g)
    load_seconds = time.perf_counter() - t0

    expected = cfg.expected
    if isinstance(expected, str):
        if expected == "oracle":
            expected = _oracle_expected(cfg, g)
        elif expected == "reference":
            expected = reference_triangles(name) if cfg.kernel == "triangles" else None
        else:
            raise ValueError(f"unknown expected-value source {expected!r}")

    times = []
    result = None
    for _ in range(cfg.reps):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    mean = statistics.fmean(times)

    memory, method = _peak_memory(fn, g, cfg)
    status, detail = verify(result, expected)
    stored = 2 * g.m
    return MetricsRecord(
        dataset=name,
        kernel=cfg.kernel,
        algorithm=cfg.algorithm if cfg.kernel == "triangles" else f"k={cfg.k}",
        edges=stored,
        undirected_edges=g.m,
        mean_seconds=mean,
        rate=stored / mean if mean >= MIN_TIMED_SECONDS else None,
        peak_memory_bytes=memory,
        memory_method=method,
        energy_joules=cfg.energy_joules,
        processor=processor_description(),
        status=status,
        repetitions=cfg.reps,
        rep_seconds=times,
        result=result,
        detail=detail,
        load_seconds=load_seconds,
    )


REPORT_COLUMNS = (
    "dataset",
    "kernel",
    "algorithm",
    "edges",
    "mean_seconds",
    "rate",
    "memory",
    "energy",
    "processor",
    "status",
    "reps",
    "undirected_edges",
    "min_seconds",
    "max_seconds",
    "memory_method",
    "rate_per_joule",
    "load_seconds",
    "result",
)


def _result_summary(result: Any) -> Any:
    if isinstance(result, EdgeList):
        return f"{result.m} edges"
    if isinstance(result, (int, np.integer)):
        return int(result)
    return result


def _row(rec: MetricsRecord) -> dict[str, Any]:
    return {
        "dataset": rec.dataset,
        "kernel": rec.kernel,
        "algorithm": rec.algorithm,
        "edges": rec.edges,
        "mean_seconds": rec.mean_seconds,
        "rate": rec.rate,
        "memory": rec.peak_memory_bytes,
        "energy": rec.energy_joules,
        "processor": rec.processor,
        "status": rec.status.value,
        "reps": rec.repetitions,
        "undirected_edges": rec.undirected_edges,
        "min_seconds": rec.min_seconds,
        "max_seconds": rec.max_seconds,
        "memory_method": rec.memory_method,
        "rate_per_joule": rec.rate_per_joule,
        "load_seconds": rec.load_seconds,
        "result": _result_summary(rec.result),
    }


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_report(records: Sequence[MetricsRecord], fmt: str = "csv") -> str:
    if not records:
        raise ValueError("emit_report needs at least one record")
    rows = [_row(r) for r in records]
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
        return buf.getvalue()
    if fmt == "table":
        cells = [list(REPORT_COLUMNS)] + [
            [_table_cell(row[c]) for c in REPORT_COLUMNS] for row in rows
        ]
        widths = [max(len(r[i]) for r in cells) for i in range(len(REPORT_COLUMNS))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def _table_cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)

