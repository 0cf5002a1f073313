"""``graphchallenge`` command line.

Exit codes: 0 success, 1 verification failure or algorithm disagreement,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys
from typing import IO, Iterator, Sequence

from . import bench, ingest, ktruss as kt, triangles
from .errors import GraphChallengeError, ParseError
from .generator import GridSpec, grid_graph
from .graph import EdgeList, Graph

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[IO[bytes]]:
    if path is None or path == "-":
        yield sys.stdout.buffer
        sys.stdout.buffer.flush()
    else:
        with open(path, "wb") as fh:
            yield fh


def _write_text(path: str | None, text: str) -> None:
    sys.stdout.flush()
    with _output(path) as fh:
        fh.write(text.encode("ascii", "replace"))


def _load(args) -> Graph:
    fmt = args.format or ingest.guess_format(args.input)
    if args.input == "-":
        return ingest.read_graph(sys.stdin.buffer, fmt, n=args.n)
    return ingest.read_graph(args.input, fmt, n=args.n)


def _parse_expect(value: str | None, kernel: str, n: int | None = None):
    """``--expect`` accepts an integer, ``oracle``, ``reference`` or a file."""
    if value is None or value in ("oracle", "reference"):
        return value
    try:
        return int(value)
    except ValueError:
        pass
    if not os.path.exists(value):
        raise UsageError(f"--expect {value!r} is neither an integer nor a file")
    if kernel == "ktruss":
        return ingest.read_graph(value, ingest.guess_format(value), n=n).edge_list
    with open(value) as fh:
        text = fh.read().strip()
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"expected-value file {value!r} does not hold an integer") from None


def _add_input(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--input", "-i", required=required, help="graph file, or - for stdin")
    p.add_argument("--format", "-f", choices=ingest.FORMATS, help="input format (default: by extension)")
    p.add_argument("--n", type=int, help="override the vertex count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphchallenge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic M x M 8-neighbour image graph")
    side = p.add_mutually_exclusive_group(required=True)
    side.add_argument("--grid-exponent", type=int, help="M = 2**n")
    side.add_argument("--side", type=int, help="M directly (M >= 2)")
    p.add_argument("--out", "-o")
    p.add_argument("--format", "-f", choices=ingest.FORMATS, default="tsv")

    p = sub.add_parser("convert", help="convert between TSV and MatrixMarket")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--from", dest="src_format", choices=ingest.FORMATS, required=True)
    p.add_argument("--to", dest="dst_format", choices=ingest.FORMATS, required=True)
    p.add_argument("--out", "-o")
    p.add_argument("--n", type=int, help="override the vertex count")

    p = sub.add_parser("triangles", help="count triangles")
    _add_input(p)
    p.add_argument(
        "--algorithm", "-a", choices=bench.TRIANGLE_ALGORITHMS + ("all",), default="hadamard"
    )
    p.add_argument("--enumerate", action="store_true", help="also list the triangles (1-based)")
    p.add_argument("--expect", help="integer, file, 'oracle' or 'reference'")
    p.add_argument("--out", "-o")

    for name, helptext in (("ktruss", "compute a k-truss"), ("truss", "full truss decomposition")):
        p = sub.add_parser(name, help=helptext)
        _add_input(p)
        if name == "ktruss":
            p.add_argument("--k", type=int, default=3)
            p.add_argument("--decompose", action="store_true")
            p.add_argument("--expect", help="edge-list file or 'oracle'")
        p.add_argument("--out", "-o")

    p = sub.add_parser("bench", help="timed kernel runs with metrics report")
    p.add_argument("--input", "-i", action="append", default=[], help="repeatable")
    p.add_argument("--grid-exponent", action="append", type=int, default=[], help="repeatable")
    p.add_argument("--format", "-f", choices=ingest.FORMATS)
    p.add_argument("--n", type=int)
    p.add_argument("--kernel", choices=bench.KERNELS, default="triangles")
    p.add_argument("--algorithm", "-a", choices=bench.TRIANGLE_ALGORITHMS, default="hadamard")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--reps", type=int, default=bench.DEFAULT_REPS)
    p.add_argument("--expect", help="integer, file, 'oracle' or 'reference'")
    p.add_argument("--expect-oracle", action="store_true", help="same as --expect oracle")
    p.add_argument("--dataset", help="dataset label (single input only)")
    p.add_argument("--energy-joules", type=float, help="externally measured energy, passed through")
    p.add_argument("--no-memory", action="store_true", help="skip the traced memory run")
    p.add_argument("--report", choices=bench.REPORT_FORMATS, default="table")
    p.add_argument("--out", "-o")
    return parser


def cmd_generate(args) -> int:
    spec = GridSpec.from_exponent(args.grid_exponent) if args.grid_exponent else GridSpec(args.side)
    g = grid_graph(spec)
    with _output(args.out) as fh:
        ingest.write_graph(g, fh, args.format)
    return EXIT_OK


def cmd_convert(args) -> int:
    g = ingest.read_graph(args.input, args.src_format, n=args.n)
    with _output(args.out) as fh:
        ingest.write_graph(g, fh, args.dst_format)
    return EXIT_OK


def cmd_triangles(args) -> int:
    g = _load(args)
    algos = bench.TRIANGLE_ALGORITHMS if args.algorithm == "all" else (args.algorithm,)
    counts = {algo: triangles.count(g, algo).count for algo in algos}
    lines = [f"{algo}\t{c}" for algo, c in counts.items()]
    if args.enumerate:
        res = triangles.count_incidence(g.adjacency, g.incidence, enumerate=True)
        found = sorted({tuple(sorted(r)) for r in res.records})
        lines.extend("\t".join(str(x + 1) for x in tri) for tri in found)
    _write_text(args.out, "\n".join(lines) + "\n")

    if len(set(counts.values())) > 1:
        print(f"algorithms disagree: {counts}", file=sys.stderr)
        return EXIT_FAILED
    expected = _parse_expect(args.expect, "triangles")
    if expected == "oracle":
        expected = triangles.oracle_enumerate(g)[0].count
    elif expected == "reference":
        expected = bench.reference_triangles(os.path.basename(args.input))
    if expected is not None:
        status, detail = bench.verify(next(iter(counts.values())), expected)
        print(f"{status.value}: {detail}", file=sys.stderr)
        if status is bench.Status.FAILED:
            return EXIT_FAILED
    return EXIT_OK


def _max_k_lines(result: kt.TrussResult) -> str:
    order = sorted(range(len(result.per_edge_max_k)), key=lambda i: tuple(result.input_edges[i]))
    return "".join(
        f"{result.input_edges[i][0] + 1}\t{result.input_edges[i][1] + 1}\t{result.per_edge_max_k[i]}\n"
        for i in order
    )


def cmd_ktruss(args) -> int:
    g = _load(args)
    decompose = args.command == "truss" or args.decompose
    if decompose:
        result = kt.truss_decomposition(g.incidence)
        _write_text(args.out, _max_k_lines(result))
        print(f"max truss k={result.k} with {result.surviving_edges.m} edges", file=sys.stderr)
        return EXIT_OK
    if args.k < 2:
        raise UsageError("--k must be >= 2")
    result = kt.ktruss(g.incidence, args.k)
    with _output(args.out) as fh:
        ingest.write_tsv(Graph(result.surviving_edges), fh)
    print(f"{args.k}-truss: {result.surviving_edges.m} of {g.m} edges", file=sys.stderr)
    expected = _parse_expect(args.expect, "ktruss", n=g.n)
    if expected is not None:
        if expected == "oracle":
            expected = kt.oracle_ktruss(g, args.k).surviving_edges
        if not isinstance(expected, EdgeList):
            raise UsageError("ktruss --expect needs an edge-list file or 'oracle'")
        status, detail = bench.verify(result.surviving_edges, expected)
        print(f"{status.value}: {detail}", file=sys.stderr)
        if status is bench.Status.FAILED:
            return EXIT_FAILED
    return EXIT_OK


def cmd_bench(args) -> int:
    sources: list[tuple[object, str | None]] = [(GridSpec.from_exponent(e), None) for e in args.grid_exponent]
    sources += [(path, args.format or ingest.guess_format(path)) for path in args.input]
    if not sources:
        raise UsageError("bench needs at least one --input or --grid-exponent")
    if args.dataset and len(sources) > 1:
        raise UsageError("--dataset labels a single input only")
    expect = "oracle" if args.expect_oracle else _parse_expect(args.expect, args.kernel, n=args.n)
    records = []
    for src, fmt in sources:
        cfg = bench.BenchConfig(
            source=src,
            kernel=args.kernel,
            algorithm=args.algorithm,
            k=args.k,
            fmt=fmt or "tsv",
            n=args.n,
            reps=args.reps,
            dataset=args.dataset,
            expected=expect,
            energy_joules=args.energy_joules,
            measure_memory=not args.no_memory,
        )
        rec = bench.run_benchmark(cfg)
        if rec.status is bench.Status.FAILED:
            print(f"{rec.dataset}: verification failed: {rec.detail}", file=sys.stderr)
        records.append(rec)
    _write_text(args.out, bench.emit_report(records, args.report))
    return EXIT_FAILED if any(r.status is bench.Status.FAILED for r in records) else EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "convert": cmd_convert,
    "triangles": cmd_triangles,
    "ktruss": cmd_ktruss,
    "truss": cmd_ktruss,
    "bench": cmd_bench,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphChallengeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
