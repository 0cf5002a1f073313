"""Readers and writers for the challenge TSV and MatrixMarket formats.

Files use 1-based vertex ids; everything in memory is 0-based.  The shift
happens in :func:`normalize` on the way in and in the writers on the way out.

TSV layout, one edge per line::

    <u>\\t<v>\\t<w>\\n
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

import numpy as np

from .errors import ParseError
from .graph import EdgeList, Graph

FORMATS = ("tsv", "mmio")


@dataclass
class RawTriples:
    """Parsed but un-normalised file contents (1-based ids)."""

    u: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    v: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    w: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    n: int | None = None

    def __len__(self) -> int:
        return int(self.u.size)

    def triples(self) -> list[tuple[int, int, int]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[int, int, int]], n: int | None = None) -> "RawTriples":
        arr = np.array(list(triples), dtype=np.int64).reshape(-1, 3)
        return cls(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), n)


def _lines(stream) -> Iterator[str]:
    """Yield decoded lines with the trailing ``\\n`` or ``\\r\\n`` removed."""
    for raw in stream:
        if isinstance(raw, bytes):
            try:
                raw = raw.decode("ascii")
            except UnicodeDecodeError as exc:
                raise ParseError(f"non-ASCII input: {exc}") from None
        if raw.endswith("\n"):
            raw = raw[:-1]
            if raw.endswith("\r"):
                raw = raw[:-1]
        yield raw


def _int_field(text: str, what: str, lineno: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} {text!r} is not an integer", lineno) from None


def parse_tsv(stream) -> RawTriples:
    """Parse ``u<TAB>v<TAB>w`` lines.  Blank lines are skipped."""
    us: list[int] = []
    vs: list[int] = []
    ws: list[int] = []
    for lineno, line in enumerate(_lines(stream), start=1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError(f"expected 3 tab-separated fields, found {len(parts)}", lineno)
        u = _int_field(parts[0], "vertex", lineno)
        v = _int_field(parts[1], "vertex", lineno)
        w = _int_field(parts[2], "weight", lineno)
        if u < 1 or v < 1:
            raise ParseError(f"vertex ids must be >= 1, got ({u}, {v})", lineno)
        us.append(u)
        vs.append(v)
        ws.append(w)
    return RawTriples(
        np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64), np.array(ws, dtype=np.int64)
    )


_MM_FIELDS = ("pattern", "integer", "real")
_MM_SYMMETRIES = ("general", "symmetric", "skew-symmetric")


def parse_mmio(stream) -> RawTriples:
    """Parse a MatrixMarket coordinate file.

    Symmetric and skew-symmetric storage is expanded to both orientations,
    entry by entry.  Weights of ``pattern`` files are 1; ``real`` weights are
    truncated to integers since they are discarded downstream anyway.
    """
    lines = enumerate(_lines(stream), start=1)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty MatrixMarket file") from None
    tokens = header.split()
    if (
        len(tokens) != 5
        or tokens[0] != "%%MatrixMarket"
        or tokens[1].lower() != "matrix"
        or tokens[2].lower() != "coordinate"
    ):
        raise ParseError(f"malformed MatrixMarket header {header!r}", lineno)
    fld, symmetry = tokens[3].lower(), tokens[4].lower()
    if fld not in _MM_FIELDS:
        raise ParseError(f"unsupported MatrixMarket field {fld!r}", lineno)
    if symmetry not in _MM_SYMMETRIES:
        raise ParseError(f"unsupported MatrixMarket symmetry {symmetry!r}", lineno)

    size = None
    for lineno, line in lines:
        if line.startswith("%") or not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("size line must be 'nrows ncols nnz'", lineno)
        size = [_int_field(p, "size", lineno) for p in parts]
        break
    if size is None:
        raise ParseError("missing size line")
    nrows, ncols, nnz = size
    if min(size) < 0:
        raise ParseError(f"negative size {size}")

    expected_fields = 2 if fld == "pattern" else 3
    us: list[int] = []
    vs: list[int] = []
    ws: list[int] = []
    count = 0
    for lineno, line in lines:
        if line.startswith("%") or not line.strip():
            continue
        parts = line.split()
        if len(parts) != expected_fields:
            raise ParseError(f"expected {expected_fields} fields for {fld} entries", lineno)
        r = _int_field(parts[0], "row", lineno)
        c = _int_field(parts[1], "column", lineno)
        if not (1 <= r <= nrows and 1 <= c <= ncols):
            raise ParseError(f"entry ({r}, {c}) outside declared {nrows}x{ncols}", lineno)
        if fld == "pattern":
            w = 1
        elif fld == "integer":
            w = _int_field(parts[2], "value", lineno)
        else:
            try:
                w = int(float(parts[2]))
            except ValueError:
                raise ParseError(f"value {parts[2]!r} is not a number", lineno) from None
        count += 1
        if count > nnz:
            raise ParseError(f"more entries than the declared {nnz}", lineno)
        us.append(r)
        vs.append(c)
        ws.append(w)
        if symmetry != "general" and r != c:
            us.append(c)
            vs.append(r)
            ws.append(-w if symmetry == "skew-symmetric" else w)
    if count != nnz:
        raise ParseError(f"declared {nnz} entries but found {count}")
    return RawTriples(
        np.array(us, dtype=np.int64),
        np.array(vs, dtype=np.int64),
        np.array(ws, dtype=np.int64),
        n=max(nrows, ncols),
    )


def normalize(raw: RawTriples) -> Graph:
    """Turn raw triples into a canonical undirected simple graph.

    Self-loops are dropped, both orientations collapse to one unordered pair,
    duplicates are merged and ids shift to 0-based.  ``n`` is the declared
    vertex count, widened if an id exceeds it; otherwise the largest id seen.
    """
    observed = int(max(raw.u.max(), raw.v.max())) if len(raw) else 0
    n = observed if raw.n is None else max(int(raw.n), observed)
    return Graph(EdgeList.canonical(n, raw.u - 1, raw.v - 1))


def _text_sink(stream: IO) -> IO[str]:
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding="ascii", newline="\n", write_through=True)


def _emit(stream: IO, chunks: Iterable[str]) -> None:
    sink = _text_sink(stream)
    for chunk in chunks:
        sink.write(chunk)
    sink.flush()
    if sink is not stream:
        sink.detach()


def _tsv_chunks(g: Graph, batch: int = 1 << 16) -> Iterator[str]:
    edges = g.edge_list.edges + 1
    for lo in range(0, edges.shape[0], batch):
        block = edges[lo : lo + batch].tolist()
        yield "".join(f"{u}\t{v}\t1\n{v}\t{u}\t1\n" for u, v in block)


def write_tsv(g: Graph, stream: IO) -> None:
    """Write every edge in both orientations, 1-based, weight 1."""
    _emit(stream, _tsv_chunks(g))


def _mmio_chunks(g: Graph, batch: int = 1 << 16) -> Iterator[str]:
    yield "%%MatrixMarket matrix coordinate pattern symmetric\n"
    yield f"{g.n} {g.n} {g.m}\n"
    edges = g.edge_list.edges + 1
    for lo in range(0, edges.shape[0], batch):
        block = edges[lo : lo + batch].tolist()
        yield "".join(f"{v} {u}\n" for u, v in block)


def write_mmio(g: Graph, stream: IO) -> None:
    """Write a ``coordinate pattern symmetric`` file holding the lower triangle."""
    _emit(stream, _mmio_chunks(g))


_READERS = {"tsv": parse_tsv, "mmio": parse_mmio}
_WRITERS = {"tsv": write_tsv, "mmio": write_mmio}


def guess_format(path: str | os.PathLike) -> str:
    suffix = os.path.splitext(os.fspath(path))[1].lower()
    return "mmio" if suffix in (".mtx", ".mm", ".mmio") else "tsv"


def read_raw(source, fmt: str) -> RawTriples:
    """Parse a path or an open stream in the given format."""
    if fmt not in _READERS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return _READERS[fmt](fh)
    return _READERS[fmt](source)


def read_graph(source, fmt: str, n: int | None = None) -> Graph:
    """Parse and normalise; ``n`` overrides the declared or inferred vertex count."""
    raw = read_raw(source, fmt)
    if n is not None:
        raw.n = n
    return normalize(raw)


def write_graph(g: Graph, sink, fmt: str) -> None:
    if fmt not in _WRITERS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            _WRITERS[fmt](g, fh)
    else:
        _WRITERS[fmt](g, sink)
