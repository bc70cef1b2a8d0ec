"""Instance ingestion (Matrix Market, plain edge lists) and CSV output."""

from __future__ import annotations

import csv
import re
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .graph import Graph, build_graph

_MM_FIELDS = ("real", "integer", "pattern")


def read_matrix_market(path: str | Path) -> Graph:
    """Read a symmetric MatrixMarket coordinate file as a weighted graph.

    One undirected edge per off-diagonal stored entry, weighted by the
    absolute value of the entry (1.0 for pattern files). Diagonal entries
    are dropped, duplicates collapse to the largest absolute value, and
    explicit zero entries are discarded: a zero-weight edge can never beat a
    positive one and would only pollute quality ratios. Indices are 1-based
    in the file and 0-based in the result.
    """
    path = Path(path)
    with path.open("r", encoding="ascii", errors="replace") as fh:
        header = fh.readline()
        tokens = header.strip().split()
        if len(tokens) != 5 or tokens[0] != "%%MatrixMarket":
            raise ValueError(f"{path}: malformed MatrixMarket banner: {header.strip()!r}")
        _, obj, fmt, field, symmetry = (t.lower() for t in tokens)
        if obj != "matrix" or fmt != "coordinate":
            raise ValueError(f"{path}: expected 'matrix coordinate', got '{obj} {fmt}'")
        if field not in _MM_FIELDS:
            raise ValueError(f"{path}: unsupported field {field!r} (want real/integer/pattern)")
        if symmetry != "symmetric":
            raise ValueError(f"{path}: symmetry must be 'symmetric', got {symmetry!r}")

        size_line = None
        lineno = 1
        for line in fh:
            lineno += 1
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            size_line = s
            break
        if size_line is None:
            raise ValueError(f"{path}: missing size line")
        parts = size_line.split()
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: malformed size line {size_line!r}")
        try:
            rows, cols, nnz = (int(p) for p in parts)
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: malformed size line {size_line!r}") from exc
        if rows != cols:
            raise ValueError(f"{path}: symmetric matrix must be square, got {rows}x{cols}")

        want_value = field != "pattern"
        best: dict[tuple[int, int], float] = {}
        seen = 0
        for line in fh:
            lineno += 1
            s = line.strip()
            if not s or s.startswith("%"):
                continue
            parts = s.split()
            if len(parts) != (3 if want_value else 2):
                raise ValueError(f"{path}:{lineno}: malformed entry {s!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                value = float(parts[2]) if want_value else 1.0
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: malformed entry {s!r}") from exc
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise ValueError(
                    f"{path}:{lineno}: entry ({i},{j}) out of bounds for {rows}x{cols}"
                )
            seen += 1
            if i == j:
                continue
            w = abs(value)
            if w == 0.0:
                continue
            pair = (i - 1, j - 1) if i < j else (j - 1, i - 1)
            if w > best.get(pair, -1.0):
                best[pair] = w
        if seen != nnz:
            raise ValueError(f"{path}: header declares {nnz} entries, found {seen}")
    return build_graph(((u, v, w) for (u, v), w in best.items()), num_vertices=rows)


_NLINE = re.compile(r"#\s*n\s*=\s*(\d+)")


def read_edge_list(path: str | Path) -> Graph:
    """Read a whitespace-separated "u v w" edge list.

    Lines starting with '#' are comments; a "# n=<N>" comment fixes the
    vertex count (otherwise it is inferred as max id + 1, 0 for an empty
    file). Parse failures report the offending line number.
    """
    path = Path(path)
    n_override: int | None = None
    edges: list[tuple[int, int, float]] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                m = _NLINE.search(s)
                if m:
                    n_override = int(m.group(1))
                continue
            parts = s.split()
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'u v w', got {s!r}")
            try:
                edges.append((int(parts[0]), int(parts[1]), float(parts[2])))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: cannot parse {s!r}") from exc
    return build_graph(edges, num_vertices=n_override)


def write_edge_list(g: Graph, path: str | Path) -> None:
    """Write the graph in the "u v w" text format with a "# n=<N>" header."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"# n={g.num_vertices}\n")
        for u, v, w in zip(g.edge_u.tolist(), g.edge_v.tolist(), g.edge_weight.tolist()):
            fh.write(f"{u} {v} {w!r}\n")


def read_graph(path: str | Path) -> Graph:
    """Dispatch on extension: '.mtx' is MatrixMarket, anything else edge list."""
    p = Path(path)
    if p.suffix.lower() == ".mtx":
        return read_matrix_market(p)
    return read_edge_list(p)


def write_csv(
    records: Iterable[Mapping[str, object]],
    path: str | Path,
    columns: Sequence[str],
    append: bool = False,
) -> int:
    """Write mappings as CSV rows under a fixed column schema.

    In append mode the header is only written when the file is new or
    empty, so repeated runs can accumulate rows safely.
    """
    path = Path(path)
    write_header = True
    if append and path.exists() and path.stat().st_size > 0:
        write_header = False
    mode = "a" if append else "w"
    count = 0
    with path.open(mode, encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore")
        if write_header:
            writer.writeheader()
        for rec in records:
            writer.writerow(rec)
            count += 1
    return count
