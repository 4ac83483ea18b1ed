"""Readers for edge-list and GML network files, writers for edge lists and CSV tables.

Edge-list grammar (one record per line, CR/LF insensitive)::

    line      := blank | comment | directive | edge
    comment   := '#' anything
    directive := '#@vertex' WS label
    edge      := label WS label [WS weight]

Labels are whitespace-free tokens; vertices are numbered in order of first
appearance, where ``#@vertex`` lines count as appearances. The writer only
emits directives when first-appearance order of the edges would not
reproduce the vertex numbering (e.g. isolated vertices).

GML subset: a ``graph [ ... ]`` block with ``node [ id N label "S" ]`` and
``edge [ source N target N value X ]`` records. Node ids become vertex
labels. Any other key is skipped, including nested lists.
"""

from __future__ import annotations

import io
import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

from .graph import Graph, GraphError


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


Source = str | bytes | IO[str] | IO[bytes]


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    return source


def _check_label(label: str, line: int | None) -> None:
    if "," in label:
        raise ParseError(f"label {label!r} contains a comma", line)


def parse_edge_list(source: Source) -> Graph:
    text = _read_text(source)
    index: dict[str, int] = {}
    labels: list[str] = []
    edges: dict[tuple[int, int], float] = {}

    def vid(label: str, lineno: int) -> int:
        if label not in index:
            _check_label(label, lineno)
            index[label] = len(labels)
            labels.append(label)
        return index[label]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#@vertex"):
            parts = line.split()
            if len(parts) != 2:
                raise ParseError("#@vertex takes exactly one label", lineno)
            vid(parts[1], lineno)
            continue
        if line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 2 or 3 tokens, got {len(parts)}", lineno)
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"non-numeric weight {parts[2]!r}", lineno) from None
            if not (w > 0 and math.isfinite(w)):
                raise ParseError(f"weight must be finite and > 0, got {parts[2]}", lineno)
        u, v = vid(parts[0], lineno), vid(parts[1], lineno)
        if u == v:
            raise ParseError(f"self-loop on {parts[0]!r}", lineno)
        edges[(u, v) if u < v else (v, u)] = w

    g = Graph(len(labels), labels)
    for (u, v), w in edges.items():
        g.add_edge(u, v, w)
    return g


def write_edge_list(g: Graph, sink: IO[str]) -> None:
    edges = g.edges()
    seen: list[int] = []
    marked = [False] * g.vertex_count
    for u, v in edges:
        for x in (u, v):
            if not marked[x]:
                marked[x] = True
                seen.append(x)
    if seen != list(range(g.vertex_count)):
        for label in g.labels:
            sink.write(f"#@vertex {label}\n")
    weighted = g.is_weighted
    for (u, v), w in zip(edges, g.edge_weights()):
        if weighted:
            sink.write(f"{g.labels[u]} {g.labels[v]} {w!r}\n")
        else:
            sink.write(f"{g.labels[u]} {g.labels[v]}\n")


_GML_TOKEN = re.compile(r'\s*(?:(\[)|(\])|"([^"]*)"|([^\s\[\]"]+))')


def _gml_tokens(text: str):
    pos = 0
    n = len(text)
    while pos < n:
        m = _GML_TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ParseError(f"unreadable GML near offset {pos}")
            return
        pos = m.end()
        if m.group(1):
            yield "[", None
        elif m.group(2):
            yield "]", None
        elif m.group(3) is not None:
            yield "str", m.group(3)
        elif m.group(4) is not None:
            yield "atom", m.group(4)


def _parse_gml_list(tokens, depth: int) -> list[tuple[str, object]]:
    items: list[tuple[str, object]] = []
    for kind, val in tokens:
        if kind == "]":
            if depth == 0:
                raise ParseError("unbalanced ']' in GML")
            return items
        if kind != "atom":
            raise ParseError(f"expected a key, got {kind} {val!r}")
        key = val
        try:
            vkind, vval = next(tokens)
        except StopIteration:
            raise ParseError(f"key {key!r} has no value") from None
        if vkind == "[":
            items.append((key, _parse_gml_list(tokens, depth + 1)))
        elif vkind == "]":
            raise ParseError(f"key {key!r} has no value")
        else:
            items.append((key, vval))
    if depth != 0:
        raise ParseError("unterminated '[' in GML")
    return items


def _gml_number(value: object, what: str) -> float:
    try:
        return float(value)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise ParseError(f"{what} is not numeric: {value!r}") from None


def parse_gml(source: Source) -> Graph:
    text = _read_text(source)
    top = _parse_gml_list(_gml_tokens(text), 0)
    graphs = [v for k, v in top if k == "graph" and isinstance(v, list)]
    if not graphs:
        raise ParseError("no 'graph [ ... ]' block found")
    body = graphs[0]

    ids: dict[str, int] = {}
    labels: list[str] = []
    raw_edges: list[tuple[str, str, float]] = []
    for key, val in body:
        if key == "directed" and str(val).strip() == "1":
            warnings.warn("GML declares directed 1; edges are stored undirected", stacklevel=2)
        elif key == "node" and isinstance(val, list):
            attrs = dict((k, v) for k, v in val if not isinstance(v, list))
            if "id" not in attrs:
                raise ParseError("node without id")
            nid = str(attrs["id"])
            if nid in ids:
                raise ParseError(f"duplicate node id {nid}")
            # node ids, not the free-text ``label`` attribute, become vertex labels
            ids[nid] = len(labels)
            labels.append(nid)
        elif key == "edge" and isinstance(val, list):
            attrs = dict((k, v) for k, v in val if not isinstance(v, list))
            if "source" not in attrs or "target" not in attrs:
                raise ParseError("edge without source/target")
            w = _gml_number(attrs["value"], "edge value") if "value" in attrs else 1.0
            raw_edges.append((str(attrs["source"]), str(attrs["target"]), w))

    g = Graph(len(labels), labels)
    for s, t, w in raw_edges:
        if s not in ids or t not in ids:
            raise ParseError(f"edge {s}-{t} references an undeclared node")
        if s == t:
            continue
        try:
            g.add_edge(ids[s], ids[t], w)
        except GraphError as exc:
            raise ParseError(str(exc)) from None
    return g


@dataclass(frozen=True)
class NetworkFile:
    path: Path
    format: str
    declared_weighted: bool = False

    @classmethod
    def from_path(cls, path: str | Path, fmt: str | None = None) -> NetworkFile:
        path = Path(path)
        if fmt is None:
            fmt = "gml" if path.suffix.lower() == ".gml" else "edge-list"
        if fmt not in ("gml", "edge-list"):
            raise ValueError(f"unknown network format {fmt!r}")
        return cls(path, fmt)

    def load(self) -> Graph:
        with open(self.path, "rb") as fh:
            data = fh.read()
        return parse_gml(data) if self.format == "gml" else parse_edge_list(data)


def load_graph(path: str | Path, fmt: str | None = None) -> Graph:
    return NetworkFile.from_path(path, fmt).load()


def save_edge_list(g: Graph, path: str | Path) -> None:
    with open(path, "w", newline="\n") as fh:
        write_edge_list(g, fh)


def write_centrality_csv(
    g: Graph, columns: Sequence[tuple[str, Sequence[float]]], sink: IO[str]
) -> None:
    """Write ``vertex,<name>...`` rows in vertex order, scores to 10 significant digits."""
    for name, scores in columns:
        if len(scores) != g.vertex_count:
            raise ValueError(
                f"column {name!r} has {len(scores)} entries, graph has {g.vertex_count}"
            )
        if not all(math.isfinite(x) for x in scores):
            raise ValueError(f"column {name!r} contains non-finite scores")
    for label in g.labels:
        _check_label(label, None)
    sink.write(",".join(["vertex", *(name for name, _ in columns)]) + "\n")
    for v, label in enumerate(g.labels):
        cells = [label, *(f"{float(scores[v]):.10g}" for _, scores in columns)]
        sink.write(",".join(cells) + "\n")


def write_edge_scores_csv(g: Graph, scores: dict[tuple[int, int], float], sink: IO[str]) -> None:
    sink.write("u,v,psi_bar\n")
    for u, v in g.edges():
        sink.write(f"{g.labels[u]},{g.labels[v]},{scores[(u, v)]:.10g}\n")


def read_centrality_csv(source: Source) -> tuple[list[str], dict[str, list[float]]]:
    """Inverse of :func:`write_centrality_csv`: ``(labels, {column: scores})``."""
    lines = [ln for ln in _read_text(source).splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty CSV")
    header = lines[0].split(",")
    if header[0] != "vertex":
        raise ParseError("first CSV column must be 'vertex'", 1)
    names = header[1:]
    labels: list[str] = []
    cols: dict[str, list[float]] = {n: [] for n in names}
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        labels.append(cells[0])
        for name, cell in zip(names, cells[1:]):
            try:
                cols[name].append(float(cell))
            except ValueError:
                raise ParseError(f"non-numeric score {cell!r}", lineno) from None
    return labels, cols


def to_text(writer, *args) -> str:
    """Run a ``write_*`` function into a string."""
    buf = io.StringIO()
    writer(*args, buf)
    return buf.getvalue()
