"""
Graph text format.

    # comment
    graph N
    e U V
    f V1 V2 ... Vk
    # exterior
    f W1 W2 ... Wm

Blank lines and comments are ignored, except that an ``f`` line directly
preceded by a ``# exterior`` comment is the exterior face boundary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import AfkitError, GraphFormatError
from .graph import Graph, build_graph

EXTERIOR_MARK = 'exterior'


@dataclass
class GraphDocument:
    """A parsed graph file: the graph plus the face cycles it listed."""
    graph: Graph
    interior_faces: list = field(default_factory=list)  # vertex cycles
    exterior_face: Optional[list] = None

    @property
    def has_faces(self) -> bool:
        return bool(self.interior_faces)


_INT = re.compile(r'-?[0-9]+')


def _ints(tokens, line_no):
    """ASCII decimal integers only; other digit scripts are rejected."""
    if not all(_INT.fullmatch(t) for t in tokens):
        raise GraphFormatError(f"line {line_no}: expected integers, got {' '.join(tokens)!r}")
    return [int(t) for t in tokens]


def parse_graph_text(text: str) -> GraphDocument:
    """Parse the graph text format.

    Args:
        text: File contents.

    Returns:
        The graph with its interior faces and optional exterior face, as
        vertex cycles in file order.

    Raises:
        GraphFormatError: Malformed records, a missing header or a bad edge.
    """
    vertex_count = None
    edges = []
    interior, exterior = [], None
    exterior_pending = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith('#'):
            exterior_pending = line.lstrip('#').strip().lower() == EXTERIOR_MARK
            continue
        tokens = line.split()
        kind, args = tokens[0], tokens[1:]
        if kind == 'graph':
            if vertex_count is not None:
                raise GraphFormatError(f"line {line_no}: duplicate 'graph' header")
            values = _ints(args, line_no)
            if len(values) != 1 or values[0] < 0:
                raise GraphFormatError(f"line {line_no}: 'graph' takes one non-negative vertex count")
            vertex_count = values[0]
        elif kind == 'e':
            values = _ints(args, line_no)
            if len(values) != 2:
                raise GraphFormatError(f"line {line_no}: 'e' takes exactly two vertices")
            edges.append((values[0], values[1]))
        elif kind == 'f':
            values = _ints(args, line_no)
            if len(values) < 3:
                raise GraphFormatError(f"line {line_no}: a face needs at least three vertices")
            if exterior_pending:
                if exterior is not None:
                    raise GraphFormatError(f"line {line_no}: second exterior face")
                exterior = values
            else:
                interior.append(values)
        else:
            raise GraphFormatError(f"line {line_no}: unknown record {kind!r}")
        exterior_pending = False

    if vertex_count is None:
        raise GraphFormatError("missing 'graph N' header")
    try:
        graph = build_graph(vertex_count, edges)
    except AfkitError as e:
        raise GraphFormatError(str(e)) from e
    return GraphDocument(graph, interior, exterior)


def read_graph_file(path: str) -> GraphDocument:
    """Read and parse a graph file; I/O failures become GraphFormatError."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise GraphFormatError(f"cannot read {path}: {e}") from e
    return parse_graph_text(text)


def format_graph_text(graph: Graph, interior_faces: Sequence[Sequence[int]] = (),
                      exterior_face: Optional[Sequence[int]] = None,
                      comments: Sequence[str] = ()) -> str:
    """Inverse of parse_graph_text. Edges keep their ids by order."""
    lines = [f"# {c}" for c in comments]
    lines.append(f"graph {graph.vertex_count}")
    lines.extend(f"e {u} {v}" for u, v in graph.edges)
    lines.extend("f " + " ".join(str(v) for v in face) for face in interior_faces)
    if exterior_face is not None:
        lines.append(f"# {EXTERIOR_MARK}")
        lines.append("f " + " ".join(str(v) for v in exterior_face))
    return "\n".join(lines) + "\n"


def write_graph_file(path: str, graph: Graph, interior_faces: Sequence[Sequence[int]] = (),
                     exterior_face: Optional[Sequence[int]] = None,
                     comments: Sequence[str] = ()) -> None:
    """Write format_graph_text output to `path`. OSError propagates."""
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_graph_text(graph, interior_faces, exterior_face, comments))
