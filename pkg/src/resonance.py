"""
Plane-structure computations over explicitly listed faces.

No embedding is computed: face boundaries come from graph files (``f``
lines) or from the chain realizer, and are validated against the graph.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .config import Caps
from .errors import BadFaceSetError, NotElementaryError
from .graph import (
    Graph,
    Matching,
    edge_components,
    enumerate_perfect_matchings,
    is_alternating_cycle,
    is_elementary,
    require_perfect,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FaceSet:
    """Interior face boundaries (and optionally the exterior one) of a plane graph."""
    owner: Graph = field(repr=False)
    interior: tuple  # vertex cycles
    interior_edges: tuple  # sorted edge-id tuples, parallel to interior
    exterior: Optional[tuple] = None
    exterior_edges: Optional[tuple] = None

    @property
    def interior_count(self) -> int:
        return len(self.interior)

    @property
    def exterior_index(self) -> Optional[int]:
        """Index used for the exterior face in face-index sets."""
        return len(self.interior) if self.exterior is not None else None

    def boundary(self, index: int) -> tuple:
        if index == self.exterior_index:
            return self.exterior_edges
        return self.interior_edges[index]

    def vertices(self, index: int) -> tuple:
        if index == self.exterior_index:
            return self.exterior
        return self.interior[index]


@dataclass(frozen=True)
class ZGraph:
    nodes: tuple  # Matchings in canonical order
    links: tuple  # (i, j), i < j

    def degree(self, i: int) -> int:
        return sum(1 for a, b in self.links if i in (a, b))


def _cycle_edges(graph: Graph, cycle: Sequence[int]) -> tuple:
    cycle = [int(v) for v in cycle]
    if len(cycle) < 3 or len(set(cycle)) != len(cycle):
        raise BadFaceSetError(f"face {cycle} must list at least three distinct vertices")
    edges = []
    for i, u in enumerate(cycle):
        v = cycle[(i + 1) % len(cycle)]
        if not (0 <= u < graph.vertex_count and 0 <= v < graph.vertex_count) or not graph.has_edge(u, v):
            raise BadFaceSetError(f"face {cycle}: ({u}, {v}) is not an edge")
        edges.append(graph.edge_id(u, v))
    return tuple(sorted(edges))


def face_set_from_cycles(graph: Graph, interior: Iterable[Sequence[int]],
                         exterior: Optional[Sequence[int]] = None) -> FaceSet:
    """Validate vertex-cyclic face boundaries and store them as edge sets."""
    interior = [tuple(int(v) for v in face) for face in interior]
    interior_edges = []
    seen = set()
    for face in interior:
        edges = _cycle_edges(graph, face)
        if edges in seen:
            raise BadFaceSetError(f"duplicate face {list(face)}")
        seen.add(edges)
        interior_edges.append(edges)
    exterior_edges = None
    if exterior is not None:
        exterior = tuple(int(v) for v in exterior)
        exterior_edges = _cycle_edges(graph, exterior)
    return FaceSet(owner=graph, interior=tuple(interior), interior_edges=tuple(interior_edges),
                   exterior=exterior, exterior_edges=exterior_edges)


def resonant_faces(graph: Graph, faces: FaceSet, matching: Matching,
                   include_exterior: bool = False) -> tuple:
    """Indices of faces whose boundary is M-alternating (exterior = faces.exterior_index)."""
    require_perfect(graph, matching)
    if faces.owner != graph:
        raise BadFaceSetError("face set belongs to another graph")
    indices = list(range(faces.interior_count))
    if include_exterior and faces.exterior is not None:
        indices.append(faces.exterior_index)
    return tuple(i for i in indices if is_alternating_cycle(graph, matching, faces.boundary(i)))


def z_graph(graph: Graph, faces: FaceSet, caps: Caps = Caps()) -> ZGraph:
    """Z-transformation graph: matchings linked when they differ on one interior face."""
    nodes = enumerate_perfect_matchings(graph, caps.pm_cap)
    position = {m: i for i, m in enumerate(nodes)}
    links = set()
    for i, m in enumerate(nodes):
        for face_idx in resonant_faces(graph, faces, m):
            twisted = Matching(tuple(sorted(set(m.edge_ids) ^ set(faces.interior_edges[face_idx]))))
            j = position[twisted]
            if i != j:
                links.add((min(i, j), max(i, j)))
    logger.debug("Z-graph: %d nodes, %d links", len(nodes), len(links))
    return ZGraph(nodes=tuple(nodes), links=tuple(sorted(links)))


def z_connected(z: ZGraph) -> bool:
    n = len(z.nodes)
    if n <= 1:
        return True
    rows = np.array([a for a, _ in z.links], dtype=np.int64)
    cols = np.array([b for _, b in z.links], dtype=np.int64)
    matrix = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    count, _ = connected_components(matrix, directed=False)
    return count == 1


def af_step_bound(z: ZGraph, values: Sequence[int]) -> int:
    """Largest |af(M_i) - af(M_j)| over Z-links (0 without links)."""
    return max((abs(values[a] - values[b]) for a, b in z.links), default=0)


def common_path_length(graph: Graph, first: Iterable[int], second: Iterable[int]) -> int:
    """Edges in the longest common subpath of two cycles (cycle length if identical)."""
    first = set(getattr(first, 'edge_ids', first))
    second = set(getattr(second, 'edge_ids', second))
    common = first & second
    if not common:
        return 0
    if first == second:
        return len(first)
    return max(len(group) for group in edge_components(graph, sorted(common)))


def _require_elementary(graph: Graph) -> None:
    if not is_elementary(graph):
        raise NotElementaryError("face characterizations need an elementary bipartite graph")


def has_antiforcing_edge_characterization(graph: Graph, faces: FaceSet, caps: Caps = Caps(),
                                          include_exterior: bool = False) -> bool:
    """Some M has exactly two M-resonant faces sharing a path of length >= 3.

    Interior faces only unless include_exterior is set.
    """
    _require_elementary(graph)
    for m in enumerate_perfect_matchings(graph, caps.pm_cap):
        resonant = resonant_faces(graph, faces, m, include_exterior)
        if len(resonant) == 2:
            a, b = (faces.boundary(i) for i in resonant)
            if common_path_length(graph, a, b) >= 3:
                return True
    return False


def has_forcing_edge_characterization(graph: Graph, faces: FaceSet, caps: Caps = Caps()) -> bool:
    """Some M has exactly two M-resonant faces, exterior included, whose boundaries meet."""
    if faces.exterior is None:
        raise BadFaceSetError("forcing-edge characterization needs the exterior face")
    _require_elementary(graph)
    for m in enumerate_perfect_matchings(graph, caps.pm_cap):
        resonant = resonant_faces(graph, faces, m, include_exterior=True)
        if len(resonant) == 2:
            a, b = (set(faces.vertices(i)) for i in resonant)
            if a & b:
                return True
    return False
