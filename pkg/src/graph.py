"""
Graph core for afkit.

Canonical simple graphs, perfect matchings, alternating cycles and the
structural classifiers (bipartiteness, elementarity, normal components).

Edge identity is the position of an edge in the graph's sorted edge list;
every higher module reports edge sets in that indexing. Vertex sets inside
the matching search are Python ints used as bitsets.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    BadVertexError,
    CapExceededError,
    DisconnectedGraphError,
    DuplicateEdgeError,
    LoopEdgeError,
    NoPerfectMatchingError,
    NotAlternatingError,
    NotPerfectMatchingError,
)

logger = logging.getLogger(__name__)

BLACK = 0
WHITE = 1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with canonically sorted edges (u < v)."""
    vertex_count: int
    edges: tuple
    adjacency: tuple = field(init=False, repr=False, compare=False)
    _edge_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        neighbors = [[] for _ in range(self.vertex_count)]
        index = {}
        for eid, (u, v) in enumerate(self.edges):
            neighbors[u].append(v)
            neighbors[v].append(u)
            index[(u, v)] = eid
        object.__setattr__(self, 'adjacency', tuple(tuple(sorted(n)) for n in neighbors))
        object.__setattr__(self, '_edge_index', index)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_index

    def edge_id(self, u: int, v: int) -> int:
        """Edge id of {u, v}; KeyError if absent."""
        return self._edge_index[(min(u, v), max(u, v))]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertices_of(self, edge_ids: Iterable[int]) -> set:
        verts = set()
        for eid in edge_ids:
            verts.update(self.edges[eid])
        return verts

    def subgraph(self, edge_ids: Iterable[int]) -> tuple[Graph, tuple, tuple]:
        """Edge-induced subgraph.

        Returns:
            (subgraph, vertex_map, edge_map) where vertex_map[i] / edge_map[i]
            give the parent vertex / edge id of subgraph vertex / edge i.
        """
        edge_map = tuple(sorted(set(edge_ids)))
        vertex_map = tuple(sorted(self.vertices_of(edge_map)))
        relabel = {v: i for i, v in enumerate(vertex_map)}
        # relabel is monotone, so sorted parent ids stay sorted
        sub_edges = tuple((relabel[self.edges[e][0]], relabel[self.edges[e][1]]) for e in edge_map)
        return Graph(len(vertex_map), sub_edges), vertex_map, edge_map

    def without_vertices(self, removed: Iterable[int]) -> tuple[Graph, tuple, tuple]:
        """Vertex-deleted subgraph G - removed, with maps back to the parent."""
        removed = set(removed)
        vertex_map = tuple(v for v in range(self.vertex_count) if v not in removed)
        relabel = {v: i for i, v in enumerate(vertex_map)}
        edge_map = tuple(eid for eid, (u, v) in enumerate(self.edges)
                         if u not in removed and v not in removed)
        sub_edges = tuple((relabel[self.edges[e][0]], relabel[self.edges[e][1]]) for e in edge_map)
        return Graph(len(vertex_map), sub_edges), vertex_map, edge_map

    def adjacency_matrix(self, edge_ids: Optional[Iterable[int]] = None) -> csr_matrix:
        """Sparse symmetric 0/1 adjacency matrix, optionally over a subset of edges."""
        ids = range(self.edge_count) if edge_ids is None else list(edge_ids)
        rows = np.array([self.edges[e][0] for e in ids], dtype=np.int64)
        cols = np.array([self.edges[e][1] for e in ids], dtype=np.int64)
        data = np.ones(len(rows), dtype=np.int8)
        n = self.vertex_count
        return csr_matrix((data, (rows, cols)), shape=(n, n))


@dataclass(frozen=True, order=True)
class Matching:
    """A matching as a sorted tuple of edge ids; ordering is lexicographic."""
    edge_ids: tuple

    def __iter__(self):
        return iter(self.edge_ids)

    def __len__(self):
        return len(self.edge_ids)

    def __contains__(self, eid):
        return eid in self.edge_ids


@dataclass(frozen=True, order=True)
class AltCycle:
    """A cycle given as its sorted edge-id set."""
    edge_ids: tuple

    @property
    def length(self) -> int:
        return len(self.edge_ids)


@dataclass(frozen=True)
class ComponentReport:
    fixed_single: tuple
    fixed_double: tuple
    elementary_components: tuple  # vertex sets, ordered by lowest vertex
    component_edges: tuple  # edge-id sets, parallel to elementary_components


# ---------- Construction and simple structure ----------

def build_graph(vertex_count: int, edge_pairs: Iterable[Sequence[int]]) -> Graph:
    """Build a canonical Graph, rejecting loops, duplicates and bad vertices."""
    if vertex_count < 0:
        raise BadVertexError(vertex_count, vertex_count)
    seen = set()
    for pair in edge_pairs:
        u, v = int(pair[0]), int(pair[1])
        for w in (u, v):
            if w < 0 or w >= vertex_count:
                raise BadVertexError(w, vertex_count)
        if u == v:
            raise LoopEdgeError(u)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(*key)
        seen.add(key)
    return Graph(vertex_count, tuple(sorted(seen)))


def components(graph: Graph, edge_ids: Optional[Iterable[int]] = None) -> list[tuple]:
    """Connected components as sorted vertex tuples, ordered by lowest vertex."""
    if graph.vertex_count == 0:
        return []
    _, labels = connected_components(graph.adjacency_matrix(edge_ids), directed=False)
    groups = {}
    for v, label in enumerate(labels):
        groups.setdefault(int(label), []).append(v)
    return sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])


def is_connected(graph: Graph) -> bool:
    return graph.vertex_count > 0 and len(components(graph)) == 1


def bipartition(graph: Graph) -> Optional[tuple]:
    """Proper 2-coloring (BLACK/WHITE per vertex) or None if an odd cycle exists.

    BFS from the lowest uncolored vertex of each component, which is colored BLACK.
    """
    colors = [None] * graph.vertex_count
    for start in range(graph.vertex_count):
        if colors[start] is not None:
            continue
        colors[start] = BLACK
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in graph.adjacency[u]:
                if colors[w] is None:
                    colors[w] = 1 - colors[u]
                    queue.append(w)
                elif colors[w] == colors[u]:
                    return None
    return tuple(colors)


def cyclomatic_number(graph: Graph) -> int:
    """r(G) = |E| - |V| + 1 for a connected graph."""
    if not is_connected(graph):
        raise DisconnectedGraphError("cyclomatic number is defined for connected graphs only")
    return graph.edge_count - graph.vertex_count + 1


# ---------- Perfect matching search ----------

def _masks(graph: Graph, without_edges=frozenset()) -> list:
    masks = [0] * graph.vertex_count
    for eid, (u, v) in enumerate(graph.edges):
        if eid in without_edges:
            continue
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _vertex_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _pick_vertex(masks: list, free: int, most_constrained: bool) -> Optional[int]:
    """Next vertex to match, or None when some free vertex has no free neighbour."""
    best = None
    best_degree = 0
    rest = free
    while rest:
        low = rest & -rest
        u = low.bit_length() - 1
        rest ^= low
        degree = (masks[u] & free).bit_count()
        if degree == 0:
            return None
        if best is None or (most_constrained and degree < best_degree):
            best, best_degree = u, degree
    return best


def _iter_matchings(masks: list, free: int, most_constrained: bool = False) -> Iterator[list]:
    """Yield perfect matchings of the vertex set `free` as lists of (u, v) pairs."""
    if not free:
        yield []
        return
    if free.bit_count() % 2:
        return
    v = _pick_vertex(masks, free, most_constrained)
    if v is None:
        return
    options = masks[v] & free
    remaining = free & ~(1 << v)
    while options:
        low = options & -options
        options ^= low
        w = low.bit_length() - 1
        for rest in _iter_matchings(masks, remaining & ~low, most_constrained):
            rest.append((v, w) if v < w else (w, v))
            yield rest


def _pairs_to_ids(graph: Graph, pairs: Iterable[tuple]) -> tuple:
    return tuple(sorted(graph.edge_id(u, v) for u, v in pairs))


def matchings_upto(graph: Graph, limit: int, without_edges: Iterable[int] = (),
                   without_vertices: Iterable[int] = ()) -> list[Matching]:
    """Up to `limit` perfect matchings of G - without_edges - without_vertices.

    Edge ids refer to the full graph. Search order favours forced vertices, so
    the returned matchings are not in canonical order.
    """
    masks = _masks(graph, frozenset(without_edges))
    free = ((1 << graph.vertex_count) - 1) & ~_vertex_mask(without_vertices)
    found = []
    for pairs in _iter_matchings(masks, free, most_constrained=True):
        found.append(Matching(_pairs_to_ids(graph, pairs)))
        if len(found) >= limit:
            break
    return found


def count_perfect_matchings_upto(graph: Graph, limit: int, without_edges: Iterable[int] = (),
                                 without_vertices: Iterable[int] = ()) -> int:
    """min(limit, number of perfect matchings), stopping as soon as `limit` is reached."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    return len(matchings_upto(graph, limit, without_edges, without_vertices))


def has_perfect_matching(graph: Graph) -> bool:
    return count_perfect_matchings_upto(graph, 1) == 1


def enumerate_perfect_matchings(graph: Graph, cap: int) -> list[Matching]:
    """All perfect matchings in canonical (lexicographic edge-id) order.

    Each connected component is enumerated separately (branching on its
    lowest-index uncovered vertex) and the results are combined.

    Raises:
        CapExceededError: more than `cap` perfect matchings exist.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if graph.vertex_count % 2:
        return []
    masks = _masks(graph)
    per_component = []
    for comp in components(graph):
        if len(comp) % 2:
            return []
        found = []
        for pairs in _iter_matchings(masks, _vertex_mask(comp)):
            found.append(_pairs_to_ids(graph, pairs))
            if len(found) > cap:
                raise CapExceededError(cap, "perfect matchings")
        if not found:
            return []
        per_component.append(found)
    if math.prod(len(f) for f in per_component) > cap:
        raise CapExceededError(cap, "perfect matchings")
    result = [Matching(tuple(sorted(itertools.chain.from_iterable(combo))))
              for combo in itertools.product(*per_component)]
    result.sort()
    logger.debug("enumerated %d perfect matchings on %d vertices", len(result), graph.vertex_count)
    return result


def is_perfect_matching(graph: Graph, edge_ids: Iterable[int]) -> bool:
    covered = set()
    count = 0
    for eid in edge_ids:
        if not 0 <= eid < graph.edge_count:
            return False
        u, v = graph.edges[eid]
        if u in covered or v in covered:
            return False
        covered.update((u, v))
        count += 1
    return count * 2 == graph.vertex_count


def require_perfect(graph: Graph, matching: Matching) -> None:
    if not is_perfect_matching(graph, matching.edge_ids):
        raise NotPerfectMatchingError(f"{list(matching.edge_ids)} is not a perfect matching")


def require_matchable(graph: Graph) -> None:
    if not has_perfect_matching(graph):
        raise NoPerfectMatchingError("graph has no perfect matching")


def restrict_matching(matching: Matching, edge_map: Sequence[int]) -> Matching:
    """Restriction of a parent matching to a subgraph given by its edge map."""
    chosen = set(matching.edge_ids)
    return Matching(tuple(i for i, parent in enumerate(edge_map) if parent in chosen))


# ---------- Allowed edges and normal components ----------

def is_allowed_edge(graph: Graph, eid: int) -> bool:
    """True iff edge `eid` lies in some perfect matching."""
    require_matchable(graph)
    u, v = graph.edges[eid]
    return count_perfect_matchings_upto(graph, 1, without_vertices=(u, v)) == 1


def normal_components(graph: Graph) -> ComponentReport:
    """Split E(G) into fixed single, fixed double and normal-component edges."""
    require_matchable(graph)
    fixed_single, fixed_double, free_edges = [], [], []
    for eid in range(graph.edge_count):
        u, v = graph.edges[eid]
        if count_perfect_matchings_upto(graph, 1, without_vertices=(u, v)) == 0:
            fixed_single.append(eid)
        elif count_perfect_matchings_upto(graph, 1, without_edges=(eid,)) == 0:
            fixed_double.append(eid)
        else:
            free_edges.append(eid)

    touched = graph.vertices_of(free_edges)
    groups = [c for c in components(graph, free_edges) if c[0] in touched]
    where = {}
    for idx, comp in enumerate(groups):
        for v in comp:
            where[v] = idx
    edge_groups = [[] for _ in groups]
    for eid in free_edges:
        edge_groups[where[graph.edges[eid][0]]].append(eid)
    return ComponentReport(
        fixed_single=tuple(fixed_single),
        fixed_double=tuple(fixed_double),
        elementary_components=tuple(groups),
        component_edges=tuple(tuple(g) for g in edge_groups),
    )


def is_elementary(graph: Graph) -> bool:
    """Connected, bipartite, matchable, and every edge allowed."""
    if not is_connected(graph) or bipartition(graph) is None:
        return False
    if not has_perfect_matching(graph):
        return False
    return all(is_allowed_edge(graph, eid) for eid in range(graph.edge_count))


# ---------- Alternating cycles ----------

def mate_array(graph: Graph, matching: Matching) -> list:
    mate = [-1] * graph.vertex_count
    for eid in matching.edge_ids:
        u, v = graph.edges[eid]
        mate[u], mate[v] = v, u
    return mate


def enumerate_alternating_cycles(graph: Graph, matching: Matching, cap: int) -> list[AltCycle]:
    """All M-alternating cycles, deduplicated and in canonical order.

    Each cycle is grown from its lowest-id M-edge (a, b), a < b, leaving along
    a -> b and closing with a non-matching edge back into a, which fixes one
    traversal per cycle.

    Raises:
        CapExceededError: more than `cap` alternating cycles exist.
    """
    require_perfect(graph, matching)
    mate = mate_array(graph, matching)
    in_matching = set(matching.edge_ids)
    seen = set()

    def extend(start, e0, x, on_path, path_edges):
        for y in graph.adjacency[x]:
            exy = graph.edge_id(x, y)
            if exy in in_matching:
                continue
            if y == start:
                key = tuple(sorted(path_edges + [exy]))
                if key not in seen:
                    seen.add(key)
                    if len(seen) > cap:
                        raise CapExceededError(cap, "alternating cycles")
                continue
            if on_path >> y & 1:
                continue
            z = mate[y]
            eyz = graph.edge_id(y, z)
            if eyz < e0:
                continue
            path_edges.append(exy)
            path_edges.append(eyz)
            extend(start, e0, z, on_path | (1 << y) | (1 << z), path_edges)
            path_edges.pop()
            path_edges.pop()

    for e0 in matching.edge_ids:
        a, b = graph.edges[e0]
        extend(a, e0, b, (1 << a) | (1 << b), [e0])

    cycles = sorted(AltCycle(key) for key in seen)
    logger.debug("found %d alternating cycles", len(cycles))
    return cycles


def cycle_vertex_order(graph: Graph, edge_ids: Iterable[int]) -> Optional[list]:
    """Vertices of a single cycle in traversal order, or None if the edges are not one cycle."""
    edge_ids = list(edge_ids)
    if len(edge_ids) < 3 or len(set(edge_ids)) != len(edge_ids):
        return None
    incident = {}
    for eid in edge_ids:
        for w in graph.edges[eid]:
            incident.setdefault(w, []).append(eid)
    if any(len(es) != 2 for es in incident.values()):
        return None
    start = min(incident)
    order = [start]
    prev_edge = incident[start][0]
    current = graph.edges[prev_edge][0] if graph.edges[prev_edge][1] == start else graph.edges[prev_edge][1]
    while current != start:
        order.append(current)
        a, b = incident[current]
        prev_edge = b if a == prev_edge else a
        u, v = graph.edges[prev_edge]
        current = v if u == current else u
    if len(order) != len(incident):
        return None
    return order


def is_alternating_cycle(graph: Graph, matching: Matching, edge_ids: Iterable[int]) -> bool:
    edge_ids = list(edge_ids)
    if cycle_vertex_order(graph, edge_ids) is None:
        return False
    in_matching = set(matching.edge_ids)
    matched_on_cycle = [eid for eid in edge_ids if eid in in_matching]
    if 2 * len(matched_on_cycle) != len(edge_ids):
        return False
    return len(graph.vertices_of(matched_on_cycle)) == len(edge_ids)


def symmetric_difference(graph: Graph, matching: Matching, cycle: AltCycle) -> Matching:
    """M delta C for an M-alternating cycle C."""
    if not is_alternating_cycle(graph, matching, cycle.edge_ids):
        raise NotAlternatingError(f"cycle {list(cycle.edge_ids)} is not alternating")
    return Matching(tuple(sorted(set(matching.edge_ids) ^ set(cycle.edge_ids))))


def difference_cycles(graph: Graph, first: Matching, second: Matching) -> list[AltCycle]:
    """The cycles of first delta second (both perfect), shortest first."""
    diff = sorted(set(first.edge_ids) ^ set(second.edge_ids))
    if not diff:
        return []
    cycles = [AltCycle(tuple(c)) for c in edge_components(graph, diff)]
    cycles.sort(key=lambda c: (c.length, c.edge_ids))
    return cycles


def edge_components(graph: Graph, edge_ids: list) -> list[list]:
    """Edge sets of the connected pieces spanned by `edge_ids`, ordered by lowest edge id."""
    edge_ids = sorted(edge_ids)
    if not edge_ids:
        return []
    label = {v: i for i, comp in enumerate(components(graph, edge_ids)) for v in comp}
    groups = {}
    for eid in edge_ids:
        groups.setdefault(label[graph.edges[eid][0]], []).append(eid)
    return sorted(groups.values(), key=lambda g: g[0])
