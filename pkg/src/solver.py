"""
Exact anti-forcing computations.

af(G, M) is found as a minimum set of non-matching edges hitting every
M-alternating cycle. Feasibility of a candidate set S is always decided by
perfect-matching counting on G - S (M must be the only one left), so the
answer never depends on the alternating-cycle cap; enumerated cycles are
used only for lower bounds and for c'(M).
"""

from __future__ import annotations

import functools
import logging
import multiprocessing
from dataclasses import dataclass
from typing import Iterable, Optional

import psutil

from .config import Caps
from .errors import CapExceededError, NotElementaryError, VerificationError
from .graph import (
    AltCycle,
    Graph,
    Matching,
    count_perfect_matchings_upto,
    cyclomatic_number,
    difference_cycles,
    enumerate_alternating_cycles,
    enumerate_perfect_matchings,
    is_elementary,
    matchings_upto,
    normal_components,
    require_matchable,
    require_perfect,
    restrict_matching,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AfResult:
    value: int
    witness: tuple  # anti-forcing set of minimum size, edge ids outside M
    nodes: int = 0  # branch-and-bound nodes explored


@dataclass(frozen=True)
class CompatibleSet:
    cycles: tuple

    @property
    def size(self) -> int:
        return len(self.cycles)


@dataclass(frozen=True)
class SpectrumResult:
    values: tuple
    per_matching: Optional[tuple] = None  # ((Matching, af), ...) in canonical order


@dataclass(frozen=True)
class EarDecomposition:
    """Base edge plus ears in construction order, each a vertex path u_i ... v_i."""
    base_edge: int
    ears: tuple

    @property
    def ear_count(self) -> int:
        return len(self.ears)


# ---------- af(G, M) ----------

def is_anti_forcing_set(graph: Graph, matching: Matching, edge_ids: Iterable[int]) -> bool:
    """True iff S avoids M and M is the unique perfect matching of G - S."""
    removed = set(edge_ids)
    if removed & set(matching.edge_ids):
        return False
    left = matchings_upto(graph, 2, without_edges=removed)
    return len(left) == 1 and left[0] == matching


def is_forcing_set(graph: Graph, matching: Matching, edge_ids: Iterable[int]) -> bool:
    """True iff S is inside M and M is the only perfect matching containing S."""
    chosen = set(edge_ids)
    if not chosen <= set(matching.edge_ids):
        return False
    covered = {v for e in chosen for v in graph.edges[e]}
    return count_perfect_matchings_upto(graph, 2, without_vertices=covered) == 1


def _cycle_pool(graph: Graph, matching: Matching, caps: Caps) -> Optional[list]:
    """Non-matching edge sets of all M-alternating cycles, smallest first, or None past the cap."""
    try:
        cycles = enumerate_alternating_cycles(graph, matching, caps.cycle_cap)
    except CapExceededError:
        logger.warning("alternating-cycle cap %d reached; searching without packing bounds", caps.cycle_cap)
        return None
    in_matching = set(matching.edge_ids)
    pool = [frozenset(e for e in c.edge_ids if e not in in_matching) for c in cycles]
    pool.sort(key=lambda s: (len(s), sorted(s)))
    return pool


def max_compatible_size_bound(pool: list, removed: frozenset = frozenset()) -> int:
    """Greedy count of cycles with pairwise disjoint non-matching edges, all missing `removed`."""
    used = set()
    count = 0
    for edges in pool:
        if edges & removed or edges & used:
            continue
        used |= edges
        count += 1
    return count


def shortest_surviving_cycle(graph: Graph, matching: Matching, pool: Optional[list],
                             removed: Iterable[int]) -> Optional[list]:
    """Non-M edges of a shortest M-alternating cycle of G - removed, or None if M is unique there.

    Uniqueness is decided by matching search. The cycle comes from the
    shortest-first `pool`; without a pool (cap reached) the shortest
    component of M xor M' for the first other matching M' is used.
    """
    removed = frozenset(removed)
    other = next((m for m in matchings_upto(graph, 2, without_edges=removed) if m != matching), None)
    if other is None:
        return None
    if pool is not None:
        for edges in pool:
            if not edges & removed:
                return sorted(edges)
    in_matching = set(matching.edge_ids)
    cycle = difference_cycles(graph, matching, other)[0]
    return [e for e in cycle.edge_ids if e not in in_matching]


def af_of_matching(graph: Graph, matching: Matching, caps: Caps = Caps()) -> AfResult:
    """Anti-forcing number af(G, M) with a minimum anti-forcing set as witness."""
    require_perfect(graph, matching)
    pool = _cycle_pool(graph, matching, caps)

    def branch_edges(removed):
        return shortest_surviving_cycle(graph, matching, pool, removed)

    # greedy start: hit one surviving cycle at a time
    greedy = []
    while True:
        edges = branch_edges(greedy)
        if edges is None:
            break
        greedy.append(edges[0])
    best = sorted(greedy)

    def lower_bound(removed):
        if pool is None:
            return 1
        return max(1, max_compatible_size_bound(pool, removed))

    visited = set()
    nodes = 0

    def search(removed):
        nonlocal best, nodes
        if removed in visited or len(removed) >= len(best):
            return
        visited.add(removed)
        nodes += 1
        edges = branch_edges(removed)
        if edges is None:
            best = sorted(removed)
            return
        if len(removed) + lower_bound(removed) >= len(best):
            return
        for e in edges:
            search(removed | {e})

    root_bound = 0 if not best else lower_bound(frozenset())
    if root_bound < len(best):
        search(frozenset())
    logger.debug("af search: value %d after %d nodes", len(best), nodes)

    if not is_anti_forcing_set(graph, matching, best):
        raise VerificationError(f"witness {best} does not force matching {list(matching.edge_ids)}")
    return AfResult(value=len(best), witness=tuple(best), nodes=nodes)


# ---------- c'(M) ----------

def _max_clique(compat: list) -> list:
    """Lexicographically least maximum clique of a graph given as neighbour bitmasks."""
    best = []

    def color_bound(cand):
        colors = 0
        rest = cand
        while rest:
            colors += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                rest &= ~low
                avail &= ~low & ~compat[v]
        return colors

    def expand(current, cand):
        nonlocal best
        if not cand:
            if len(current) > len(best):
                best = list(current)
            return
        if len(current) + color_bound(cand) <= len(best):
            return
        while cand:
            if len(current) + cand.bit_count() <= len(best):
                return
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            current.append(i)
            expand(current, cand & compat[i])
            current.pop()

    expand([], (1 << len(compat)) - 1)
    return best


def compatible(nonmatching_a: frozenset, nonmatching_b: frozenset) -> bool:
    """Two M-alternating cycles are compatible iff they share no non-matching edge.

    A vertex common to both carries its M-edge on both, so sharing only
    matching edges is the same as meeting only in edges of M.
    """
    return not (nonmatching_a & nonmatching_b)


def c_prime(graph: Graph, matching: Matching, caps: Caps = Caps()) -> CompatibleSet:
    """A maximum compatible M-alternating set (ties: least cycle-index set)."""
    cycles = enumerate_alternating_cycles(graph, matching, caps.cycle_cap)
    in_matching = set(matching.edge_ids)
    nonmatching = [frozenset(e for e in c.edge_ids if e not in in_matching) for c in cycles]
    compat = [0] * len(cycles)
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            if compatible(nonmatching[i], nonmatching[j]):
                compat[i] |= 1 << j
                compat[j] |= 1 << i
    chosen = _max_clique(compat)
    return CompatibleSet(tuple(cycles[i] for i in chosen))


# ---------- Over all perfect matchings ----------

def resolve_jobs(jobs: int) -> int:
    if jobs == 0:
        return psutil.cpu_count(logical=False) or 1
    return max(1, jobs)


def _af_value(graph: Graph, caps: Caps, matching: Matching) -> int:
    return af_of_matching(graph, matching, caps).value


def evaluate_matchings(graph: Graph, matchings: list, caps: Caps = Caps(), jobs: int = 1) -> list:
    """af(G, M) for each matching, in input order; parallel when jobs > 1."""
    jobs = resolve_jobs(jobs)
    work = functools.partial(_af_value, graph, caps)
    if jobs > 1 and len(matchings) > 1:
        with multiprocessing.Pool(min(jobs, len(matchings))) as pool:
            return pool.map(work, matchings)
    values = []
    for idx, m in enumerate(matchings, start=1):
        values.append(work(m))
        if idx % 100 == 0:
            logger.debug("evaluated %d/%d matchings", idx, len(matchings))
    return values


def af_table(graph: Graph, caps: Caps = Caps(), jobs: int = 1) -> list:
    """[(M, af(G, M))] over all perfect matchings in canonical order."""
    require_matchable(graph)
    matchings = enumerate_perfect_matchings(graph, caps.pm_cap)
    return list(zip(matchings, evaluate_matchings(graph, matchings, caps, jobs)))


def min_anti_forcing(graph: Graph, caps: Caps = Caps(), jobs: int = 1) -> tuple:
    """(af(G), first minimizing matching in canonical order)."""
    table = af_table(graph, caps, jobs)
    value = min(v for _, v in table)
    return value, next(m for m, v in table if v == value)


def max_anti_forcing(graph: Graph, caps: Caps = Caps(), jobs: int = 1) -> tuple:
    """(Af(G), all maximizing matchings in canonical order)."""
    table = af_table(graph, caps, jobs)
    value = max(v for _, v in table)
    return value, [m for m, v in table if v == value]


def spectrum_exact(graph: Graph, caps: Caps = Caps(), jobs: int = 1,
                   per_matching: bool = False) -> SpectrumResult:
    table = af_table(graph, caps, jobs)
    values = tuple(sorted({v for _, v in table}))
    return SpectrumResult(values=values, per_matching=tuple(table) if per_matching else None)


# ---------- Single-edge characterizations ----------

def anti_forcing_edges(graph: Graph) -> tuple:
    """Edges e such that G - e has exactly one perfect matching."""
    require_matchable(graph)
    return tuple(e for e in range(graph.edge_count)
                 if count_perfect_matchings_upto(graph, 2, without_edges=(e,)) == 1)


def forcing_edges(graph: Graph) -> tuple:
    """Edges lying in exactly one perfect matching."""
    require_matchable(graph)
    return tuple(e for e, (u, v) in enumerate(graph.edges)
                 if count_perfect_matchings_upto(graph, 2, without_vertices=(u, v)) == 1)


# ---------- Extremal structure ----------

def is_extremal(graph: Graph, caps: Caps = Caps(), jobs: int = 1) -> bool:
    """Af(G) == r(G)."""
    r = cyclomatic_number(graph)
    value, _ = max_anti_forcing(graph, caps, jobs)
    return value == r


def _candidate_ears(graph: Graph, edges: frozenset, in_matching: set) -> list:
    """Ears that can be detached last: (vertex path, edge set) pairs in canonical order.

    An ear is a maximal path through degree-2 vertices whose ends are joined
    by a matching edge of the current graph; a bare cycle yields one ear per
    matching edge on it.
    """
    incident = {}
    for eid in edges:
        for w in graph.edges[eid]:
            incident.setdefault(w, []).append(eid)
    if any(len(es) < 2 for es in incident.values()):
        return []

    def other_end(eid, w):
        u, v = graph.edges[eid]
        return v if u == w else u

    def walk(start, first_edge, stop=None):
        path, path_edges = [start], [first_edge]
        prev, current = first_edge, other_end(first_edge, start)
        while current != stop and len(incident[current]) == 2:
            path.append(current)
            a, b = incident[current]
            prev = b if a == prev else a
            path_edges.append(prev)
            current = other_end(prev, current)
        path.append(current)
        return path, frozenset(path_edges)

    found = {}
    if all(len(es) == 2 for es in incident.values()):
        for base in sorted(edges & in_matching):
            u, v = graph.edges[base]
            first = next(e for e in incident[u] if e != base)
            path, path_edges = walk(u, first, stop=v)
            found[path_edges] = tuple(path)
        return sorted(((p, es) for es, p in found.items()), key=lambda item: sorted(item[1]))

    for b in sorted(incident):
        if len(incident[b]) < 3:
            continue
        for first in sorted(incident[b]):
            if len(incident[other_end(first, b)]) != 2:
                continue
            path, path_edges = walk(b, first)
            u, v = path[0], path[-1]
            if u == v or path_edges in found or not graph.has_edge(u, v):
                continue
            tie = graph.edge_id(u, v)
            if tie in edges and tie in in_matching:
                found[path_edges] = tuple(path)
    return sorted(((p, es) for es, p in found.items()), key=lambda item: sorted(item[1]))


def find_extremal_ear_decomposition(graph: Graph, matching: Matching,
                                    caps: Caps = Caps()) -> Optional[EarDecomposition]:
    """A bipartite ear decomposition whose every ear closes on a matching edge, or None.

    Works backwards from G, detaching ears until a single matching edge is
    left. Each ear's end vertices are joined by an edge of the earlier stage
    that lies in M, and M restricted to every stage stays perfect.

    Raises:
        NotElementaryError: G is not elementary bipartite.
        CapExceededError: more than caps.cycle_cap intermediate graphs explored.
    """
    require_perfect(graph, matching)
    if not is_elementary(graph):
        raise NotElementaryError("ear decompositions need an elementary bipartite graph")
    in_matching = set(matching.edge_ids)
    budget = caps.cycle_cap
    dead = set()

    def peel(edges):
        if len(edges) == 1:
            (base,) = edges
            return (base, []) if base in in_matching else None
        if edges in dead:
            return None
        for path, ear_edges in _candidate_ears(graph, edges, in_matching):
            found = peel(edges - ear_edges)
            if found is not None:
                base, ears = found
                ears.append(path)
                return base, ears
        dead.add(edges)
        if len(dead) > budget:
            raise CapExceededError(budget, "ear-decomposition states")
        return None

    found = peel(frozenset(range(graph.edge_count)))
    if found is None:
        return None
    base, ears = found
    return EarDecomposition(base_edge=base, ears=tuple(ears))


def component_af_values(graph: Graph, matching: Matching, caps: Caps = Caps()) -> list:
    """af(G_i, M_i) for each normal component G_i and restriction M_i."""
    require_perfect(graph, matching)
    report = normal_components(graph)
    values = []
    for comp_edges in report.component_edges:
        sub, _, edge_map = graph.subgraph(comp_edges)
        values.append(af_of_matching(sub, restrict_matching(matching, edge_map), caps).value)
    return values


def af_additivity_check(graph: Graph, matching: Matching, caps: Caps = Caps()) -> bool:
    """af(G, M) equals the sum of af over the normal components."""
    whole = af_of_matching(graph, matching, caps).value
    return whole == sum(component_af_values(graph, matching, caps))
