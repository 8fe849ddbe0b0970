"""
Even polygonal chains.

A chain is a row of even faces s_1..s_n glued along single edges. It is
written as face lengths plus, for each internal face, the offset d_i: the
number of edges between its two shared edges, counted from the entry edge's
second end. Everything the linear-time algorithms need depends only on the
lengths and on the parity of the offsets (an internal face is a kink iff
d_i is odd).

Face indices in this module are 0-based.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import Caps
from .errors import (
    BadModesError,
    CapExceededError,
    ChainSyntaxError,
    MissingOffsetError,
    MissingSeedError,
    OddLengthError,
    OffsetOutOfRangeError,
    UnexpectedOffsetError,
    VerificationError,
)
from .graph import (
    Graph,
    build_graph,
    count_perfect_matchings_upto,
    cycle_vertex_order,
    enumerate_perfect_matchings,
)
from .resonance import FaceSet, face_set_from_cycles
from .solver import SpectrumResult, anti_forcing_edges

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r'^([0-9]+)(?:@([0-9]+))?$')


@dataclass(frozen=True)
class ChainSpec:
    lengths: tuple
    offsets: tuple = ()  # one per internal face, i.e. faces 1..n-2

    def __post_init__(self):
        if not self.lengths:
            raise ChainSyntaxError("a chain needs at least one face")
        for length in self.lengths:
            if length < 4 or length % 2:
                raise OddLengthError(length)
        if len(self.offsets) != max(len(self.lengths) - 2, 0):
            raise ChainSyntaxError(
                f"{len(self.lengths)} faces need {max(len(self.lengths) - 2, 0)} offsets, got {len(self.offsets)}")
        for i, d in enumerate(self.offsets, start=1):
            if not 0 <= d <= self.lengths[i] - 2:
                raise OffsetOutOfRangeError(d, self.lengths[i])

    @property
    def n(self) -> int:
        return len(self.lengths)

    def offset(self, i: int) -> int:
        """Offset of internal face i."""
        if not 0 < i < self.n - 1:
            raise IndexError(f"face {i} is not internal")
        return self.offsets[i - 1]

    def __str__(self):
        return format_chain(self)


@dataclass(frozen=True)
class KinkFlags:
    flags: tuple  # flags[k] belongs to internal face k + 1

    def at(self, face: int) -> bool:
        """Kink status of any face; terminal faces are never kinks."""
        if 0 < face <= len(self.flags):
            return self.flags[face - 1]
        return False

    @property
    def count(self) -> int:
        return sum(self.flags)


@dataclass(frozen=True)
class SegmentDecomposition:
    segments: tuple  # (first, last) face intervals, inclusive

    @property
    def t(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple  # (first, last) face intervals, inclusive
    skipped: tuple  # faces dropped by the G ominus B steps

    @property
    def total(self) -> int:
        return sum(last - first + 1 for first, last in self.blocks)


@dataclass(frozen=True)
class ChainLayout:
    """Realized chain: graph plus per-face vertex cycles and shared edge ids."""
    graph: Graph
    faces: FaceSet
    face_cycles: tuple  # vertex cycles, face order
    face_edges: tuple  # edge-id tuples, face order
    shared_edges: tuple  # shared_edges[i] joins faces i and i+1


# ---------- Parsing ----------

def parse_chain(text: str) -> ChainSpec:
    """Parse ``L`` / ``L@d`` tokens; only internal faces carry offsets."""
    tokens = text.split()
    if not tokens:
        raise ChainSyntaxError("empty chain spec")
    lengths, offsets = [], []
    last = len(tokens) - 1
    for pos, token in enumerate(tokens):
        match = _TOKEN.match(token)
        if not match:
            raise ChainSyntaxError(f"bad token {token!r}; expected L or L@d")
        length = int(match.group(1))
        if length < 4 or length % 2:
            raise OddLengthError(length)
        internal = 0 < pos < last
        if match.group(2) is None:
            if internal:
                raise MissingOffsetError(pos + 1)
        else:
            if not internal:
                raise UnexpectedOffsetError(pos + 1)
            d = int(match.group(2))
            if d > length - 2:
                raise OffsetOutOfRangeError(d, length)
            offsets.append(d)
        lengths.append(length)
    return ChainSpec(tuple(lengths), tuple(offsets))


def format_chain(spec: ChainSpec) -> str:
    tokens = []
    for i, length in enumerate(spec.lengths):
        if 0 < i < spec.n - 1:
            tokens.append(f"{length}@{spec.offset(i)}")
        else:
            tokens.append(str(length))
    return " ".join(tokens)


def subchain(spec: ChainSpec, first: int, last: int) -> ChainSpec:
    """Faces first..last (inclusive) as a chain of their own."""
    if not 0 <= first <= last < spec.n:
        raise IndexError(f"bad face interval {first}..{last}")
    return ChainSpec(spec.lengths[first:last + 1],
                     tuple(spec.offset(i) for i in range(first + 1, last)))


def mirror(spec: ChainSpec, face: int) -> ChainSpec:
    """Reflect internal face `face`: d -> L - 2 - d."""
    offsets = list(spec.offsets)
    offsets[face - 1] = spec.lengths[face] - 2 - spec.offset(face)
    return ChainSpec(spec.lengths, tuple(offsets))


# ---------- Kinks ----------

def kink_flags(spec: ChainSpec) -> KinkFlags:
    """Internal face i is a kink iff d_i is odd."""
    return KinkFlags(tuple(d % 2 == 1 for d in spec.offsets))


def kink_flags_by_matching(spec: ChainSpec) -> KinkFlags:
    """Kinks decided on the realization: some perfect matching of the face
    cycle alone contains both of its shared edges."""
    layout = realize_layout(spec)
    flags = []
    for i in range(1, spec.n - 1):
        cycle, _, edge_map = layout.graph.subgraph(layout.face_edges[i])
        wanted = {edge_map.index(layout.shared_edges[i - 1]), edge_map.index(layout.shared_edges[i])}
        flags.append(any(wanted <= set(m.edge_ids) for m in enumerate_perfect_matchings(cycle, 2)))
    return KinkFlags(tuple(flags))


def maximal_linear_chains(spec: ChainSpec) -> list:
    """Maximal runs of faces without an internal kink; adjacent runs share their kink."""
    flags = kink_flags(spec)
    runs, start = [], 0
    for i in range(1, spec.n - 1):
        if flags.at(i):
            runs.append((start, i))
            start = i
    runs.append((start, spec.n - 1))
    return runs


def maximal_linear_chain_count(spec: ChainSpec) -> int:
    return len(maximal_linear_chains(spec))


# ---------- Realization ----------

def realize_layout(spec: ChainSpec) -> ChainLayout:
    """Build the chain graph face by face.

    Face 1 is the cycle 0..L_1-1 with exit edge (0, 1). Each later face adds
    L_i - 2 fresh vertices on a path from the entry edge's second end back to
    its first end; its exit edge is path edge d_i + 1.
    """
    first = spec.lengths[0]
    cycles = [list(range(first))]
    pairs = [(v, (v + 1) % first) for v in range(first)]
    entry = (0, 1)
    shared = [entry] if spec.n > 1 else []
    next_vertex = first
    for i in range(1, spec.n):
        u, v = entry
        fresh = list(range(next_vertex, next_vertex + spec.lengths[i] - 2))
        next_vertex += len(fresh)
        path = [v] + fresh + [u]
        pairs.extend(zip(path, path[1:]))
        cycles.append([u] + path[:-1])
        if i < spec.n - 1:
            d = spec.offset(i)
            entry = (path[d], path[d + 1])
            shared.append(entry)

    graph = build_graph(next_vertex, pairs)
    face_edges = []
    for cycle in cycles:
        face_edges.append(tuple(sorted(graph.edge_id(cycle[k], cycle[(k + 1) % len(cycle)])
                                       for k in range(len(cycle)))))
    uses = {}
    for edges in face_edges:
        for eid in edges:
            uses[eid] = uses.get(eid, 0) + 1
    outer = cycle_vertex_order(graph, [eid for eid, count in uses.items() if count == 1])
    if outer is None:
        raise VerificationError(f"chain {format_chain(spec)} has no simple outer boundary")
    faces = face_set_from_cycles(graph, cycles, outer)
    return ChainLayout(graph=graph, faces=faces, face_cycles=tuple(tuple(c) for c in cycles),
                       face_edges=tuple(face_edges),
                       shared_edges=tuple(graph.edge_id(a, b) for a, b in shared))


def realize(spec: ChainSpec) -> tuple:
    """(Graph, FaceSet) of the chain, exterior boundary included."""
    layout = realize_layout(spec)
    return layout.graph, layout.faces


# ---------- Decompositions ----------

def segment_decomposition(spec: ChainSpec) -> SegmentDecomposition:
    """Greedy left-to-right split at kinks; the segment count is af(G)."""
    flags = kink_flags(spec)
    n = spec.n
    segments, start = [], 0
    while start < n:
        kinks = [i for i in range(start + 1, n - 1) if flags.at(i)]
        if not kinks:
            end = n - 1
        elif spec.lengths[kinks[0]] == 4:
            end = kinks[0]
        elif len(kinks) >= 2:
            end = kinks[1]
        else:
            end = n - 1
        segments.append((start, end))
        start = end + 1
    return SegmentDecomposition(tuple(segments))


def all_kink_decomposition(spec: ChainSpec) -> BlockDecomposition:
    """Maximal all-kink prefixes; after each, drop faces through the next kink.

    The sum of block sizes is Af(G).
    """
    flags = kink_flags(spec)
    n = spec.n
    blocks, skipped, start = [], [], 0
    while start < n:
        stop = next((i for i in range(start + 1, n - 1) if not flags.at(i)), None)
        if stop is None:
            blocks.append((start, n - 1))
            break
        blocks.append((start, stop))
        kink = next((i for i in range(stop + 1, n - 1) if flags.at(i)), None)
        if kink is None:
            skipped.extend(range(stop + 1, n))
            break
        skipped.extend(range(stop + 1, kink + 1))
        start = kink + 1
    return BlockDecomposition(tuple(blocks), tuple(skipped))


def chain_af(spec: ChainSpec) -> int:
    return segment_decomposition(spec).t


def chain_max_af(spec: ChainSpec) -> int:
    return all_kink_decomposition(spec).total


def spectrum_chain(spec: ChainSpec) -> SpectrumResult:
    """The anti-forcing spectrum is the full interval [af, Af]."""
    return SpectrumResult(values=tuple(range(chain_af(spec), chain_max_af(spec) + 1)))


# ---------- Graph-level G ominus G' ----------

def ominus_remainder(graph: Graph, within: set, removed: set) -> set:
    """Vertices left after deleting `removed` from G[within] and then
    repeatedly deleting both ends of every pendant edge."""
    alive = set(within) - set(removed)
    neighbors = {v: {w for w in graph.adjacency[v] if w in alive} for v in alive}
    pendant = sorted(v for v in alive if len(neighbors[v]) == 1)
    while pendant:
        v = pendant.pop(0)
        if v not in alive or len(neighbors[v]) != 1:
            continue
        (w,) = neighbors[v]
        for gone in (v, w):
            alive.discard(gone)
            for x in neighbors.pop(gone):
                if x in alive:
                    neighbors[x].discard(gone)
                    if len(neighbors[x]) == 1:
                        pendant.append(x)
        pendant.sort()
    return alive


def check_ominus(spec: ChainSpec) -> list:
    """Compare the face-level all-kink steps with graph-level pendant peeling.

    Returns a list of mismatch records (empty when both agree).
    """
    layout = realize_layout(spec)
    blocks = all_kink_decomposition(spec).blocks
    n = spec.n

    def vertices(first, last):
        found = set()
        for i in range(first, last + 1):
            found.update(layout.face_cycles[i])
        return found

    mismatches = []
    for t, (first, last) in enumerate(blocks):
        if last == n - 1:
            continue
        expected = vertices(blocks[t + 1][0], n - 1) if t + 1 < len(blocks) else set()
        left = ominus_remainder(layout.graph, vertices(first, n - 1), vertices(first, last))
        if left != expected:
            mismatches.append({
                'check': 'ominus',
                'block': [first, last],
                'expected': sorted(expected),
                'actual': sorted(left),
            })
    return mismatches


# ---------- Witness for af ----------

def min_witness(spec: ChainSpec, caps: Caps = Caps()) -> tuple:
    """One anti-forcing edge per segment, forming an anti-forcing set of the
    realized chain (edge ids of the realization)."""
    layout = realize_layout(spec)
    graph = layout.graph
    interfaces = set(layout.shared_edges)
    choices = []
    for first, last in segment_decomposition(spec).segments:
        seg_edges = set()
        for i in range(first, last + 1):
            seg_edges.update(layout.face_edges[i])
        sub, _, edge_map = graph.subgraph(seg_edges)
        candidates = [edge_map[e] for e in anti_forcing_edges(sub)]
        candidates.sort(key=lambda e: (e in interfaces, e))
        choices.append(candidates)

    for attempt, combo in enumerate(itertools.product(*choices), start=1):
        if attempt > caps.cycle_cap:
            raise CapExceededError(caps.cycle_cap, "witness combinations")
        if len(set(combo)) != len(combo):
            continue
        if count_perfect_matchings_upto(graph, 2, without_edges=combo) == 1:
            return tuple(sorted(combo))
    raise VerificationError(f"no anti-forcing set from segment edges of {format_chain(spec)}")


# ---------- Instance generators ----------

FAMILIES = ('hexchain', 'polyomino', 'straight-polyomino', 'allkink-catahex', 'phenylene', 'random')

HEX_MODES = {'S': 2, 'L': 1, 'R': 3}


def _check_modes(modes: Optional[str], count: int, alphabet: str, default: str) -> str:
    if modes is None or modes == '':
        return default * count
    modes = modes.upper()
    if len(modes) != count:
        raise BadModesError(f"expected {count} mode letters, got {len(modes)}")
    bad = set(modes) - set(alphabet)
    if bad:
        raise BadModesError(f"unknown mode letters {''.join(sorted(bad))}; allowed: {alphabet}")
    return modes


def _no_modes(family: str, modes: Optional[str]) -> None:
    if modes:
        raise BadModesError(f"family {family} takes no modes")


def generate(family: str, n: int, modes: Optional[str] = None, seed: Optional[int] = None) -> ChainSpec:
    """Chain instances by family.

    ``random`` draws lengths from {4, 6, 8} and offsets uniformly with
    numpy's PCG64 generator seeded by `seed`, so output is stable across
    platforms.
    """
    if n < 1:
        raise BadModesError("a chain needs at least one face")
    internal = max(n - 2, 0)

    if family == 'hexchain':
        letters = _check_modes(modes, internal, 'SLR', 'S')
        return ChainSpec((6,) * n, tuple(HEX_MODES[c] for c in letters))

    if family == 'polyomino':
        letters = _check_modes(modes, internal, 'SB', 'S')
        offsets, bends = [], 0
        for c in letters:
            if c == 'S':
                offsets.append(1)
            else:
                offsets.append(0 if bends % 2 == 0 else 2)
                bends += 1
        return ChainSpec((4,) * n, tuple(offsets))

    if family == 'straight-polyomino':
        _no_modes(family, modes)
        return ChainSpec((4,) * n, (1,) * internal)

    if family == 'allkink-catahex':
        _no_modes(family, modes)
        return ChainSpec((6,) * n, tuple(1 if k % 2 == 0 else 3 for k in range(internal)))

    if family == 'phenylene':
        lengths = tuple(6 if i % 2 == 0 else 4 for i in range(n))
        hexagons = [i for i in range(1, n - 1) if lengths[i] == 6]
        letters = iter(_check_modes(modes, len(hexagons), 'SLR', 'S'))
        offsets = tuple(HEX_MODES[next(letters)] if lengths[i] == 6 else 1 for i in range(1, n - 1))
        return ChainSpec(lengths, offsets)

    if family == 'random':
        _no_modes(family, modes)
        if seed is None:
            raise MissingSeedError("random chains need an explicit seed")
        rng = np.random.Generator(np.random.PCG64(seed))
        lengths = tuple(int(x) for x in rng.choice([4, 6, 8], size=n))
        offsets = tuple(int(rng.integers(0, lengths[i] - 1)) for i in range(1, n - 1))
        return ChainSpec(lengths, offsets)

    raise BadModesError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
