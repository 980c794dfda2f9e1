"""Finite windows of bi-infinite ordered Bratteli diagrams.

A window materializes the levels m..n of a diagram: vertex sets V_m..V_n and
edge sets E_{m+1}..E_n, where an edge at level k runs from a vertex of
V_{k-1} (its source) to a vertex of V_k (its range).  The two partial orders
are stored as dense per-fiber ranks: r_rank orders the edges sharing a range,
s_rank the edges sharing a source.  An optional generator callback supplies
one more level on demand, so windows act as finite proxies for the
bi-infinite object.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .reports import ValidationReport

LT, EQ, GT, INCOMPARABLE = "LT", "EQ", "GT", "INCOMPARABLE"
R, S = "R", "S"
SUCC, PRED = "Succ", "Pred"


class WindowError(ValueError):
    """Raised for out-of-window indices or malformed window data."""


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("duplicate symbols in alphabet")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def index(self, symbol):
        return self.symbols.index(symbol)


@dataclass(frozen=True)
class Level:
    index: int
    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise ValueError(f"level {self.index} has an empty vertex set")


@dataclass(frozen=True)
class Edge:
    level: int
    id: str
    source: str
    range: str
    r_rank: int
    s_rank: int


# generator(window, direction) -> (Level, tuple[Edge, ...]); direction "left"/"right"
Generator = Callable[["DiagramWindow", str], tuple]


@dataclass(frozen=True)
class DiagramWindow:
    levels: tuple          # contiguous Level objects, lowest index first
    edges: tuple           # edges[k] = edge tuple of level min_level+1+k
    generator: Optional[Generator] = None

    def __post_init__(self):
        idx = [lv.index for lv in self.levels]
        if idx != list(range(idx[0], idx[0] + len(idx))):
            raise WindowError("window levels must be contiguous")
        if len(self.edges) != len(self.levels) - 1:
            raise WindowError("need exactly one edge set per consecutive level pair")

    @property
    def min_level(self):
        return self.levels[0].index

    @property
    def max_level(self):
        return self.levels[-1].index

    def level(self, n):
        if not self.min_level <= n <= self.max_level:
            raise WindowError(f"level {n} outside window [{self.min_level}, {self.max_level}]")
        return self.levels[n - self.min_level]

    def edge_set(self, n):
        """Edges of E_n (from V_{n-1} to V_n)."""
        if not self.min_level < n <= self.max_level:
            raise WindowError(f"edge level {n} outside window ({self.min_level}, {self.max_level}]")
        return self.edges[n - self.min_level - 1]

    def edge_by_id(self, n, edge_id):
        for e in self.edge_set(n):
            if e.id == edge_id:
                return e
        raise WindowError(f"no edge with id {edge_id!r} at level {n}")

    def r_fiber(self, n, vertex):
        return tuple(sorted((e for e in self.edge_set(n) if e.range == vertex),
                            key=lambda e: e.r_rank))

    def s_fiber(self, n, vertex):
        """Edges of E_n with the given source in V_{n-1}, by s_rank."""
        return tuple(sorted((e for e in self.edge_set(n) if e.source == vertex),
                            key=lambda e: e.s_rank))

    def extended(self, direction):
        if self.generator is None:
            raise WindowError("window has no generator; cannot extend " + direction)
        level, new_edges = self.generator(self, direction)
        if direction == "right":
            if level.index != self.max_level + 1:
                raise WindowError("generator returned a non-adjacent right level")
            return replace(self, levels=self.levels + (level,), edges=self.edges + (tuple(new_edges),))
        if level.index != self.min_level - 1:
            raise WindowError("generator returned a non-adjacent left level")
        return replace(self, levels=(level,) + self.levels, edges=(tuple(new_edges),) + self.edges)

    def ensure_span(self, lo, hi):
        """Window covering [lo, hi], extending via the generator as needed."""
        w = self
        while w.min_level > lo:
            w = w.extended("left")
        while w.max_level < hi:
            w = w.extended("right")
        return w

    def level_homogeneous(self):
        """True when every materialized level repeats one (vertices, edges) template."""
        ref_v = self.levels[0].vertices
        if any(lv.vertices != ref_v for lv in self.levels):
            return False
        def shape(es):
            return tuple(sorted((e.id, e.source, e.range, e.r_rank, e.s_rank) for e in es))
        shapes = {shape(es) for es in self.edges}
        return len(shapes) <= 1


@dataclass(frozen=True)
class FinitePath:
    start_level: int
    edges: tuple

    def __post_init__(self):
        for a, b in zip(self.edges, self.edges[1:]):
            if a.range != b.source:
                raise WindowError(f"path breaks at level {b.level}: {a.range} != {b.source}")
        for k, e in enumerate(self.edges):
            if e.level != self.start_level + 1 + k:
                raise WindowError("path edge levels must be consecutive")

    @property
    def end_level(self):
        return self.start_level + len(self.edges)

    @property
    def source(self):
        return self.edges[0].source

    @property
    def range(self):
        return self.edges[-1].range

    def edge_at(self, n):
        """The edge of E_n along this path."""
        if not self.start_level < n <= self.end_level:
            raise WindowError(f"path has no edge at level {n}")
        return self.edges[n - self.start_level - 1]

    def ids(self):
        return tuple(e.id for e in self.edges)

    def __len__(self):
        return len(self.edges)


def validate_window(w: DiagramWindow) -> ValidationReport:
    """Check the ordered-diagram invariants; report every violation found."""
    violations = []
    for n in range(w.min_level + 1, w.max_level + 1):
        edges = w.edge_set(n)
        below = set(w.level(n - 1).vertices)
        above = set(w.level(n).vertices)
        for e in edges:
            if e.source not in below:
                violations.append(f"E_{n}: edge {e.id} has unknown source {e.source}")
            if e.range not in above:
                violations.append(f"E_{n}: edge {e.id} has unknown range {e.range}")
        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            violations.append(f"E_{n}: duplicate edge ids")
        for v in above:
            fiber = [e for e in edges if e.range == v]
            if not fiber:
                violations.append(f"r not surjective: vertex {v} at level {n} has no incoming edge")
            else:
                ranks = sorted(e.r_rank for e in fiber)
                if len(set(ranks)) != len(ranks):
                    violations.append(f"rank collision: r_rank on r^-1({v}) at level {n}")
                elif ranks != list(range(len(fiber))):
                    violations.append(f"rank gap: r_rank on r^-1({v}) at level {n} is {ranks}")
        for v in below:
            fiber = [e for e in edges if e.source == v]
            if not fiber:
                violations.append(f"s not surjective: vertex {v} at level {n - 1} has no outgoing edge")
            else:
                ranks = sorted(e.s_rank for e in fiber)
                if len(set(ranks)) != len(ranks):
                    violations.append(f"rank collision: s_rank on s^-1({v}) at level {n}")
                elif ranks != list(range(len(fiber))):
                    violations.append(f"rank gap: s_rank on s^-1({v}) at level {n} is {ranks}")
    return ValidationReport(violations=tuple(violations))


def finite_paths(w: DiagramWindow, m: int, n: int, src=None, rng=None):
    """All paths of E_{m,n}, filtered by endpoints, in <=_s lexicographic order.

    Sources are visited in level declaration order, then recursion follows
    s_rank, so output order agrees with compare_paths(..., S) on each s-fiber.
    """
    if not (w.min_level <= m < n <= w.max_level):
        raise WindowError(f"span [{m}, {n}] not inside window")
    out = []
    sources = [v for v in w.level(m).vertices if src is None or v == src]

    def grow(prefix, vertex, k):
        if k == n:
            if rng is None or vertex == rng:
                out.append(FinitePath(m, tuple(prefix)))
            return
        for e in w.s_fiber(k + 1, vertex):
            prefix.append(e)
            grow(prefix, e.range, k + 1)
            prefix.pop()

    for v in sources:
        grow([], v, m)
    return out


def compare_paths(p: FinitePath, q: FinitePath, which: str) -> str:
    """Compare in the lexicographic <=_s (left-to-right) or <=_r (right-to-left) order."""
    if p.start_level != q.start_level or len(p) != len(q):
        raise WindowError("compare_paths needs equal spans")
    if which == S:
        if p.source != q.source:
            return INCOMPARABLE
        for a, b in zip(p.edges, q.edges):
            if a.id != b.id:
                return LT if a.s_rank < b.s_rank else GT
        return EQ
    if which == R:
        if p.range != q.range:
            return INCOMPARABLE
        for a, b in zip(reversed(p.edges), reversed(q.edges)):
            if a.id != b.id:
                return LT if a.r_rank < b.r_rank else GT
        return EQ
    raise ValueError(f"which must be {R!r} or {S!r}")


def _shift(w, fiber, edge, up):
    """Neighbor of edge inside an already rank-sorted fiber, or None."""
    i = next(k for k, e in enumerate(fiber) if e.id == edge.id)
    j = i + 1 if up else i - 1
    if 0 <= j < len(fiber):
        return fiber[j]
    return None


def _min_s_chain(w, vertex, lo, hi):
    """The all-s-minimal path from vertex at level lo out to level hi."""
    edges = []
    for k in range(lo + 1, hi + 1):
        fiber = w.s_fiber(k, vertex)
        edges.append(fiber[0])
        vertex = fiber[0].range
    return edges


def _max_s_chain(w, vertex, lo, hi):
    edges = []
    for k in range(lo + 1, hi + 1):
        fiber = w.s_fiber(k, vertex)
        edges.append(fiber[-1])
        vertex = fiber[-1].range
    return edges


def _min_r_chain(w, vertex, hi, lo):
    """The all-r-minimal path into vertex at level hi, back to level lo."""
    edges = []
    for k in range(hi, lo, -1):
        fiber = w.r_fiber(k, vertex)
        edges.append(fiber[0])
        vertex = fiber[0].source
    edges.reverse()
    return edges


def _max_r_chain(w, vertex, hi, lo):
    edges = []
    for k in range(hi, lo, -1):
        fiber = w.r_fiber(k, vertex)
        edges.append(fiber[-1])
        vertex = fiber[-1].source
    edges.reverse()
    return edges


def successor(w: DiagramWindow, p: FinitePath, which: str, direction: str = SUCC):
    """Immediate neighbor of p in the chosen lexicographic order, or None.

    For S the fixed endpoint is the source; the pivot is the rightmost edge
    admitting an s-neighbor and the levels past it refill extremally.  For R
    the roles of the two ends swap.
    """
    up = direction == SUCC
    if which == S:
        for i in range(len(p.edges) - 1, -1, -1):
            e = p.edges[i]
            fiber = w.s_fiber(e.level, e.source)
            e2 = _shift(w, fiber, e, up)
            if e2 is None:
                continue
            tail = _min_s_chain(w, e2.range, e2.level, p.end_level) if up \
                else _max_s_chain(w, e2.range, e2.level, p.end_level)
            return FinitePath(p.start_level, p.edges[:i] + (e2,) + tuple(tail))
        return None
    if which == R:
        for i in range(len(p.edges)):
            e = p.edges[i]
            fiber = w.r_fiber(e.level, e.range)
            e2 = _shift(w, fiber, e, up)
            if e2 is None:
                continue
            head = _min_r_chain(w, e2.source, e2.level - 1, p.start_level) if up \
                else _max_r_chain(w, e2.source, e2.level - 1, p.start_level)
            return FinitePath(p.start_level, tuple(head) + (e2,) + p.edges[i + 1:])
        return None
    raise ValueError(f"which must be {R!r} or {S!r}")


def edge_matrix(w: DiagramWindow, n: int):
    """E_n as a #V_n x #V_{n-1} count matrix (row j, col i = edges i -> j)."""
    below = w.level(n - 1).vertices
    above = w.level(n).vertices
    mat = [[0] * len(below) for _ in above]
    col = {v: i for i, v in enumerate(below)}
    row = {v: j for j, v in enumerate(above)}
    for e in w.edge_set(n):
        mat[row[e.range]][col[e.source]] += 1
    return mat


def path_is_extremal(p: FinitePath, w: DiagramWindow, which: str, direction: str) -> bool:
    """A path is maximal (minimal) in its fiber iff every edge is."""
    for e in p.edges:
        fiber = w.s_fiber(e.level, e.source) if which == S else w.r_fiber(e.level, e.range)
        probe = fiber[-1] if direction == SUCC else fiber[0]
        if probe.id != e.id:
            return False
    return True


def edge_is_extremal(w: DiagramWindow, e: Edge, which: str, maximal: bool) -> bool:
    fiber = w.s_fiber(e.level, e.source) if which == S else w.r_fiber(e.level, e.range)
    return (fiber[-1] if maximal else fiber[0]).id == e.id
