"""Infinite paths as finite descriptors, the successor involutions, and the
depth-bounded singular-set scan.

A PathDescriptor is (left tail, finite core, right tail).  Extremal tail
kinds realize uniquely: an RMax left tail follows the r-maximal edge
backwards from the core source, an SMax right tail follows the s-maximal
edge forwards from the core range, and so on.  Id-pinned tails
(HorizontalConstant, PeriodicExplicit) name one edge id per level.  Any
question that would need levels beyond the window raises
InsufficientDepthError instead of guessing; extremality of pinned tails is
extrapolated from the materialized levels and is therefore depth-stamped.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .core_diagram import (R, S, DiagramWindow, FinitePath, WindowError,
                           edge_is_extremal)
from .reports import CERTIFIED, INCONCLUSIVE, VIOLATED, CertificateItem, CertificateReport

SMAX, SMIN, RMAX, RMIN = "SMax", "SMin", "RMax", "RMin"
HORIZONTAL, PERIODIC = "HorizontalConstant", "PeriodicExplicit"
LEFT, RIGHT = "left", "right"
PLUS, MINUS = "Plus", "Minus"

_EXTREMAL_KINDS = (SMAX, SMIN, RMAX, RMIN)


class InsufficientDepthError(WindowError):
    """The window does not reach deep enough to decide the question."""


class NotInBoundaryError(ValueError):
    """Delta applied to a path with no successor/predecessor pivot."""


@dataclass(frozen=True)
class TailSpec:
    kind: str
    symbol: Optional[str] = None
    cycle: tuple = ()

    def __post_init__(self):
        if self.kind not in _EXTREMAL_KINDS + (HORIZONTAL, PERIODIC):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == HORIZONTAL and self.symbol is None:
            raise ValueError("HorizontalConstant needs a symbol")
        if self.kind == PERIODIC and not self.cycle:
            raise ValueError("PeriodicExplicit needs an edge-id cycle")

    @property
    def pinned(self):
        """True when the tail names explicit edge ids per level."""
        return self.kind in (HORIZONTAL, PERIODIC)


def smax_tail():
    return TailSpec(SMAX)


def smin_tail():
    return TailSpec(SMIN)


def rmax_tail():
    return TailSpec(RMAX)


def rmin_tail():
    return TailSpec(RMIN)


def horizontal_tail(symbol):
    return TailSpec(HORIZONTAL, symbol=symbol)


def periodic_tail(*ids):
    return TailSpec(PERIODIC, cycle=tuple(ids))


def _unique_extremal_into(w, level, vertex, which, maximal):
    """The edge at `level` with range `vertex` that is which-extremal in its
    own fiber; canonical for R kinds, uniqueness-checked for S kinds."""
    if which == R:
        fiber = w.r_fiber(level, vertex)
        return fiber[-1] if maximal else fiber[0]
    hits = [e for e in w.edge_set(level)
            if e.range == vertex and edge_is_extremal(w, e, S, maximal)]
    if len(hits) != 1:
        raise InsufficientDepthError(
            f"{'s-max' if maximal else 's-min'} left tail not uniquely realizable into "
            f"{vertex} at level {level}")
    return hits[0]


def _unique_extremal_from(w, level, vertex, which, maximal):
    if which == S:
        fiber = w.s_fiber(level, vertex)
        return fiber[-1] if maximal else fiber[0]
    hits = [e for e in w.edge_set(level)
            if e.source == vertex and edge_is_extremal(w, e, R, maximal)]
    if len(hits) != 1:
        raise InsufficientDepthError(
            f"{'r-max' if maximal else 'r-min'} right tail not uniquely realizable from "
            f"{vertex} at level {level}")
    return hits[0]


def _pinned_id(tail, level):
    if tail.kind == HORIZONTAL:
        return tail.symbol
    return tail.cycle[level % len(tail.cycle)]


@dataclass(frozen=True)
class PathDescriptor:
    left: TailSpec
    core: FinitePath
    right: TailSpec

    def realize(self, w: DiagramWindow, lo: int, hi: int) -> FinitePath:
        """The edge sequence on (lo, hi], realizing tails against the window.
        The span is widened to contain the core."""
        lo = min(lo, self.core.start_level)
        hi = max(hi, self.core.end_level)
        if lo < w.min_level or hi > w.max_level:
            raise InsufficientDepthError(
                f"realization needs levels [{lo}, {hi}] beyond window "
                f"[{w.min_level}, {w.max_level}]")
        edges = list(self.core.edges)
        vertex = self.core.source
        for k in range(self.core.start_level, lo, -1):
            if self.left.pinned:
                e = w.edge_by_id(k, _pinned_id(self.left, k))
                if e.range != vertex:
                    raise WindowError(f"pinned left tail breaks at level {k}")
            else:
                which = R if self.left.kind in (RMAX, RMIN) else S
                e = _unique_extremal_into(w, k, vertex, which, self.left.kind in (RMAX, SMAX))
            edges.insert(0, e)
            vertex = e.source
        vertex = self.core.range
        for k in range(self.core.end_level + 1, hi + 1):
            if self.right.pinned:
                e = w.edge_by_id(k, _pinned_id(self.right, k))
                if e.source != vertex:
                    raise WindowError(f"pinned right tail breaks at level {k}")
            else:
                which = S if self.right.kind in (SMAX, SMIN) else R
                e = _unique_extremal_from(w, k, vertex, which, self.right.kind in (SMAX, RMAX))
            edges.append(e)
            vertex = e.range
        return FinitePath(lo, tuple(edges))

    def widened(self, w, lo, hi):
        """Same path with the core extended to cover [lo, hi]."""
        lo = min(lo, self.core.start_level)
        hi = max(hi, self.core.end_level)
        return PathDescriptor(self.left, self.realize(w, lo, hi), self.right)


def semantically_equal(x: PathDescriptor, y: PathDescriptor, w: DiagramWindow,
                       lo=None, hi=None) -> bool:
    """Equality of realized edge sequences over the (default: full) window span."""
    lo = w.min_level if lo is None else lo
    hi = w.max_level if hi is None else hi
    lo = min(lo, x.core.start_level, y.core.start_level)
    hi = max(hi, x.core.end_level, y.core.end_level)
    return x.realize(w, lo, hi).ids() == y.realize(w, lo, hi).ids()


def _tail_profile(w, desc, side, which, maximal):
    """Is the infinite tail on `side` made of which-extremal edges of the
    given polarity?  True / False, or None when the window cannot tell.

    Matching extremal kinds answer exactly.  Everything else (pinned kinds,
    and extremal kinds of the other order) is extrapolated from the realized
    levels visible beyond the core, so a True here is depth-stamped.
    """
    tail = desc.left if side == LEFT else desc.right
    wanted = {(S, True): SMAX, (S, False): SMIN, (R, True): RMAX, (R, False): RMIN}[(which, maximal)]
    if tail.kind == wanted:
        return True
    try:
        realized = desc.realize(w, w.min_level, w.max_level)
    except InsufficientDepthError:
        return None
    if side == RIGHT:
        span = range(desc.core.end_level + 1, w.max_level + 1)
    else:
        span = range(w.min_level + 1, desc.core.start_level + 1)
    checked = 0
    for k in span:
        if not edge_is_extremal(w, realized.edge_at(k), which, maximal):
            return False
        checked += 1
    if checked == 0:
        return None
    if tail.kind == PERIODIC and checked < len(tail.cycle):
        return None
    return True


def _pivot(w, x, which):
    """(pivot level, polarity) for the S or R boundary question, None when x
    is certifiably not in the boundary set."""
    realized = x.realize(w, w.min_level, w.max_level)
    unknown = False
    if which == S:
        for maximal in (True, False):
            prof = _tail_profile(w, x, RIGHT, S, maximal)
            if prof is False:
                continue
            if prof is None:
                unknown = True
                continue
            for k in range(w.max_level, w.min_level, -1):
                if not edge_is_extremal(w, realized.edge_at(k), S, maximal):
                    return k, maximal
            # whole window is s-extremal; pivot could only hide to the left
            if _tail_profile(w, x, LEFT, S, maximal) is True:
                continue
            unknown = True
    else:
        for maximal in (True, False):
            prof = _tail_profile(w, x, LEFT, R, maximal)
            if prof is False:
                continue
            if prof is None:
                unknown = True
                continue
            for k in range(w.min_level + 1, w.max_level + 1):
                if not edge_is_extremal(w, realized.edge_at(k), R, maximal):
                    return k, maximal
            if _tail_profile(w, x, RIGHT, R, maximal) is True:
                continue
            unknown = True
    if unknown:
        raise InsufficientDepthError(
            f"{which} boundary membership undecidable at this window depth")
    return None


def boundary_index(w: DiagramWindow, x: PathDescriptor, which: str):
    """n(x) for S / m(x) for R: the unique level where the order neighbor
    acts; None when x is not in the corresponding boundary set."""
    if which not in (R, S):
        raise ValueError(f"which must be {R!r} or {S!r}")
    hit = _pivot(w, x, which)
    return None if hit is None else hit[0]


def delta(w: DiagramWindow, x: PathDescriptor, which: str) -> PathDescriptor:
    """The successor-or-predecessor involution: replace the pivot edge by its
    order neighbor and flip the tail past the pivot to the opposite extreme."""
    hit = _pivot(w, x, which)
    if hit is None:
        raise NotInBoundaryError(f"path not in the {which} boundary set")
    pivot, was_max = hit
    lo = min(w.min_level, x.core.start_level)
    hi = max(w.max_level, x.core.end_level)
    realized = x.realize(w, lo, hi)
    e = realized.edge_at(pivot)
    if which == S:
        fiber = w.s_fiber(e.level, e.source)
        i = next(k for k, f in enumerate(fiber) if f.id == e.id)
        e2 = fiber[i + 1] if was_max else fiber[i - 1]
        prefix = realized.edges[:pivot - lo - 1]
        core = FinitePath(lo, tuple(prefix) + (e2,))
        return PathDescriptor(x.left, core, smin_tail() if was_max else smax_tail())
    fiber = w.r_fiber(e.level, e.range)
    i = next(k for k, f in enumerate(fiber) if f.id == e.id)
    e2 = fiber[i + 1] if was_max else fiber[i - 1]
    suffix = realized.edges[pivot - lo:]
    core = FinitePath(pivot - 1, (e2,) + tuple(suffix))
    return PathDescriptor(rmin_tail() if was_max else rmax_tail(), core, x.right)


@dataclass(frozen=True)
class SigmaCertificate:
    path: PathDescriptor
    m_pivot: int
    n_pivot: int
    left_kind: str
    right_kind: str
    composite_sr: Optional[PathDescriptor]    # Delta_s o Delta_r
    composite_rs: Optional[PathDescriptor]    # Delta_r o Delta_s
    singular: Optional[bool]                  # None: inconclusive at depth
    shortcut: bool = False                    # excluded via m(x) < n(x)


@dataclass(frozen=True)
class SigmaReport:
    depth: int
    singular: tuple
    extremal: tuple
    certificates: tuple

    @property
    def inconclusive(self):
        return tuple(c for c in self.certificates if c.singular is None and not c.shortcut)


def _pivot_chains(w, n0, m0, lmax, rmax):
    """Edge chains from level n0 to m0 (n0 <= m0) with the n0 edge not
    s-extremal, the m0 edge not r-extremal, interior edges both-extremal,
    and the cross conditions at the two pivots."""
    if n0 == m0:
        for e in w.edge_set(n0):
            if edge_is_extremal(w, e, S, rmax) or edge_is_extremal(w, e, R, lmax):
                continue
            yield (e,)
        return

    def grow(chain, vertex, k):
        if k > m0:
            yield tuple(chain)
            return
        for e in w.edge_set(k):
            if e.source != vertex:
                continue
            if k < m0 and not edge_is_extremal(w, e, R, lmax):
                continue
            if not edge_is_extremal(w, e, S, rmax):
                continue
            if k == m0 and edge_is_extremal(w, e, R, lmax):
                continue
            chain.append(e)
            yield from grow(chain, e.range, k + 1)
            chain.pop()

    for f in w.edge_set(n0):
        if edge_is_extremal(w, f, S, rmax) or not edge_is_extremal(w, f, R, lmax):
            continue
        yield from grow([f], f.range, n0 + 1)


def _spread_chains(w, m0, n0, lmax, rmax):
    """Chains for the m0 < n0 boundary case: pivot edges non-extremal on
    their own side, free middle."""

    def grow(chain, vertex, k):
        if k > n0:
            yield tuple(chain)
            return
        for e in w.edge_set(k):
            if e.source != vertex:
                continue
            if k == n0 and edge_is_extremal(w, e, S, rmax):
                continue
            chain.append(e)
            yield from grow(chain, e.range, k + 1)
            chain.pop()

    for e in w.edge_set(m0):
        if edge_is_extremal(w, e, R, lmax):
            continue
        yield from grow([e], e.range, m0 + 1)


def _boundary_candidates(w, depth):
    lo, hi = -depth, depth
    for lmax in (True, False):
        lkind = RMAX if lmax else RMIN
        for rmax in (True, False):
            rkind = SMAX if rmax else SMIN
            for n0 in range(lo, hi + 1):
                for m0 in range(n0, hi + 1):
                    for chain in _pivot_chains(w, n0, m0, lmax, rmax):
                        core = FinitePath(n0 - 1, chain)
                        yield (PathDescriptor(TailSpec(lkind), core, TailSpec(rkind)),
                               m0, n0, lkind, rkind, False)
            for m0 in range(lo, hi + 1):
                for n0 in range(m0 + 1, hi + 1):
                    for chain in _spread_chains(w, m0, n0, lmax, rmax):
                        core = FinitePath(m0 - 1, chain)
                        yield (PathDescriptor(TailSpec(lkind), core, TailSpec(rkind)),
                               m0, n0, lkind, rkind, True)


def sigma_scan(w: DiagramWindow, depth: int, include_shortcut=False) -> SigmaReport:
    """Enumerate the two-sided boundary set with pivots in [-depth, depth]
    and test commutation of the two involutions on each member.

    Members with m(x) < n(x) are excluded without computing composites
    (their certificates are kept when include_shortcut is set).
    """
    need = depth + 2
    if w.generator is not None and (w.min_level > -need or w.max_level < need):
        w = w.ensure_span(-need, need)
    if w.min_level > -need or w.max_level < need:
        raise InsufficientDepthError(
            f"sigma scan at depth {depth} needs window [-{need}, {need}]")
    certs = []
    singular = []
    seen = set()
    for x, m0, n0, lkind, rkind, shortcut in _boundary_candidates(w, depth):
        key = (lkind, rkind, x.realize(w, w.min_level, w.max_level).ids())
        if key in seen:
            continue
        seen.add(key)
        if shortcut:
            if include_shortcut:
                certs.append(SigmaCertificate(x, m0, n0, lkind, rkind, None, None,
                                              singular=False, shortcut=True))
            continue
        assert boundary_index(w, x, S) == n0
        assert boundary_index(w, x, R) == m0
        try:
            sr = delta(w, delta(w, x, R), S)
            rs = delta(w, delta(w, x, S), R)
            is_sing = not semantically_equal(sr, rs, w)
        except (InsufficientDepthError, NotInBoundaryError):
            certs.append(SigmaCertificate(x, m0, n0, lkind, rkind, None, None,
                                          singular=None))
            continue
        certs.append(SigmaCertificate(x, m0, n0, lkind, rkind, sr, rs, is_sing))
        if is_sing:
            singular.append(x)
    ext = extremal_paths(w, depth)
    return SigmaReport(depth=depth, singular=tuple(singular), extremal=ext,
                       certificates=tuple(certs))


def extremal_paths(w: DiagramWindow, depth: int):
    """Window truncations of the four extremal families; cores span the whole
    materialized window, tails repeat the family polarity on both sides."""
    if w.generator is not None and (w.min_level > -depth or w.max_level < depth):
        w = w.ensure_span(-depth, depth)
    if w.min_level > -depth or w.max_level < depth:
        raise InsufficientDepthError(f"extremal paths at depth {depth} exceed the window")
    lo, hi = w.min_level, w.max_level
    out = []
    for which, maximal, kind in ((S, True, SMAX), (S, False, SMIN),
                                 (R, True, RMAX), (R, False, RMIN)):
        chains = [((), v) for v in w.level(lo).vertices]
        for k in range(lo + 1, hi + 1):
            nxt = []
            for chain, v in chains:
                for e in w.edge_set(k):
                    if e.source == v and edge_is_extremal(w, e, which, maximal):
                        nxt.append((chain + (e,), e.range))
            chains = nxt
        for chain, _ in chains:
            out.append(PathDescriptor(TailSpec(kind), FinitePath(lo, chain), TailSpec(kind)))
    return tuple(out)


def tail_equivalent(w: DiagramWindow, x: PathDescriptor, y: PathDescriptor,
                    side: str, depth: int):
    """Plus: least N with agreement at every level beyond N; Minus: greatest
    N with agreement at every level up to N.  None when agreement past the
    window cannot be certified from the tail specs."""
    lo, hi = -depth, depth
    if w.generator is not None and (w.min_level > lo or w.max_level < hi):
        w = w.ensure_span(lo, hi)
    rx = x.realize(w, lo, hi)
    ry = y.realize(w, lo, hi)
    lo = min(rx.start_level, ry.start_level)
    hi = max(rx.end_level, ry.end_level)
    rx = x.realize(w, lo, hi)
    ry = y.realize(w, lo, hi)
    diffs = [n for n in range(lo + 1, hi + 1) if rx.edge_at(n).id != ry.edge_at(n).id]
    if side == PLUS:
        if x.right != y.right:
            return None
        if not x.right.pinned and rx.range != ry.range:
            return None
        return max(diffs) if diffs else lo
    if side == MINUS:
        if x.left != y.left:
            return None
        if not x.left.pinned and rx.source != ry.source:
            return None
        return min(diffs) - 1 if diffs else hi
    raise ValueError(f"side must be {PLUS!r} or {MINUS!r}")


def standing_hypotheses_check(w: DiagramWindow, depth: int) -> CertificateReport:
    """The three standing assumptions as depth-bounded certificates: a finite
    rank bound, double connections around every level in range, and extremal
    paths disjoint from both boundary sets."""
    from .core_diagram import finite_paths

    lo, hi = -depth, depth
    if w.generator is not None and (w.min_level > lo - 1 or w.max_level < hi + 1):
        w = w.ensure_span(lo - 1, hi + 1)
    items = []
    k_bound = max(len(w.level(n).vertices) for n in range(w.min_level, w.max_level + 1))
    items.append(CertificateItem("finite rank", CERTIFIED, f"K = {k_bound} on the window"))

    def double_connected(a, b):
        counts = {}
        for p in finite_paths(w, a, b):
            counts[(p.source, p.range)] = counts.get((p.source, p.range), 0) + 1
        return all(counts.get((u, v), 0) >= 2
                   for u in w.level(a).vertices for v in w.level(b).vertices)

    def certificate_span(m, step):
        other = m + step
        while w.min_level <= other <= w.max_level:
            if double_connected(min(m, other), max(m, other)):
                return other
            other += step
        return None

    worst = None
    for m in range(max(lo, w.min_level + 1), min(hi, w.max_level - 1) + 1):
        if certificate_span(m, -1) is None or certificate_span(m, +1) is None:
            worst = m
            break
    if worst is None:
        items.append(CertificateItem("strong simplicity", CERTIFIED,
                                     f"double connections around every level in [{lo}, {hi}]"))
    else:
        single = all(len(w.s_fiber(n, v)) == 1
                     for n in range(w.min_level + 1, w.max_level + 1)
                     for v in w.level(n - 1).vertices)
        items.append(CertificateItem("strong simplicity",
                                     VIOLATED if single else INCONCLUSIVE,
                                     f"no double-connection certificate around level {worst}"))

    offender = None
    for x in extremal_paths(w, depth):
        for which in (S, R):
            try:
                piv = boundary_index(w, x, which)
            except InsufficientDepthError:
                piv = None  # no pivot visible at this depth
            if piv is not None:
                offender = (which, piv)
                break
        if offender:
            break
    if offender:
        items.append(CertificateItem("extremal/boundary disjoint", VIOLATED,
                                     f"extremal path has a {offender[0]} pivot at level {offender[1]}"))
    else:
        items.append(CertificateItem("extremal/boundary disjoint", CERTIFIED,
                                     f"no pivots on extremal paths within depth {depth}"))
    return CertificateReport(items=tuple(items))
