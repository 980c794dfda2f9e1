"""States, cylinder measures, the generalized expansion maps phi, and the
chart maps psi with their constant-offset transition property.

All values are exact Fractions.  phi of an infinite ray is computable when
the tail is an extremal kind (the series telescopes) or an id-pinned kind
whose per-cycle contributions form a rational geometric series; anything
else raises UnsupportedTailError, mirroring the fact that the defining
series has no finite recipe.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core_diagram import (R, S, SUCC, DiagramWindow, FinitePath, WindowError,
                           edge_is_extremal, finite_paths, successor)
from .path_space import (HORIZONTAL, PERIODIC, RMAX, RMIN, SMAX, SMIN,
                         InsufficientDepthError, PathDescriptor, TailSpec,
                         _pinned_id, _tail_profile, LEFT, RIGHT)
from .reports import ValidationReport, fmt_rat


class UnsupportedTailError(ValueError):
    """phi cannot sum the tail series in closed rational form."""


class DomainError(ValueError):
    """Chart map applied outside its domain."""


@dataclass(frozen=True)
class State:
    nu_r: dict           # level -> vertex -> Fraction
    nu_s: dict

    def r(self, level, vertex):
        return self.nu_r[level][vertex]

    def s(self, level, vertex):
        return self.nu_s[level][vertex]

    def levels(self):
        return sorted(self.nu_r)


TWO_SIDED, RIGHT_ONLY, LEFT_ONLY = "two", "right", "left"


@dataclass(frozen=True)
class CylinderSet:
    path: FinitePath
    sides: str = TWO_SIDED


def validate_state(w: DiagramWindow, st: State) -> ValidationReport:
    """Both state equations at every interior level, plus constancy of the
    level pairing sum(nu_r * nu_s); the common value is reported."""
    violations, notes = [], []
    lo, hi = w.min_level, w.max_level
    for n in range(lo, hi + 1):
        for v in w.level(n).vertices:
            if v not in st.nu_r.get(n, {}) or v not in st.nu_s.get(n, {}):
                violations.append(f"state missing vertex {v} at level {n}")
                continue
            if st.r(n, v) < 0 or st.s(n, v) < 0:
                violations.append(f"negative state entry at level {n} vertex {v}")
    if violations:
        return ValidationReport(violations=tuple(violations))
    for n in range(lo + 1, hi + 1):
        for v in w.level(n).vertices:
            total = sum(st.r(n - 1, e.source) for e in w.r_fiber(n, v))
            if total != st.r(n, v):
                violations.append(
                    f"nu_r equation fails at level {n} vertex {v}: "
                    f"{fmt_rat(st.r(n, v))} != {fmt_rat(total)}")
    for n in range(lo, hi):
        for v in w.level(n).vertices:
            total = sum(st.s(n + 1, e.range) for e in w.s_fiber(n + 1, v))
            if total != st.s(n, v):
                violations.append(
                    f"nu_s equation fails at level {n} vertex {v}: "
                    f"{fmt_rat(st.s(n, v))} != {fmt_rat(total)}")
    pairings = {n: sum(st.r(n, v) * st.s(n, v) for v in w.level(n).vertices)
                for n in range(lo, hi + 1)}
    vals = set(pairings.values())
    if len(vals) > 1:
        violations.append(f"level pairing not constant: {sorted(map(fmt_rat, vals))}")
    else:
        notes.append(f"level invariant = {fmt_rat(vals.pop())}")
    if any(st.r(n, v) == 0 or st.s(n, v) == 0
           for n in range(lo, hi + 1) for v in w.level(n).vertices):
        notes.append("not faithful")
    return ValidationReport(violations=tuple(violations), notes=tuple(notes))


def cylinder_measure(st: State, c: CylinderSet) -> Fraction:
    """Two-sided: nu_r(s(p)) * nu_s(r(p)); one-sided pX+: nu_s(r(p));
    one-sided X-p: nu_r(s(p))."""
    p = c.path
    if c.sides == TWO_SIDED:
        return st.r(p.start_level, p.source) * st.s(p.end_level, p.range)
    if c.sides == RIGHT_ONLY:
        return st.s(p.end_level, p.range)
    if c.sides == LEFT_ONLY:
        return st.r(p.start_level, p.source)
    raise ValueError(f"unknown sides {c.sides!r}")


@dataclass(frozen=True)
class RightRay:
    """One-sided path heading right: anchor vertex, explicit edges at levels
    anchor_level+1.., then a tail."""
    vertex: str
    level: int
    edges: tuple = ()
    tail: TailSpec = TailSpec(SMIN)

    def __post_init__(self):
        v = self.vertex
        for k, e in enumerate(self.edges):
            if e.level != self.level + 1 + k or e.source != v:
                raise WindowError("right ray edges must chain from the anchor")
            v = e.range

    @property
    def end_level(self):
        return self.level + len(self.edges)

    @property
    def end_vertex(self):
        return self.edges[-1].range if self.edges else self.vertex


@dataclass(frozen=True)
class LeftRay:
    """One-sided path heading left: a tail, explicit edges at levels up to
    anchor_level (stored ascending), anchored at vertex."""
    vertex: str
    level: int
    edges: tuple = ()
    tail: TailSpec = TailSpec(RMIN)

    def __post_init__(self):
        v = self.vertex
        for k, e in enumerate(reversed(self.edges)):
            if e.level != self.level - k or e.range != v:
                raise WindowError("left ray edges must chain into the anchor")
            v = e.source

    @property
    def start_level(self):
        return self.level - len(self.edges)

    @property
    def start_vertex(self):
        return self.edges[0].source if self.edges else self.vertex


def right_ray_of(desc: PathDescriptor, w: DiagramWindow, level: int) -> RightRay:
    """The part of a descriptor strictly beyond `level`, as a right ray."""
    hi = max(w.max_level, desc.core.end_level)
    realized = desc.realize(w, min(w.min_level, desc.core.start_level), hi)
    edges = tuple(realized.edges[level - realized.start_level:])
    vertex = edges[0].source if edges else realized.range
    return RightRay(vertex=vertex, level=level, edges=edges, tail=desc.right)


def left_ray_of(desc: PathDescriptor, w: DiagramWindow, level: int) -> LeftRay:
    """The part of a descriptor up to `level` inclusive, as a left ray."""
    lo = min(w.min_level, desc.core.start_level)
    realized = desc.realize(w, lo, max(w.max_level, desc.core.end_level))
    edges = tuple(realized.edges[:level - lo])
    vertex = edges[-1].range if edges else realized.source
    return LeftRay(vertex=vertex, level=level, edges=edges, tail=desc.left)


def _edge_term_s(st, w, e):
    """sum over f <_s e in the source fiber of nu_s(r(f))."""
    return sum(st.s(e.level, f.range)
               for f in w.s_fiber(e.level, e.source) if f.s_rank < e.s_rank)


def _edge_term_r(st, w, e):
    """sum over f <_r e in the range fiber of nu_r(s(f))."""
    return sum(st.r(e.level - 1, f.source)
               for f in w.r_fiber(e.level, e.range) if f.r_rank < e.r_rank)


def _geometric_total(blocks):
    """Sum of an infinite series whose visible per-cycle sums are `blocks`,
    assuming (and checking) a constant rational ratio in (0, 1)."""
    if all(b == 0 for b in blocks):
        return Fraction(0)
    if len(blocks) < 3 or blocks[0] == 0:
        raise UnsupportedTailError("not enough visible cycles to certify a geometric tail")
    ratio = Fraction(blocks[1], blocks[0])
    for a, b in zip(blocks, blocks[1:]):
        if a == 0 or Fraction(b, a) != ratio:
            raise UnsupportedTailError("tail series is not geometric with a constant ratio")
    if not 0 < ratio < 1:
        raise UnsupportedTailError(f"tail series ratio {ratio} not in (0, 1)")
    return blocks[0] / (1 - ratio)


def _pinned_right_tail_sum(st, w, tail, vertex, level):
    """Contribution of an id-pinned right tail starting after `level`."""
    cycle = 1 if tail.kind == HORIZONTAL else len(tail.cycle)
    terms = []
    v = vertex
    for k in range(level + 1, w.max_level + 1):
        e = w.edge_by_id(k, _pinned_id(tail, k))
        if e.source != v:
            raise WindowError(f"pinned tail breaks at level {k}")
        terms.append(_edge_term_s(st, w, e))
        v = e.range
    blocks = [sum(terms[i:i + cycle]) for i in range(0, len(terms) - cycle + 1, cycle)]
    return _geometric_total(blocks)


def _pinned_left_tail_sum(st, w, tail, vertex, level):
    cycle = 1 if tail.kind == HORIZONTAL else len(tail.cycle)
    terms = []
    v = vertex
    for k in range(level, w.min_level, -1):
        e = w.edge_by_id(k, _pinned_id(tail, k))
        if e.range != v:
            raise WindowError(f"pinned tail breaks at level {k}")
        terms.append(_edge_term_r(st, w, e))
        v = e.source
    blocks = [sum(terms[i:i + cycle]) for i in range(0, len(terms) - cycle + 1, cycle)]
    return _geometric_total(blocks)


def phi_plus(st: State, w: DiagramWindow, ray: RightRay) -> Fraction:
    """phi^v_s of a right ray: the nu_s-mass of {y <= ray} in X_v^+.

    Explicit edges contribute their strictly-smaller fiber sums; an SMin
    tail adds nothing, an SMax tail telescopes to nu_s at its anchor, and
    pinned tails are summed as certified geometric series.
    """
    total = sum(_edge_term_s(st, w, e) for e in ray.edges)
    tail = ray.tail
    if tail.kind == SMIN:
        return total
    if tail.kind == SMAX:
        return total + st.s(ray.end_level, ray.end_vertex)
    if tail.pinned:
        return total + _pinned_right_tail_sum(st, w, tail, ray.end_vertex, ray.end_level)
    raise UnsupportedTailError(f"phi_plus cannot sum a {tail.kind} right tail")


def phi_minus(st: State, w: DiagramWindow, ray: LeftRay) -> Fraction:
    """phi^v_r of a left ray, mirror of phi_plus with the r-order and nu_r."""
    total = sum(_edge_term_r(st, w, e) for e in ray.edges)
    tail = ray.tail
    if tail.kind == RMIN:
        return total
    if tail.kind == RMAX:
        return total + st.r(ray.start_level, ray.start_vertex)
    if tail.pinned:
        return total + _pinned_left_tail_sum(st, w, tail, ray.start_vertex, ray.start_level)
    raise UnsupportedTailError(f"phi_minus cannot sum a {tail.kind} left tail")


def phi_tail(st: State, w: DiagramWindow, x: PathDescriptor, y: PathDescriptor) -> Fraction:
    """phi^x_r(y) for right-tail-equivalent x, y: the signed nu_r-mass of the
    order interval between them, as the difference of two left-ray potentials."""
    from .path_space import tail_equivalent, PLUS

    depth = min(-w.min_level, w.max_level)
    n = tail_equivalent(w, x, y, PLUS, depth)
    if n is None:
        raise ValueError("phi_tail needs right-tail-equivalent descriptors")
    fx = phi_minus(st, w, left_ray_of(x, w, n))
    fy = phi_minus(st, w, left_ray_of(y, w, n))
    return fy - fx


def phi_shift_check(st: State, w: DiagramWindow, p: FinitePath, ray):
    """Both sides of the reindexing identity for phi across a finite path.

    For a left ray into s(p): phi^{s(p)}_r(x) vs phi^{r(p)}_r(xp) minus the
    nu_r-mass of the paths strictly below p in the r-order.  For a right ray
    from r(p): the s-order mirror.  Returns (lhs, rhs).
    """
    m, n = p.start_level, p.end_level
    if isinstance(ray, LeftRay):
        if ray.vertex != p.source or ray.level != m:
            raise WindowError("ray must end at s(p)")
        lhs = phi_minus(st, w, ray)
        extended = LeftRay(vertex=p.range, level=n, edges=ray.edges + p.edges, tail=ray.tail)
        corr = sum(st.r(m, q.source)
                   for q in finite_paths(w, m, n, rng=p.range)
                   if _path_lt_r(q, p))
        return lhs, phi_minus(st, w, extended) - corr
    if isinstance(ray, RightRay):
        if ray.vertex != p.range or ray.level != n:
            raise WindowError("ray must start at r(p)")
        lhs = phi_plus(st, w, ray)
        extended = RightRay(vertex=p.source, level=m, edges=p.edges + ray.edges, tail=ray.tail)
        corr = sum(st.s(n, q.range)
                   for q in finite_paths(w, m, n, src=p.source)
                   if _path_lt_s(q, p))
        return lhs, phi_plus(st, w, extended) - corr
    raise TypeError("ray must be a LeftRay or RightRay")


def _path_lt_r(q, p):
    from .core_diagram import compare_paths, LT
    return compare_paths(q, p, R) == LT


def _path_lt_s(q, p):
    from .core_diagram import compare_paths, LT
    return compare_paths(q, p, S) == LT


S_PAIR, R_PAIR, QUAD = "S-pair", "R-pair", "Quad"


@dataclass(frozen=True)
class ChartDatum:
    family: str          # S_PAIR, R_PAIR, or QUAD
    span: tuple          # (m, n)
    paths: tuple         # (p1, p2) or (p11, p12, p21, p22)

    def validate(self, w: DiagramWindow):
        m, n = self.span
        for p in self.paths:
            if p.start_level != m or p.end_level != n:
                raise WindowError("chart paths must cover the span exactly")
        if self.family == S_PAIR:
            p1, p2 = self.paths
            ok = successor(w, p1, S, SUCC)
            if ok is None or ok.ids() != p2.ids():
                raise WindowError("p2 must be the s-successor of p1")
        elif self.family == R_PAIR:
            p1, p2 = self.paths
            ok = successor(w, p1, R, SUCC)
            if ok is None or ok.ids() != p2.ids():
                raise WindowError("p2 must be the r-successor of p1")
        elif self.family == QUAD:
            p11, p12, p21, p22 = self.paths
            ss = successor(w, p11, S, SUCC)
            sr = successor(w, p11, R, SUCC)
            if ss is None or ss.ids() != p12.ids():
                raise WindowError("p12 must be the s-successor of p11")
            if sr is None or sr.ids() != p21.ids():
                raise WindowError("p21 must be the r-successor of p11")
            a = successor(w, p21, S, SUCC)
            b = successor(w, p12, R, SUCC)
            if a is None or b is None or a.ids() != p22.ids() or b.ids() != p22.ids():
                raise WindowError("p22 must close the successor square")
        else:
            raise ValueError(f"unknown chart family {self.family!r}")
        return self


def _ray_is_extremal(w, desc, level, side, which, maximal):
    """Is the part of desc beyond `level` (side RIGHT) or up to `level`
    (side LEFT) exactly the extremal ray of the stated polarity?"""
    prof = _tail_profile(w, desc, side, which, maximal)
    if prof is False:
        return False
    realized = desc.realize(w, w.min_level, w.max_level)
    span = (range(level + 1, w.max_level + 1) if side == RIGHT
            else range(w.min_level + 1, level + 1))
    for k in span:
        if not edge_is_extremal(w, realized.edge_at(k), which, maximal):
            return False
    if prof is None:
        raise InsufficientDepthError("extremal-ray exclusion undecidable at this depth")
    return True


def _restriction_ids(w, x, m, n):
    realized = x.realize(w, min(m, x.core.start_level), max(n, x.core.end_level))
    return tuple(realized.edge_at(k).id for k in range(m + 1, n + 1))


def psi_chart(st: State, w: DiagramWindow, datum: ChartDatum, x: PathDescriptor):
    """The chart coordinate(s) of x: one rational for pair charts, a pair for
    quads, with the branch offsets gluing the pieces along the seams."""
    m, n = datum.span
    ids = _restriction_ids(w, x, m, n)
    if datum.family == S_PAIR:
        p1, p2 = datum.paths
        if ids == p1.ids():
            if _ray_is_extremal(w, x, n, RIGHT, S, False):
                raise DomainError("x sits on the excluded s-min ray of V1")
            return phi_plus(st, w, right_ray_of(x, w, n)) - st.s(n, p1.range)
        if ids == p2.ids():
            if _ray_is_extremal(w, x, n, RIGHT, S, True):
                raise DomainError("x sits on the excluded s-max ray of V2")
            return phi_plus(st, w, right_ray_of(x, w, n))
        raise DomainError("x is outside the chart cylinder")
    if datum.family == R_PAIR:
        p1, p2 = datum.paths
        if ids == p1.ids():
            if _ray_is_extremal(w, x, m, LEFT, R, False):
                raise DomainError("x sits on the excluded r-min ray of V1")
            return phi_minus(st, w, left_ray_of(x, w, m)) - st.r(m, p1.source)
        if ids == p2.ids():
            if _ray_is_extremal(w, x, m, LEFT, R, True):
                raise DomainError("x sits on the excluded r-max ray of V2")
            return phi_minus(st, w, left_ray_of(x, w, m))
        raise DomainError("x is outside the chart cylinder")
    if datum.family != QUAD:
        raise ValueError(f"unknown chart family {datum.family!r}")
    p11, p12, p21, p22 = datum.paths
    branches = {p11.ids(): (1, 1), p12.ids(): (1, 2), p21.ids(): (2, 1), p22.ids(): (2, 2)}
    if ids not in branches:
        raise DomainError("x is outside the chart cylinder")
    i, j = branches[ids]
    # exclusions: i indexes the r side (left), j the s side (right)
    if _ray_is_extremal(w, x, m, LEFT, R, maximal=(i == 2)):
        raise DomainError(f"x sits on the excluded r-{'max' if i == 2 else 'min'} ray")
    if _ray_is_extremal(w, x, n, RIGHT, S, maximal=(j == 2)):
        raise DomainError(f"x sits on the excluded s-{'max' if j == 2 else 'min'} ray")
    fx = phi_minus(st, w, left_ray_of(x, w, m))
    fy = phi_plus(st, w, right_ray_of(x, w, n))
    dx = -st.r(m, p11.source) if i == 1 else Fraction(0)
    dy = -st.s(n, p11.range) if j == 1 else Fraction(0)
    return (fx + dx, fy + dy)


@dataclass(frozen=True)
class TransitionResult:
    status: str                      # constant / violation / empty / hypothesis_unmet
    constant: Optional[tuple] = None
    samples_used: int = 0
    witness: Optional[tuple] = None  # (x, diff1, diff2) on violation


def _random_segment_left(w, rng, lo, hi, end_vertex):
    """Random path over (lo, hi] ending at end_vertex, built right to left."""
    edges = []
    v = end_vertex
    for k in range(hi, lo, -1):
        fiber = w.r_fiber(k, v)
        e = fiber[rng.randrange(len(fiber))]
        edges.insert(0, e)
        v = e.source
    return tuple(edges)


def _random_segment_right(w, rng, lo, hi, start_vertex):
    edges = []
    v = start_vertex
    for k in range(lo + 1, hi + 1):
        fiber = w.s_fiber(k, v)
        e = fiber[rng.randrange(len(fiber))]
        edges.append(e)
        v = e.range
    return tuple(edges)


def sample_in_quad(w, datum, rng, pad=2):
    """A random descriptor in V(datum), with extremal tails just past the
    span; None when the draw lands on an excluded ray."""
    m, n = datum.span
    lo, hi = max(w.min_level, m - pad), min(w.max_level, n + pad)
    core_path = datum.paths[rng.randrange(len(datum.paths))]
    left_seg = _random_segment_left(w, rng, lo, m, core_path.source)
    right_seg = _random_segment_right(w, rng, n, hi, core_path.range)
    left_tail = TailSpec(RMAX if rng.random() < 0.5 else RMIN)
    right_tail = TailSpec(SMAX if rng.random() < 0.5 else SMIN)
    core = FinitePath(lo, left_seg + core_path.edges + right_seg)
    return PathDescriptor(left_tail, core, right_tail)


def chart_transition(st: State, w: DiagramWindow, p: ChartDatum, q: ChartDatum,
                     samples: int, seed: int) -> TransitionResult:
    """Sample the overlap of two quad charts and compare coordinates.

    Returns the constant offset psi^q - psi^p when every sampled point gives
    the same difference; a violation witness otherwise.
    """
    if p.family != QUAD or q.family != QUAD:
        raise ValueError("chart_transition compares quad charts")
    fiber_paths = [t for t in finite_paths(w, p.span[0], p.span[1])
                   if t.range == p.paths[0].range]
    hypothesis_met = len(fiber_paths) >= 3
    rng = random.Random(seed)
    diffs = []
    used = 0
    attempts = 0
    while used < samples and attempts < samples * 40:
        attempts += 1
        x = sample_in_quad(w, q, rng)
        try:
            vq = psi_chart(st, w, q, x)
            vp = psi_chart(st, w, p, x)
        except DomainError:
            continue
        except InsufficientDepthError:
            continue
        used += 1
        diff = (vq[0] - vp[0], vq[1] - vp[1])
        diffs.append((x, diff))
    if not used:
        return TransitionResult(status="empty")
    first = diffs[0][1]
    for x, d in diffs[1:]:
        if d != first:
            return TransitionResult(status="violation", samples_used=used,
                                    witness=(x, first, d))
    if not hypothesis_met:
        return TransitionResult(status="hypothesis_unmet", constant=first, samples_used=used)
    return TransitionResult(status="constant", constant=first, samples_used=used)


def path_in_ey(w, path: FinitePath, sigma_report=None) -> bool:
    """Depth-certified membership in the non-extremal path family: the path
    is extremal in none of the four senses and, when a singular scan is
    supplied, no scanned singular path passes through its cylinder."""
    from .core_diagram import path_is_extremal, SUCC, PRED
    for which in (S, R):
        for direction in (SUCC, PRED):
            if path_is_extremal(path, w, which, direction):
                return False
    if sigma_report is not None:
        for x in sigma_report.singular:
            realized = x.realize(w, path.start_level, path.end_level)
            if all(realized.edge_at(k).id == path.edge_at(k).id
                   for k in range(path.start_level + 1, path.end_level + 1)):
                return False
    return True


def find_quads(w: DiagramWindow, m: int, n: int, sigma_report=None, limit=None):
    """Quad chart data over [m, n]: quadruples of non-extremal paths closed
    under the two successor operations."""
    out = []
    for p11 in finite_paths(w, m, n):
        if not path_in_ey(w, p11, sigma_report):
            continue
        p12 = successor(w, p11, S, SUCC)
        p21 = successor(w, p11, R, SUCC)
        if p12 is None or p21 is None:
            continue
        a = successor(w, p21, S, SUCC)
        b = successor(w, p12, R, SUCC)
        if a is None or b is None or a.ids() != b.ids():
            continue
        p22 = a
        if not all(path_in_ey(w, t, sigma_report) for t in (p12, p21, p22)):
            continue
        datum = ChartDatum(QUAD, (m, n), (p11, p12, p21, p22))
        try:
            datum.validate(w)
        except WindowError:
            continue
        out.append(datum)
        if limit is not None and len(out) >= limit:
            break
    return out
