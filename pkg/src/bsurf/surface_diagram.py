"""The ordered bi-infinite diagram built from zippered-rectangle data.

Every level's vertex set is the alphabet; the edge set at level k belongs to
the inverse-induction step taking the level-(k-1) triple to the level-k
triple: one horizontal edge per symbol plus a single non-horizontal edge
determined by the step type, ordered so the horizontal edge is r-minimal
and the type decides the s-order.  The canonical state reads nu_r from the
widths and nu_s from the heights at each level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .core_diagram import DiagramWindow, Edge, FinitePath, Level, edge_matrix
from .iet_zip import HypothesisError, TripleData
from .induction import rh_step, rv_step, tau_type
from .path_space import PathDescriptor, horizontal_tail, sigma_scan, standing_hypotheses_check
from .reports import (CERTIFIED, INCONCLUSIVE, VIOLATED, CertificateItem,
                      CertificateReport)
from .states_charts import State

NONHORIZONTAL_ID = "*"


class BuildError(ValueError):
    """An induction hypothesis failed while generating the diagram."""

    def __init__(self, level, message):
        super().__init__(f"level {level}: {message}")
        self.level = level


@dataclass(frozen=True)
class LevelRecord:
    level: int
    triple: TripleData   # the triple sitting at this level
    direction: str       # "seed", "RH" (levels > 0) or "RV" (levels < 0)


@dataclass(frozen=True)
class SurfaceDiagram:
    window: DiagramWindow
    state: State
    triple_log: tuple     # LevelRecord per level, ascending

    @property
    def alphabet(self):
        return self.triple_log[0].triple.perm.alphabet

    def record(self, level):
        for rec in self.triple_log:
            if rec.level == level:
                return rec
        raise KeyError(level)

    @property
    def seed(self):
        return self.record(0).triple


def _edges_for_step(level, before: TripleData):
    """Edge set E_level for the step leaving `before`: horizontal edges plus
    the branching edge from beta(eps) to alpha(1-eps), with the horizontal
    edge r-minimal and the type-eps rule fixing the s-order."""
    perm = before.perm
    eps, _ = tau_type(perm, before.tau)
    src = perm.beta(eps)
    rng = perm.alpha(1 - eps)
    edges = []
    for a in perm.alphabet:
        s_rank = (1 if eps == 0 else 0) if a == src else 0
        edges.append(Edge(level=level, id=a, source=a, range=a,
                          r_rank=0, s_rank=s_rank))
    nh = Edge(level=level, id=NONHORIZONTAL_ID, source=src, range=rng,
              r_rank=1, s_rank=0 if eps == 0 else 1)
    return tuple(edges) + (nh,), eps


def _triple_chain(triple: TripleData, m: int, n: int):
    """LevelRecords for levels m..n with `triple` at level 0: RH steps
    upward, RV steps downward."""
    records = {0: LevelRecord(0, triple, "seed")}
    t = triple
    for k in range(1, n + 1):
        try:
            step = rh_step(t)
        except HypothesisError as exc:
            raise BuildError(k, str(exc))
        records[k] = LevelRecord(k, step.after, "RH")
        t = step.after
    t = triple
    for k in range(0, m, -1):
        try:
            step = rv_step(t)
        except HypothesisError as exc:
            raise BuildError(k - 1, str(exc))
        records[k - 1] = LevelRecord(k - 1, step.after, "RV")
        t = step.after
    return records


def build(triple: TripleData, m: int, n: int) -> SurfaceDiagram:
    """The diagram window on [m, n] with its canonical state.

    Needs the RH run defined through level n and the RV run through |m|; a
    hypothesis failure surfaces as BuildError carrying the failing level.
    """
    if not (m <= 0 <= n and m < n):
        raise ValueError("window must satisfy m <= 0 <= n with m < n")
    records = _triple_chain(triple, m, n)
    symbols = triple.perm.alphabet.symbols
    levels = tuple(Level(k, symbols) for k in range(m, n + 1))
    edges = tuple(_edges_for_step(k, records[k - 1].triple)[0] for k in range(m + 1, n + 1))

    def generator(window, direction):
        lo, hi = window.min_level, window.max_level
        if direction == "right":
            full = _triple_chain(triple, lo, hi + 1)
            return Level(hi + 1, symbols), _edges_for_step(hi + 1, full[hi].triple)[0]
        full = _triple_chain(triple, lo - 1, hi)
        return Level(lo - 1, symbols), _edges_for_step(lo, full[lo - 1].triple)[0]

    window = DiagramWindow(levels=levels, edges=edges, generator=generator)
    state = _canonical_state(records, m, n)
    log = tuple(records[k] for k in range(m, n + 1))
    return SurfaceDiagram(window=window, state=state, triple_log=log)


def _canonical_state(records, m, n) -> State:
    nu_r, nu_s = {}, {}
    for k in range(m, n + 1):
        t = records[k].triple
        nu_r[k] = dict(t.lam)
        nu_s[k] = dict(t.h)
    return State(nu_r=nu_r, nu_s=nu_s)


def extend_state(sd: SurfaceDiagram, window: DiagramWindow) -> State:
    """The canonical state on a (possibly wider) window of the same diagram."""
    records = _triple_chain(sd.seed, window.min_level, window.max_level)
    return _canonical_state(records, window.min_level, window.max_level)


def widened(sd: SurfaceDiagram, lo: int, hi: int) -> SurfaceDiagram:
    """The same diagram on a window covering [lo, hi]."""
    lo = min(lo, sd.window.min_level)
    hi = max(hi, sd.window.max_level)
    return build(sd.seed, lo, hi)


def shift(sd: SurfaceDiagram, steps: int = 1) -> SurfaceDiagram:
    """Relabel levels k -> k - steps, structure untouched."""
    w = sd.window
    levels = tuple(Level(lv.index - steps, lv.vertices) for lv in w.levels)
    edges = tuple(tuple(replace(e, level=e.level - steps) for e in es) for es in w.edges)
    window = DiagramWindow(levels=levels, edges=edges, generator=None)
    state = State(nu_r={k - steps: v for k, v in sd.state.nu_r.items()},
                  nu_s={k - steps: v for k, v in sd.state.nu_s.items()})
    log = tuple(LevelRecord(r.level - steps, r.triple, r.direction) for r in sd.triple_log)
    return SurfaceDiagram(window=window, state=state, triple_log=log)


def horizontal_paths(sd: SurfaceDiagram):
    """The |A| constant-symbol descriptors; each is r-minimal at every level."""
    w = sd.window
    out = []
    for a in sd.alphabet:
        edges = tuple(w.edge_by_id(k, a) for k in range(w.min_level + 1, w.max_level + 1))
        core = FinitePath(w.min_level, edges)
        assert all(e.r_rank == 0 for e in edges)
        out.append(PathDescriptor(horizontal_tail(a), core, horizontal_tail(a)))
    return tuple(out)


def _first_symbols(sd: SurfaceDiagram):
    perm = sd.seed.perm
    return perm.row(0)[0], perm.row(1)[0]


def _q_closure(sd: SurfaceDiagram, target, maximal, depth):
    """Pull {target} back through the s-extremal edges from level depth,
    recording the level (if any) where it saturates the vertex set."""
    w = sd.window.ensure_span(-depth, depth)
    current = {target}
    history = [(depth, tuple(sorted(current)))]
    saturated_at = None
    for k in range(depth, -depth, -1):
        nxt = set()
        for v in w.level(k - 1).vertices:
            fiber = w.s_fiber(k, v)
            e = fiber[-1] if maximal else fiber[0]
            if e.range in current:
                nxt.add(v)
        current = nxt
        history.append((k - 1, tuple(sorted(current))))
        if saturated_at is None and len(current) == len(sd.alphabet):
            saturated_at = k - 1
    return history, saturated_at


def s_extreme_classes(sd: SurfaceDiagram, depth: int):
    """Certify that eventually-s-min paths stabilize on the horizontal path
    of the first top-row symbol and eventually-s-max paths on the first
    bottom-row symbol's; returns the two representatives and certificates."""
    a0, a1 = _first_symbols(sd)
    _, sat_min = _q_closure(sd, a0, maximal=False, depth=depth)
    _, sat_max = _q_closure(sd, a1, maximal=True, depth=depth)
    items = []
    for name, sym, sat in (("s-min class", a0, sat_min), ("s-max class", a1, sat_max)):
        if sat is not None:
            items.append(CertificateItem(name, CERTIFIED,
                                         f"pullback of {{{sym}}} saturates at level {sat}"))
        else:
            items.append(CertificateItem(name, INCONCLUSIVE,
                                         f"pullback of {{{sym}}} never saturates within depth {depth}"))
    by_symbol = {d.left.symbol: d for d in horizontal_paths(sd)}
    return by_symbol[a0], by_symbol[a1], CertificateReport(items=tuple(items))


def _branch_chain(sd: SurfaceDiagram, w, level, s_maximal, depth):
    """Representative of the branch family at `level`: the branching-fiber
    edge that is NOT s-extremal of the stated polarity, then the s-extremal
    chain out to `depth`."""
    branch_src = next(e.source for e in w.edge_set(level) if e.id == NONHORIZONTAL_ID)
    fiber = w.s_fiber(level, branch_src)
    e0 = fiber[0] if s_maximal else fiber[-1]
    edges = [e0]
    v = e0.range
    for k in range(level + 1, depth + 1):
        f = w.s_fiber(k, v)
        e = f[-1] if s_maximal else f[0]
        edges.append(e)
        v = e.range
    return FinitePath(level - 1, tuple(edges))


def _order_step_check(sd, w, level, s_maximal, depth):
    """True/False: the pinned chains decide whether every member of the
    branch family at `level` precedes every member at `level+1` in the
    r-order; None when the chains have not merged inside the window.

    The chains always differ at level+1, so the comparison the free left
    completions inherit is decided at the chains' last disagreement.
    """
    x = _branch_chain(sd, w, level, s_maximal, depth)
    y = _branch_chain(sd, w, level + 1, s_maximal, depth)
    last_diff = None
    for k in range(depth, level, -1):
        if x.edge_at(k).id != y.edge_at(k).id:
            last_diff = k
            break
    if last_diff is None:
        return None
    ex, ey = x.edge_at(last_diff), y.edge_at(last_diff)
    if ex.range != ey.range:
        return None
    return ex.r_rank < ey.r_rank


def verify_flatness(sd: SurfaceDiagram, depth: int) -> CertificateReport:
    """Two independent routes to emptiness of the singular set: the direct
    scan, and r-monotonicity of the two branch families."""
    w = sd.window.ensure_span(-(depth + 6), depth + 6)
    report = sigma_scan(w, depth)
    items = []
    if report.singular:
        items.append(CertificateItem("singular scan", VIOLATED,
                                     f"{len(report.singular)} singular paths at depth {depth}"))
    elif report.inconclusive:
        items.append(CertificateItem("singular scan", INCONCLUSIVE,
                                     f"{len(report.inconclusive)} candidates undecided"))
    else:
        items.append(CertificateItem("singular scan", CERTIFIED,
                                     f"no singular paths with pivots in [-{depth}, {depth}]"))
    bad = None
    undecided = []
    for s_maximal, name in ((True, "Y"), (False, "Z")):
        for level in range(-depth, depth):
            ok = _order_step_check(sd, w, level, s_maximal, w.max_level)
            if ok is None:
                undecided.append((name, level))
            elif not ok:
                bad = (name, level)
                break
        if bad:
            break
    if bad:
        items.append(CertificateItem("branch-family order", VIOLATED,
                                     f"{bad[0]} family fails at level {bad[1]}"))
    elif undecided:
        items.append(CertificateItem("branch-family order", INCONCLUSIVE,
                                     f"{len(undecided)} comparisons undecided at this depth"))
    else:
        items.append(CertificateItem("branch-family order", CERTIFIED,
                                     f"both branch families r-monotone on [-{depth}, {depth}]"))
    return CertificateReport(items=tuple(items))


def verify_standard(sd: SurfaceDiagram, depth: int, branch_horizon: int = 400) -> CertificateReport:
    """The standing assumptions plus the surface-specific facts: the two
    s-extreme horizontal paths are r-minimal, and their right-tail classes
    meet branching fibers (so avoid the r-maximal family)."""
    w = sd.window.ensure_span(-(depth + 1), depth + 1)
    base = standing_hypotheses_check(w, depth)
    items = list(base.items)
    x1, x2, cls_report = s_extreme_classes(sd, depth)
    items.extend(cls_report.items)
    ok = True
    for d in (x1, x2):
        realized = d.realize(w, -depth, depth)
        if any(e.r_rank != 0 for e in realized.edges):
            ok = False
    items.append(CertificateItem(
        "s-extreme subset r-min", CERTIFIED if ok else VIOLATED,
        "both horizontal representatives are r-minimal on the window"))
    want = {x1.left.symbol, x2.left.symbol}
    hits = {a: None for a in want}
    k = 1
    while not all(hits.values()) and k <= branch_horizon:
        if k > w.max_level:
            w = w.extended("right")
        for e in w.edge_set(k):
            if e.id == NONHORIZONTAL_ID and e.range in hits and hits[e.range] is None:
                hits[e.range] = k
        k += 1
    if all(hits.values()):
        detail = ", ".join(f"{a} at level {lvl}" for a, lvl in sorted(hits.items()))
        items.append(CertificateItem("tail classes avoid r-max", CERTIFIED,
                                     f"branching lands on both class symbols ({detail})"))
    else:
        missing = sorted(a for a, lvl in hits.items() if lvl is None)
        items.append(CertificateItem("tail classes avoid r-max", INCONCLUSIVE,
                                     f"no branching onto {missing} within {branch_horizon} levels"))
    return CertificateReport(items=tuple(items))


def edge_matrices(sd: SurfaceDiagram):
    """The per-level count matrices, symbol order = alphabet order."""
    return {n: edge_matrix(sd.window, n)
            for n in range(sd.window.min_level + 1, sd.window.max_level + 1)}
