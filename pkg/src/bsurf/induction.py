"""Rauzy-Veech induction, its inverse, and the renormalized dynamics.

A step on (pi, lambda, tau) is recorded with its type, winner, and the
unimodular transition matrix (Theta for the forward cut, Psi for the inverse
direction); lambda/tau/h stay exact rationals throughout.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .iet_zip import HypothesisError, PermutationPair, TripleData, heights, omega
from .linalg import det, identity, mat_mul, transpose

RV, RH = "RV", "RH"
PLUS, MINUS = "Plus", "Minus"


@dataclass(frozen=True)
class InductionStep:
    direction: str       # RV or RH
    type: int            # 0 or 1
    winner: str          # lambda-winner (RV) / tau-winner (RH)
    other: str           # lambda-loser (RV) / the cut symbol beta(eps) (RH)
    matrix: tuple        # Theta (RV) or Psi (RH), rows/cols in alphabet order
    before: TripleData
    after: TripleData


def _sym_matrix(symbols, extra):
    """Identity plus a single 1 at (row_symbol, col_symbol)."""
    n = len(symbols)
    idx = {a: i for i, a in enumerate(symbols)}
    m = identity(n)
    r, c = extra
    m[idx[r]][idx[c]] += 1
    return tuple(tuple(row) for row in m)


def lambda_type(perm: PermutationPair, lam):
    """0 when the top-last block is wider, 1 when the bottom-last is."""
    a0, a1 = perm.alpha(0), perm.alpha(1)
    if lam[a0] == lam[a1]:
        raise HypothesisError("lambda_{alpha(0)} == lambda_{alpha(1)}: Keane hypothesis violated")
    eps = 0 if lam[a0] > lam[a1] else 1
    return eps, perm.alpha(eps), perm.alpha(1 - eps)


def tau_type(perm: PermutationPair, tau):
    """0 when sum(tau) > 0, 1 when negative; tau-winner is alpha(1-eps)."""
    s = sum(tau.values())
    if s == 0:
        raise HypothesisError("sum tau == 0: RH hypothesis violated")
    eps = 0 if s > 0 else 1
    return eps, perm.alpha(1 - eps)


def _rv_perm(perm, eps):
    top, bottom = perm.row(0), perm.row(1)
    a0, a1 = top[-1], bottom[-1]
    if eps == 0:
        nb = []
        for s in bottom[:-1]:
            nb.append(s)
            if s == a0:
                nb.append(a1)
        return top, tuple(nb)
    nt = []
    for s in top[:-1]:
        nt.append(s)
        if s == a1:
            nt.append(a0)
    return tuple(nt), bottom


def _rh_perm(perm, eps):
    top, bottom = perm.row(0), perm.row(1)
    cut = perm.beta(eps)
    if eps == 0:
        i = top.index(perm.alpha(1))
        nt = top[:i + 1] + top[i + 2:] + (cut,)
        return nt, bottom
    i = bottom.index(perm.alpha(0))
    nb = bottom[:i + 1] + bottom[i + 2:] + (cut,)
    return top, nb


def rv_step(triple: TripleData) -> InductionStep:
    """One forward cut: the winner block swallows lambda and tau of the loser."""
    perm = triple.perm
    eps, winner, loser = lambda_type(perm, triple.lam)
    top, bottom = _rv_perm(perm, eps)
    new_perm = PermutationPair.from_rows(top, bottom, allow_small=True)
    lam = dict(triple.lam)
    tau = dict(triple.tau)
    lam[winner] = lam[winner] - lam[loser]
    tau[winner] = tau[winner] - tau[loser]
    theta = _sym_matrix(perm.alphabet.symbols, (loser, winner))
    after = TripleData(new_perm, lam, tau)
    return InductionStep(RV, eps, winner, loser, theta, triple, after)


def rh_step(triple: TripleData) -> InductionStep:
    """One inverse cut: extends the base by the cut block beta(eps)."""
    perm = triple.perm
    eps, winner = tau_type(perm, triple.tau)
    cut = perm.beta(eps)
    top, bottom = _rh_perm(perm, eps)
    new_perm = PermutationPair.from_rows(top, bottom, allow_small=True)
    lam = dict(triple.lam)
    tau = dict(triple.tau)
    lam[winner] = lam[winner] + lam[cut]
    tau[winner] = tau[winner] + tau[cut]
    psi = _sym_matrix(perm.alphabet.symbols, (winner, cut))
    after = TripleData(new_perm, lam, tau)
    return InductionStep(RH, eps, winner, cut, psi, triple, after)


def renorm_step(triple: TripleData, side: str):
    """Renormalized induction on the cross-section |h|_1 = const (Plus, RH)
    or |lambda|_1 = const (Minus, RV).

    The rescale factor is kept as the exact rational e^{-t_R^+} (resp.
    e^{+t_R^-}); the time itself is -log(scale), recoverable for display.
    """
    perm = triple.perm
    if side == PLUS:
        h = triple.h
        _, winner = tau_type(perm, triple.tau)
        scale = 1 - Fraction(h[winner], sum(h.values()))
        scaled = TripleData(perm,
                            {a: x * scale for a, x in triple.lam.items()},
                            {a: x / scale for a, x in triple.tau.items()})
        return rh_step(scaled), scale
    if side == MINUS:
        _, _, loser = lambda_type(perm, triple.lam)
        scale = 1 - Fraction(triple.lam[loser], sum(triple.lam.values()))
        scaled = TripleData(perm,
                            {a: x / scale for a, x in triple.lam.items()},
                            {a: x * scale for a, x in triple.tau.items()})
        return rv_step(scaled), scale
    raise ValueError(f"side must be {PLUS!r} or {MINUS!r}")


@dataclass(frozen=True)
class RauzyGraph:
    nodes: tuple         # class keys (pi1 o pi0^{-1} tuples)
    representatives: dict
    edges: tuple         # (from_key, type, to_key)

    def out_edges(self, key):
        return [e for e in self.edges if e[0] == key]


def rauzy_graph(perm: PermutationPair) -> RauzyGraph:
    """BFS closure of the class of perm under both induction types."""
    if not perm.is_irreducible():
        raise ValueError("reducible permutation has no Rauzy class")
    start = perm.reduction()
    reps = {start: perm}
    edges = []
    queue = deque([perm])
    seen = {start}
    while queue:
        p = queue.popleft()
        for eps in (0, 1):
            top, bottom = _rv_perm(p, eps)
            child = PermutationPair.from_rows(top, bottom, allow_small=True)
            k = child.reduction()
            edges.append((p.reduction(), eps, k))
            if k not in seen:
                seen.add(k)
                reps[k] = child
                queue.append(child)
    nodes = tuple(sorted(seen))
    return RauzyGraph(nodes=nodes, representatives=reps, edges=tuple(sorted(edges)))


def density_preimages(perm: PermutationPair, h, eps):
    """The two renormalized-RH preimages of (pi, h) on the unit simplex."""
    aw = perm.alpha(1 - eps)
    c = h[aw]
    out = {}
    for a in perm.alphabet:
        if a == perm.alpha(eps):
            out[a] = (h[a] + c) / (1 + c)
        else:
            out[a] = h[a] / (1 + c)
    return out


def density_jacobian_closed_form(perm, h, eps):
    return (1 + h[perm.alpha(1 - eps)]) ** (-perm.d)


def density_partials_matrix(perm, h, eps):
    """The raw |A| x |A| matrix of partial derivatives of the preimage map."""
    syms = perm.alphabet.symbols
    ae, aw = perm.alpha(eps), perm.alpha(1 - eps)
    c = h[aw]
    t = 1 + c
    m = []
    for a in syms:
        row = []
        for b in syms:
            if a != ae:
                row.append(Fraction((1 if a == b else 0) * t - (h[a] if b == aw else 0), t * t))
            elif b == ae:
                row.append(Fraction(1, t))
            elif b == aw:
                row.append(Fraction(1 + h[ae], t * t))
            else:
                row.append(Fraction(0))
        m.append(row)
    return m


def density_jacobian_bruteforce(perm, h, eps):
    """Simplex-chart determinant of the partials matrix.

    The preimage map fixes the simplex |h|_1 = 1, so its Jacobian is the
    determinant in an affine chart: drop the last coordinate and pull the
    constraint through the chain rule, K_ij = J_ij - J_i,last.
    """
    m = density_partials_matrix(perm, h, eps)
    n = len(m)
    k = [[m[i][j] - m[i][n - 1] for j in range(n - 1)] for i in range(n - 1)]
    return det(k)


def _density(h):
    out = Fraction(1)
    for x in h.values():
        out /= x
    return out


@dataclass(frozen=True)
class DensityReport:
    samples: int
    identity_failures: tuple
    jacobian_failures: tuple
    preimage_norm_failures: tuple

    @property
    def ok(self):
        return not (self.identity_failures or self.jacobian_failures or self.preimage_norm_failures)


def random_simplex_point(symbols, rng, denom_bound=80):
    """A strictly positive rational point with coordinate sum 1."""
    while True:
        parts = [Fraction(rng.randint(1, denom_bound), rng.randint(1, denom_bound)) for _ in symbols]
        total = sum(parts)
        if all(p > 0 for p in parts):
            return {a: p / total for a, p in zip(symbols, parts)}


def density_identity_check(perm: PermutationPair, samples: int, seed: int,
                           jacobian_samples: int = 0) -> DensityReport:
    """Sample rational h on the simplex and verify, exactly:
    D(F_0(h))|J_0| + D(F_1(h))|J_1| = D(h), preimage normalization, and
    (on jacobian_samples of them) closed-form vs brute-force Jacobians."""
    rng = random.Random(seed)
    id_fail, jac_fail, norm_fail = [], [], []
    for k in range(samples):
        h = random_simplex_point(perm.alphabet.symbols, rng)
        total = Fraction(0)
        for eps in (0, 1):
            pre = density_preimages(perm, h, eps)
            if sum(pre.values()) != 1:
                norm_fail.append((k, eps))
            total += _density(pre) * density_jacobian_closed_form(perm, h, eps)
        if total != _density(h):
            id_fail.append(k)
        if k < jacobian_samples:
            for eps in (0, 1):
                if density_jacobian_bruteforce(perm, h, eps) != density_jacobian_closed_form(perm, h, eps):
                    jac_fail.append((k, eps))
    return DensityReport(samples=samples, identity_failures=tuple(id_fail),
                         jacobian_failures=tuple(jac_fail),
                         preimage_norm_failures=tuple(norm_fail))


@dataclass(frozen=True)
class CompletenessReport:
    depth: int
    rh_wins: dict        # symbol -> count of tau-wins along the RH run
    rv_wins: dict        # symbol -> count of lambda-wins along the RV run
    rh_failure: tuple    # (step index, message) or ()
    rv_failure: tuple

    @property
    def certified(self):
        if self.rh_failure or self.rv_failure:
            return False
        return all(self.rh_wins.values()) and all(self.rv_wins.values())


def completeness_check(triple: TripleData, depth: int) -> CompletenessReport:
    """Run depth RH steps and depth RV steps, recording winners per symbol."""
    symbols = triple.perm.alphabet.symbols
    rh_wins = {a: 0 for a in symbols}
    rv_wins = {a: 0 for a in symbols}
    rh_failure = rv_failure = ()
    t = triple
    for k in range(depth):
        try:
            step = rh_step(t)
        except HypothesisError as exc:
            rh_failure = (k, str(exc))
            break
        rh_wins[step.winner] += 1
        t = step.after
    t = triple
    for k in range(depth):
        try:
            step = rv_step(t)
        except HypothesisError as exc:
            rv_failure = (k, str(exc))
            break
        rv_wins[step.winner] += 1
        t = step.after
    return CompletenessReport(depth=depth, rh_wins=rh_wins, rv_wins=rv_wins,
                              rh_failure=rh_failure, rv_failure=rv_failure)


def step_matrix_det(step: InductionStep):
    return det([list(r) for r in step.matrix])


def conjugation_holds(step: InductionStep) -> bool:
    """Theta Omega_pi Theta^T == Omega_pi' for an RV step."""
    if step.direction != RV:
        raise ValueError("conjugation check applies to RV steps")
    th = [list(r) for r in step.matrix]
    lhs = mat_mul(mat_mul(th, omega(step.before.perm)), transpose(th))
    return lhs == omega(step.after.perm)
