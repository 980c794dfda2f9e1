"""Permutation pairs, the intersection form, interval exchange maps, the
endpoint-collision (Keane) check, and Veech's zippered rectangles.

All vectors are symbol-indexed dicts with Fraction values; permutations map
symbols to 1-based positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core_diagram import Alphabet
from .linalg import rank
from .reports import CERTIFIED, VIOLATED, CertificateItem, CertificateReport, fmt_rat


class HypothesisError(ValueError):
    """A genericity hypothesis needed by an induction step fails."""


class ConeError(ValueError):
    """tau is outside the suspension cone T+."""


@dataclass(frozen=True)
class PermutationPair:
    alphabet: Alphabet
    pi0: dict      # symbol -> position 1..d
    pi1: dict

    def __post_init__(self):
        d = len(self.alphabet)
        for pi in (self.pi0, self.pi1):
            if sorted(pi.values()) != list(range(1, d + 1)) or set(pi) != set(self.alphabet.symbols):
                raise ValueError("pi0/pi1 must be bijections alphabet -> 1..d")

    @classmethod
    def from_rows(cls, top, bottom, allow_small=False):
        symbols = tuple(top)
        if set(symbols) != set(bottom) or len(set(symbols)) != len(symbols):
            raise ValueError("rows must list the same symbols exactly once")
        if len(symbols) < 4 and not allow_small:
            raise ValueError(f"alphabet size {len(symbols)} < 4; pass allow_small=True for toy cases")
        return cls(
            alphabet=Alphabet(tuple(sorted(symbols))),
            pi0={a: i + 1 for i, a in enumerate(top)},
            pi1={a: i + 1 for i, a in enumerate(bottom)},
        )

    @classmethod
    def parse(cls, text, allow_small=False):
        """Parse 'A B C D / D C B A'."""
        top, _, bottom = text.partition("/")
        return cls.from_rows(tuple(top.split()), tuple(bottom.split()), allow_small=allow_small)

    @property
    def d(self):
        return len(self.alphabet)

    def row(self, eps):
        pi = self.pi0 if eps == 0 else self.pi1
        inv = {v: k for k, v in pi.items()}
        return tuple(inv[i] for i in range(1, self.d + 1))

    def alpha(self, eps):
        """Last symbol of row eps."""
        return self.row(eps)[-1]

    def beta(self, eps):
        """Symbol immediately right of alpha(1-eps) in row eps."""
        pi = self.pi0 if eps == 0 else self.pi1
        pos = pi[self.alpha(1 - eps)]
        if pos == self.d:
            raise HypothesisError(f"beta({eps}) undefined: alpha({1 - eps}) is last in row {eps}")
        return self.row(eps)[pos]

    def is_irreducible(self):
        inv0 = {v: k for k, v in self.pi0.items()}
        for k in range(1, self.d):
            if {self.pi1[inv0[i]] for i in range(1, k + 1)} == set(range(1, k + 1)):
                return False
        return True

    def reduction(self):
        """Canonical class key pi1 o pi0^{-1} as a position tuple."""
        inv0 = {v: k for k, v in self.pi0.items()}
        return tuple(self.pi1[inv0[i]] for i in range(1, self.d + 1))

    def __str__(self):
        return " ".join(self.row(0)) + " / " + " ".join(self.row(1))


def omega(perm: PermutationPair):
    """The antisymmetric intersection form, rows/cols in alphabet order."""
    syms = perm.alphabet.symbols
    p0, p1 = perm.pi0, perm.pi1
    out = []
    for a in syms:
        row = []
        for b in syms:
            if p1[a] > p1[b] and p0[a] < p0[b]:
                row.append(1)
            elif p1[a] < p1[b] and p0[a] > p0[b]:
                row.append(-1)
            else:
                row.append(0)
        out.append(row)
    return out


def omega_apply(perm, vec):
    syms = perm.alphabet.symbols
    m = omega(perm)
    return {a: sum(m[i][j] * vec[b] for j, b in enumerate(syms)) for i, a in enumerate(syms)}


def genus(perm: PermutationPair):
    """g with 2g = rank of the intersection form."""
    r = rank(omega(perm))
    assert r % 2 == 0
    return r // 2


def in_cone(perm, tau):
    """tau in T+: positive top prefix sums, negative bottom ones (k < d)."""
    top, bottom = perm.row(0), perm.row(1)
    for k in range(1, perm.d):
        if sum(tau[a] for a in top[:k]) <= 0:
            return False
        if sum(tau[a] for a in bottom[:k]) >= 0:
            return False
    return True


def heights(perm, tau):
    """h = -Omega(tau); strictly positive whenever tau lies in T+."""
    return {a: -x for a, x in omega_apply(perm, tau).items()}


@dataclass(frozen=True)
class TripleData:
    perm: PermutationPair
    lam: dict
    tau: dict

    def __post_init__(self):
        if not self.perm.is_irreducible():
            raise ValueError("permutation must be irreducible")
        for a in self.perm.alphabet:
            if self.lam[a] <= 0:
                raise ValueError(f"lambda_{a} must be positive")
        if not in_cone(self.perm, self.tau):
            raise ConeError("tau outside T+ for this permutation")

    @property
    def h(self):
        return heights(self.perm, self.tau)

    @property
    def area(self):
        h = self.h
        return sum(self.lam[a] * h[a] for a in self.perm.alphabet)

    def total_length(self):
        return sum(self.lam.values())


def interval_bounds(perm, lam, eps=0):
    """Left/right endpoints of the blocks in row-eps order."""
    out = {}
    acc = Fraction(0)
    for a in perm.row(eps):
        out[a] = (acc, acc + lam[a])
        acc += lam[a]
    return out


def iet_translations(perm, lam):
    return omega_apply(perm, lam)


def iet_apply(perm, lam, x):
    """The interval exchange map: translate each top block into bottom order."""
    total = sum(lam.values())
    if not (0 <= x < total):
        raise ValueError(f"x = {x} outside [0, {total})")
    w = iet_translations(perm, lam)
    for a, (lo, hi) in interval_bounds(perm, lam, 0).items():
        if lo <= x < hi:
            return x + w[a]
    raise AssertionError("unreachable: blocks tile the interval")


def keane_check(perm, lam, depth) -> CertificateReport:
    """Exact endpoint-orbit check: f^m(left endpoint of I_alpha) never hits a
    block endpoint other than 0, for 1 <= m <= depth."""
    bounds = interval_bounds(perm, lam, 0)
    targets = {bounds[g][0]: g for g in perm.alphabet if perm.pi0[g] != 1}
    items = []
    for a in perm.alphabet:
        x = bounds[a][0]
        hit = None
        for m in range(1, depth + 1):
            x = iet_apply(perm, lam, x)
            if x in targets:
                hit = (m, targets[x])
                break
        if hit is None:
            items.append(CertificateItem(f"orbit of left endpoint of I_{a}", CERTIFIED,
                                         f"no collision through depth {depth}"))
        else:
            items.append(CertificateItem(f"orbit of left endpoint of I_{a}", VIOLATED,
                                         f"f^{hit[0]} hits left endpoint of I_{hit[1]}"))
    return CertificateReport(items=tuple(items))


@dataclass(frozen=True)
class Rect:
    symbol: str
    side: int            # 0 top, 1 bottom
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0


@dataclass(frozen=True)
class Zipper:
    symbol: str
    side: int
    x: Fraction
    y0: Fraction
    y1: Fraction


@dataclass(frozen=True)
class ZipperedRectangles:
    rects: tuple
    zippers: tuple
    area: Fraction


def zippered(triple: TripleData) -> ZipperedRectangles:
    """Rectangles of width lambda_a and height h_a plus the zipper segments,
    with exact rational coordinates; top bases tile in pi0 order, bottom in pi1."""
    perm, lam, tau = triple.perm, triple.lam, triple.tau
    h = triple.h
    rects, zips = [], []
    for eps in (0, 1):
        acc = Fraction(0)
        tacc = Fraction(0)
        for a in perm.row(eps):
            x0, x1 = acc, acc + lam[a]
            acc = x1
            tacc += tau[a]
            if eps == 0:
                rects.append(Rect(a, 0, x0, x1, Fraction(0), h[a]))
                zips.append(Zipper(a, 0, x1, Fraction(0), tacc))
            else:
                rects.append(Rect(a, 1, x0, x1, -h[a], Fraction(0)))
                zips.append(Zipper(a, 1, x1, tacc, Fraction(0)))
    return ZipperedRectangles(rects=tuple(rects), zippers=tuple(zips), area=triple.area)
