"""K-zero of the diagram algebras as integer-matrix direct limits, the
theta/sigma exact-sequence bookkeeping, and the state pairing that carries
the order structure.

Direct limits are never materialized as abstract groups outside the two
closed-form cases (all-unimodular, stationary 1x1); everything else is a
finite-stage report.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core_diagram import DiagramWindow, edge_matrix
from .linalg import SNFResult, identity, mat_eq, mat_mul, mat_vec, rank, smith_normal_form
from .states_charts import State


@dataclass(frozen=True)
class InductiveSystem:
    dims: tuple          # stage ranks |V_n|
    maps: tuple          # maps[k]: dims[k] -> dims[k+1] integer matrix

    def __post_init__(self):
        if len(self.maps) != len(self.dims) - 1:
            raise ValueError("need one map per consecutive stage pair")
        for k, m in enumerate(self.maps):
            if len(m) != self.dims[k + 1] or any(len(row) != self.dims[k] for row in m):
                raise ValueError(f"map {k} has the wrong shape")
            if any(x < 0 for row in m for x in row):
                raise ValueError(f"map {k} has negative entries")

    @classmethod
    def from_window(cls, w: DiagramWindow, m=None, n=None):
        m = w.min_level if m is None else m
        n = w.max_level if n is None else n
        dims = tuple(len(w.level(k).vertices) for k in range(m, n + 1))
        maps = tuple(tuple(tuple(row) for row in edge_matrix(w, k)) for k in range(m + 1, n + 1))
        return cls(dims=dims, maps=maps)

    def composite(self, i, j):
        """The map from stage i to stage j (0-based stages, i <= j)."""
        if not 0 <= i <= j < len(self.dims):
            raise IndexError("stage indices out of range")
        out = identity(self.dims[i])
        for k in range(i, j):
            out = mat_mul([list(r) for r in self.maps[k]], out)
        return out


@dataclass(frozen=True)
class StageReport:
    i: int
    j: int
    composite: tuple
    snf: SNFResult
    rank: int
    torsion: tuple       # invariant factors > 1 of the cokernel
    free_rank: int       # free rank of the cokernel

    def describe(self):
        tor = " + ".join(f"Z/{d}" for d in self.torsion) if self.torsion else "0"
        return (f"stage {self.i} -> {self.j}: rank {self.rank}, "
                f"coker = Z^{self.free_rank}" + (f" + {tor}" if tor != "0" else ""))


def k0_stage(sys: InductiveSystem, i: int, j: int) -> StageReport:
    """The finite-stage picture: the composite map, its Smith form, rank,
    and cokernel torsion."""
    comp = sys.composite(i, j)
    snf = smith_normal_form(comp)
    target = sys.dims[j]
    return StageReport(i=i, j=j, composite=tuple(tuple(r) for r in comp), snf=snf,
                       rank=snf.rank, torsion=snf.torsion, free_rank=target - snf.rank)


@dataclass(frozen=True)
class Classification:
    kind: str            # "free", "dyadic-like", "report"
    description: str
    rank_bound: int      # rank over Q of the final stage image
    stationary_multiplier: Optional[int] = None
    stages: tuple = ()

    @property
    def finitely_generated_prefix(self):
        return self.kind == "free"


def k0_classify(sys: InductiveSystem) -> Classification:
    """Closed forms where the finite prefix determines them: Z^d when every
    map is unimodular, Z[1/k] for a stationary 1x1 system; otherwise a
    finite-stage report.  The rank over Q of the full composite is always
    included (an unbounded-denominator limit signals infinite genus)."""
    n = len(sys.dims)
    full = sys.composite(0, n - 1) if n > 1 else identity(sys.dims[0])
    q_rank = rank(full)
    dets = [smith_normal_form([list(r) for r in m]) for m in sys.maps]
    unimodular = all(len(set(d.diagonal)) <= 1 and all(x == 1 for x in d.diagonal)
                     and len(m) == len(m[0]) for d, m in zip(dets, sys.maps))
    if unimodular and len(set(sys.dims)) == 1:
        d = sys.dims[0]
        return Classification(kind="free", description=f"Z^{d}", rank_bound=q_rank)
    if all(d == 1 for d in sys.dims):
        ks = {m[0][0] for m in sys.maps}
        if len(ks) == 1:
            k = ks.pop()
            if k == 1:
                return Classification(kind="free", description="Z", rank_bound=q_rank)
            return Classification(kind="dyadic-like", description=f"Z[1/{k}]",
                                  rank_bound=q_rank, stationary_multiplier=k)
    stages = tuple(k0_stage(sys, k, k + 1) for k in range(n - 1))
    return Classification(kind="report",
                          description=f"finite-stage system on dims {sys.dims}",
                          rank_bound=q_rank, stages=stages)


@dataclass(frozen=True)
class ThetaData:
    I: int
    J: int
    star: tuple          # pairs (i, j) with 1 <= i <= I < j <= I + J

    def __post_init__(self):
        for i, j in self.star:
            if not (1 <= i <= self.I < j <= self.I + self.J):
                raise ValueError(f"star pair {(i, j)} out of range")


@dataclass(frozen=True)
class SequenceReport:
    theta_matrix: tuple      # (I+J) x |star|
    sigma_vector: tuple
    kernel_basis: tuple
    kernel_rank: int
    coker_free_rank: int
    coker_torsion: tuple
    sigma_theta_zero: bool
    i_star_iso: bool
    exact: Optional[bool]    # shadow exactness: ker = 0, sigma iso on coker

    def describe(self):
        lines = [
            f"theta: Z^{len(self.theta_matrix[0]) if self.theta_matrix else 0} -> "
            f"Z^{len(self.theta_matrix)}",
            f"ker theta: rank {self.kernel_rank}",
            f"coker theta: Z^{self.coker_free_rank}"
            + ("".join(f" + Z/{d}" for d in self.coker_torsion)),
            f"sigma o theta = 0: {self.sigma_theta_zero}",
            f"i_* isomorphism: {self.i_star_iso}",
        ]
        return lines


def theta_sequence(td: ThetaData) -> SequenceReport:
    """Matrices of theta (pair -> sum of its endpoints) and sigma (+1 on the
    first block, -1 on the second), with kernel/cokernel via Smith form."""
    n = td.I + td.J
    cols = len(td.star)
    theta = [[0] * cols for _ in range(n)]
    for c, (i, j) in enumerate(td.star):
        theta[i - 1][c] += 1
        theta[j - 1][c] += 1
    sigma = [1] * td.I + [-1] * td.J
    sigma_theta_zero = all(
        sum(sigma[r] * theta[r][c] for r in range(n)) == 0 for c in range(cols))
    kern = tuple(tuple(v) for v in _kernel_cols(theta))
    snf = smith_normal_form(theta) if cols else None
    if cols:
        coker_free = n - snf.rank
        torsion = snf.torsion
    else:
        coker_free, torsion = n, ()
    i_star_iso = td.I == 1 or td.J == 1
    exact = None
    if cols:
        # shadow of the six-term sequence: injectivity of theta and sigma
        # inducing an isomorphism coker(theta) -> Z
        sigma_onto_coker = coker_free == 1 and not torsion and _sigma_iso_on_coker(theta, sigma)
        exact = (len(kern) == 0) and sigma_onto_coker
    return SequenceReport(
        theta_matrix=tuple(tuple(r) for r in theta),
        sigma_vector=tuple(sigma),
        kernel_basis=kern,
        kernel_rank=len(kern),
        coker_free_rank=coker_free,
        coker_torsion=torsion,
        sigma_theta_zero=sigma_theta_zero,
        i_star_iso=i_star_iso,
        exact=exact,
    )


def _kernel_cols(m):
    from .linalg import kernel_basis
    if not m or not m[0]:
        return []
    return kernel_basis(m)


def _sigma_iso_on_coker(theta, sigma):
    """sigma descends to coker(theta); iso onto Z iff some coset generator
    maps to +-1 and the image subgroup is all of Z."""
    n = len(theta)
    cols = len(theta[0])
    # image of sigma on a basis of Z^n modulo im(theta): since sigma(theta)=0,
    # sigma factors through the cokernel; it is onto iff gcd of sigma = 1.
    from math import gcd
    g = 0
    for v in sigma:
        g = gcd(g, abs(v))
    if g != 1:
        return False
    # injectivity: ker(sigma) must equal im(theta) up to rank/torsion, which
    # the caller already constrains via coker_free == 1 and no torsion.
    snf = smith_normal_form(theta)
    return snf.rank == n - 1


def state_pairing(st: State, level: int, klass) -> "Fraction":
    """The order functional <nu_s at level, class>; stage-compatible by the
    state equation."""
    from fractions import Fraction
    vec = st.nu_s[level]
    keys = sorted(vec)
    if len(klass) != len(keys):
        raise ValueError("class vector length does not match the level")
    return sum((Fraction(c) * vec[k] for c, k in zip(klass, keys)), Fraction(0))


def state_pairing_window(st: State, w: DiagramWindow, level: int, klass):
    """Same pairing but ordered by the window's vertex declaration order."""
    from fractions import Fraction
    verts = w.level(level).vertices
    if len(klass) != len(verts):
        raise ValueError("class vector length does not match the level")
    return sum((Fraction(c) * st.nu_s[level][v] for c, v in zip(klass, verts)), Fraction(0))


def surface_unimodular_check(sys: InductiveSystem) -> bool:
    """Every connecting map is square with determinant one."""
    from .linalg import det
    return all(len(m) == len(m[0]) and det([list(r) for r in m]) == 1 for m in sys.maps)
