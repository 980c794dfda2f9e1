"""Exact integer and rational linear algebra on plain list-of-list matrices.

Everything here works with Python ints and fractions.Fraction; no floats.
Matrices are lists of equal-length rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k, "shape mismatch"
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        row = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(m):
                    row[j] += x * bt[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_eq(a, b):
    return len(a) == len(b) and all(ra == rb for ra, rb in zip(a, b))


def rank(a):
    """Rank over Q, by fraction-free style elimination on a copy."""
    if not a:
        return 0
    rows = [[Fraction(x) for x in row] for row in a]
    n, m = len(rows), len(rows[0])
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def det(a):
    """Exact determinant (Bareiss for ints, plain elimination for Fractions)."""
    n = len(a)
    if n == 0:
        return 1
    assert all(len(row) == n for row in a), "det needs a square matrix"
    rows = [list(r) for r in a]
    if all(isinstance(x, int) for row in rows for x in row):
        sign, prev = 1, 1
        for k in range(n - 1):
            if rows[k][k] == 0:
                piv = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
                if piv is None:
                    return 0
                rows[k], rows[piv] = rows[piv], rows[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
                rows[i][k] = 0
            prev = rows[k][k]
        return sign * rows[n - 1][n - 1]
    rows = [[Fraction(x) for x in row] for row in rows]
    sign, out = 1, Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        out *= rows[k][k]
        for i in range(k + 1, n):
            if rows[i][k] != 0:
                f = rows[i][k] / rows[k][k]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[k])]
    return sign * out


@dataclass(frozen=True)
class SNFResult:
    """Smith normal form U*M*V = diag(diagonal), U and V unimodular."""

    diagonal: tuple
    left: tuple
    right: tuple

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def torsion(self):
        """Invariant factors > 1 of the cokernel."""
        return tuple(d for d in self.diagonal if d > 1)


def smith_normal_form(m):
    """Smith normal form of an integer matrix, with unimodular transforms.

    Returns SNFResult with nonnegative diagonal entries d_1 | d_2 | ... and
    square transforms satisfying left * m * right == diag and
    |det left| == |det right| == 1.
    """
    a = [list(row) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = identity(nr)
    v = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(nr, nc):
        # move a least-magnitude nonzero entry of the trailing block to (t, t)
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best[0] != t:
            swap_rows(t, best[0])
        if best[1] != t:
            swap_cols(t, best[1])
        if a[t][t] < 0:
            negate_row(t)
        dirty = False
        for i in range(t + 1, nr):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                add_row(i, t, -q)
                if a[i][t] != 0:
                    dirty = True
        for j in range(t + 1, nc):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                add_col(j, t, -q)
                if a[t][j] != 0:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the trailing block by a[t][t]
        offender = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(t, offender, 1)
            continue
        t += 1

    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SNFResult(diagonal=diag, left=tuple(tuple(r) for r in u), right=tuple(tuple(r) for r in v))


def kernel_basis(m):
    """Basis of the integer kernel of m, from the SNF right transform."""
    snf = smith_normal_form(m)
    nc = len(m[0]) if m else 0
    cols = []
    for j in range(nc):
        dj = snf.diagonal[j] if j < len(snf.diagonal) else 0
        if dj == 0:
            cols.append([snf.right[i][j] for i in range(nc)])
    return cols
