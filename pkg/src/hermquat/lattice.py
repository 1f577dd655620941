"""Integer and rational lattice helpers: Hermite normal form, solving, short vectors."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


def hnf(rows: Sequence[Sequence[int]], pivot_cols: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the Z-span of `rows`.

    Pivots are positive, entries above a pivot lie in [0, pivot), and zero rows
    are dropped. With pivot_cols set, pivots are only sought in the first
    pivot_cols columns and all rows are kept; the remaining columns just ride
    along (handy for tracking a transformation).
    """
    A = [list(map(int, r)) for r in rows]
    if not A:
        return []
    ncols = len(A[0])
    limit = ncols if pivot_cols is None else pivot_cols
    r = 0
    for c in range(limit):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[i0] = A[i0], A[r]
            piv = A[r]
            clean = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // piv[c]
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], piv)]
                    if A[i][c]:
                        clean = False
            if clean:
                break
        if r >= len(A) or A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    if pivot_cols is None:
        return [row for row in A if any(row)]
    return A


def common_denominator(rows) -> int:
    den = 1
    for row in rows:
        for t in row:
            den = math.lcm(den, Fraction(t).denominator)
    return den


def rational_hnf(rows) -> tuple[tuple[Fraction, ...], ...]:
    den = common_denominator(rows)
    ints = [[int(Fraction(t) * den) for t in row] for row in rows]
    H = hnf(ints)
    return tuple(tuple(Fraction(t, den) for t in row) for row in H)


def det(M) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    A = [[Fraction(t) for t in row] for row in M]
    n = len(A)
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            result = -result
        result *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            if f:
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return result


def inverse(M) -> list[list[Fraction]]:
    n = len(M)
    A = [[Fraction(t) for t in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [a / pv for a in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


def solve_integer(rows, target) -> list[int] | None:
    """Find integers c with sum_i c_i * rows[i] == target, or None."""
    k = len(rows[0])
    n = len(rows)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    H = hnf(aug, pivot_cols=k)
    rest = list(target)
    coeffs = [0] * n
    for row in H:
        piv = next((c for c in range(k) if row[c] != 0), None)
        if piv is None:
            continue
        if any(rest[c] for c in range(piv)):
            return None
        if rest[piv] % row[piv]:
            return None
        q = rest[piv] // row[piv]
        rest = [a - q * b for a, b in zip(rest, row[:k])]
        coeffs = [a + q * b for a, b in zip(coeffs, row[k:])]
    if any(rest):
        return None
    return coeffs


def solve_rational(rows, target) -> list[Fraction] | None:
    """Solve sum_i c_i rows[i] = target for a square invertible system."""
    inv = inverse(rows)
    return [sum(Fraction(target[i]) * inv[i][j] for i in range(len(rows))) for j in range(len(rows))]


def row_in_lattice(basis_hnf, v) -> bool:
    """Membership test of v in the lattice spanned by an echelon (HNF) basis."""
    rest = [Fraction(t) for t in v]
    for row in basis_hnf:
        piv = next(c for c in range(len(row)) if row[c] != 0)
        if any(rest[c] for c in range(piv)):
            return False
        q = rest[piv] / row[piv]
        if q.denominator != 1:
            return False
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    return not any(rest)


def box_representatives(H) -> list[tuple[int, ...]]:
    """Coset representatives of Z^n / L for a full-rank integer HNF basis H."""
    n = len(H)
    diag = [H[i][i] for i in range(n)]
    reps = [()]
    for i in range(n):
        reps = [r + (t,) for r in reps for t in range(diag[i])]
    return reps


def short_vectors(gram, bound) -> list[tuple[tuple[int, ...], int]]:
    """All integer x with x^T G x <= bound for an integral positive definite G.

    Returns (x, value) pairs with exact integer values. The pruning uses floats
    with a safety margin; every candidate is re-checked exactly.
    """
    n = len(gram)
    G = [[int(t) for t in row] for row in gram]
    q = [[float(t) for t in row] for row in G]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    diag = [q[i][i] for i in range(n)]
    mu = [[q[i][j] if j > i else 0.0 for j in range(n)] for i in range(n)]
    eps = 1e-9 * (abs(bound) + 1)
    B = float(bound) + eps
    out = []
    x = [0] * n

    def exact(v):
        s = 0
        for i in range(n):
            vi = v[i]
            if vi:
                row = G[i]
                s += vi * (row[i] * vi + 2 * sum(row[j] * v[j] for j in range(i + 1, n)))
        return s

    def rec(i, partial):
        center = -sum(mu[i][j] * x[j] for j in range(i + 1, n))
        rem = B - partial
        if rem < 0:
            return
        r = math.sqrt(rem / diag[i])
        lo = math.ceil(center - r - 1e-9)
        hi = math.floor(center + r + 1e-9)
        for t in range(lo, hi + 1):
            val = partial + diag[i] * (t - center) ** 2
            if val > B:
                continue
            x[i] = t
            if i == 0:
                v = tuple(x)
                e = exact(v)
                if e <= bound:
                    out.append((v, e))
            else:
                rec(i - 1, val)
        x[i] = 0

    if n:
        rec(n - 1, 0.0)
    return out
