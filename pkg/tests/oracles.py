"""Brute-force reference computations used by the tests.

Everything here is written from the definitions with plain loops over boxes, and
shares no code with the package beyond tiny value types.
"""
from __future__ import annotations

import math
from itertools import product


def k_norm(x, y, m):
    if m % 4 == 3:
        return x * x + x * y + (1 + m) // 4 * y * y
    return x * x + m * y * y


def k_mul(a, b, m):
    # omega^2 = -m, or omega^2 = omega - (1+m)/4
    (p, q), (r, s) = a, b
    if m % 4 == 3:
        k = (1 + m) // 4
        return (p * r - k * q * s, p * s + q * r + q * s)
    return (p * r - m * q * s, p * s + q * r)


def k_conj(a, m):
    x, y = a
    return (x + y, -y) if m % 4 == 3 else (x, -y)


def k_trace(a, m):
    x, y = a
    return 2 * x + y if m % 4 == 3 else 2 * x


def coords_box(max_norm, m):
    """All (x, y) with N(x + y omega) <= max_norm."""
    ymax = math.isqrt(int(4 * max_norm / m) + 1) + 1
    xmax = math.isqrt(int(max_norm) + 1) + ymax + 1
    for x in range(-xmax, xmax + 1):
        for y in range(-ymax, ymax + 1):
            if k_norm(x, y, m) <= max_norm:
                yield (x, y)


def count_norm(n, m):
    return sum(1 for z in coords_box(n, m) if k_norm(*z, m) == n)


def herm_value(a, b, c, u, v, m):
    uv = k_mul(u, k_conj(v, m), m)
    return a * k_norm(*u, m) + k_trace(k_mul(b, uv, m), m) + c * k_norm(*v, m)


def lambda_min(a, b, c, m):
    nb = k_norm(*b, m)
    return ((a + c) - math.sqrt((a - c) ** 2 + 4 * nb)) / 2


def reps_box(a, b, c, m, d):
    """All (u, v) with f(u, v) = d by box search."""
    lim = d / lambda_min(a, b, c, m) + 1e-9
    box = list(coords_box(lim, m))
    return [(u, v) for u in box for v in box if herm_value(a, b, c, u, v, m) == d]


def coprime(u, v, m):
    """u O_K + v O_K = O_K, via the content of the binary form N(u x + v y)."""
    t = k_trace(k_mul(u, k_conj(v, m), m), m)
    return math.gcd(k_norm(*u, m), t, k_norm(*v, m)) == 1


def primitive_count(a, b, c, m, d):
    return sum(1 for u, v in reps_box(a, b, c, m, d) if coprime(u, v, m))


def r_residues(d, ell, m):
    return [(x, y) for x in range(d) for y in range(d) if (k_norm(x, y, m) + ell) % d == 0]


def sigma(n):
    return sum(k for k in range(1, n + 1) if n % k == 0)


def automorphs_box(a, b, c, m, radius=2):
    """SL2(O_K) matrices with A f A* = f and all coordinates in [-radius, radius]."""
    rng = range(-radius, radius + 1)
    els = list(product(rng, rng))
    rows_a = [(r, s) for r in els for s in els if herm_value(a, b, c, r, s, m) == a]
    rows_c = [(u, v) for u in els for v in els if herm_value(a, b, c, u, v, m) == c]
    out = []
    for r, s in rows_a:
        for u, v in rows_c:
            det = k_mul(r, v, m)
            su = k_mul(s, u, m)
            if (det[0] - su[0], det[1] - su[1]) != (1, 0):
                continue
            # (r, s) f (conj u, conj v)^T
            first = (a * r[0] + k_mul(s, k_conj(b, m), m)[0], a * r[1] + k_mul(s, k_conj(b, m), m)[1])
            rb = k_mul(r, b, m)
            second = (rb[0] + c * s[0], rb[1] + c * s[1])
            x = k_mul(first, k_conj(u, m), m)
            y = k_mul(second, k_conj(v, m), m)
            if (x[0] + y[0], x[1] + y[1]) == tuple(b):
                out.append(((r, s), (u, v)))
    return out


# ---- quaternions as 2x2 matrices over O_K ---------------------------------


def q_matrix(c, ell, m):
    """x + y eps  ->  [[x, y], [-ell conj(y), conj(x)]]."""
    x, y = (c[0], c[1]), (c[2], c[3])
    cy = k_conj(y, m)
    return (x, y, (-ell * cy[0], -ell * cy[1]), k_conj(x, m))


def q_mul(a, b, ell, m):
    A, B = q_matrix(a, ell, m), q_matrix(b, ell, m)

    def add(p, q):
        return (p[0] + q[0], p[1] + q[1])

    top_left = add(k_mul(A[0], B[0], m), k_mul(A[1], B[2], m))
    top_right = add(k_mul(A[0], B[1], m), k_mul(A[1], B[3], m))
    return (top_left[0], top_left[1], top_right[0], top_right[1])


def hnf_sublattices(index, dim=4):
    """Upper triangular HNF bases of all sublattices of Z^dim with the given index."""

    def diagonals(n, k):
        if k == 1:
            yield (n,)
            return
        for d in range(1, n + 1):
            if n % d == 0:
                for rest in diagonals(n // d, k - 1):
                    yield (d,) + rest

    for diag in diagonals(index, dim):
        free = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
        ranges = [range(diag[j]) for (i, j) in free]
        for vals in product(*ranges):
            M = [[0] * dim for _ in range(dim)]
            for i in range(dim):
                M[i][i] = diag[i]
            for (i, j), v in zip(free, vals):
                M[i][j] = v
            yield M


def in_upper_lattice(M, v):
    """Membership in the row span of an upper triangular integer basis."""
    v = list(v)
    for i in range(len(M)):
        if v[i] % M[i][i]:
            return False
        q = v[i] // M[i][i]
        v = [a - q * b for a, b in zip(v, M[i])]
    return not any(v)


def right_ideals_exhaustive(d, ell, m):
    """All right ideals of Z^4 = O_K + O_K eps of index d^2 (as HNF row bases)."""
    gens = [(0, 1, 0, 0), (0, 0, 1, 0)]  # omega and eps generate the order as a ring
    out = []
    for M in hnf_sublattices(d * d):
        if all(in_upper_lattice(M, q_mul(row, g, ell, m)) for row in M for g in gens):
            out.append(M)
    return out
