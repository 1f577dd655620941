"""Arithmetic in the ring of integers of an imaginary quadratic field Q(sqrt(-m)).

Elements are stored as coordinate pairs (x, y) meaning x + y*omega, where
omega = sqrt(-m) for m = 1, 2 mod 4 and omega = (1 + sqrt(-m))/2 for m = 3 mod 4.
Coordinates are normally ints; the same routines accept Fractions, which is how
elements of the field itself are handled elsewhere in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple

from .lattice import solve_integer

SUPPORTED_M = (1, 2, 3, 7, 11)
EXPERIMENTAL_M = (19, 43, 67, 163)
EUCLIDEAN_M = (1, 2, 3, 7, 11)


class UnsupportedField(ValueError):
    pass


class NonEuclideanField(ValueError):
    pass


class NotCoprime(ValueError):
    pass


class QuadInt(NamedTuple):
    x: int
    y: int

    def __repr__(self) -> str:
        return f"QuadInt({self.x}, {self.y})"


_qi = tuple.__new__
ZERO = QuadInt(0, 0)
ONE = QuadInt(1, 0)


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


@dataclass(frozen=True)
class FieldParams:
    """The field K = Q(sqrt(-m)) together with its chosen integral basis."""

    m: int
    experimental_ok: bool = False

    def __post_init__(self):
        if not is_squarefree(self.m):
            raise UnsupportedField(f"m={self.m} is not a positive square-free integer")
        if self.m not in SUPPORTED_M:
            if not (self.experimental_ok and self.m in EXPERIMENTAL_M):
                raise UnsupportedField(f"m={self.m} is not in the supported list {SUPPORTED_M}")
        # omega = (1 + sqrt(-m))/2 when half is set; k is the norm of omega
        object.__setattr__(self, "half", self.m % 4 == 3)
        object.__setattr__(self, "k", (1 + self.m) // 4 if self.half else self.m)
        object.__setattr__(self, "_units", tuple(elements_of_norm(1, self)))

    @property
    def disc(self) -> int:
        return -self.m if self.half else -4 * self.m

    @property
    def unit_count(self) -> int:
        return {1: 4, 3: 6}.get(self.m, 2)

    @property
    def euclidean(self) -> bool:
        return self.m in EUCLIDEAN_M

    @property
    def experimental(self) -> bool:
        return self.m == 2 or self.m in EXPERIMENTAL_M

    def mul(self, a, b) -> QuadInt:
        ax, ay = a
        bx, by = b
        if self.half:
            return _qi(QuadInt, (ax * bx - self.k * ay * by, ax * by + ay * bx + ay * by))
        return _qi(QuadInt, (ax * bx - self.m * ay * by, ax * by + ay * bx))

    def conj(self, a) -> QuadInt:
        x, y = a
        return _qi(QuadInt, (x + y, -y)) if self.half else _qi(QuadInt, (x, -y))

    def norm(self, a):
        x, y = a
        if self.half:
            return x * x + x * y + self.k * y * y
        return x * x + self.m * y * y

    def trace(self, a):
        x, y = a
        return 2 * x + y if self.half else 2 * x

    def inverse(self, a) -> QuadInt:
        n = Fraction(self.norm(a))
        c = self.conj(a)
        return QuadInt(c.x / n, c.y / n)

    def div(self, a, b) -> QuadInt:
        return self.mul(a, self.inverse(b))

    def units(self) -> tuple[QuadInt, ...]:
        return self._units

    def norm_matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Twice the Gram matrix of the norm form in the basis (1, omega)."""
        if self.half:
            return ((2, 1), (1, 2 * self.k))
        return ((2, 0), (0, 2 * self.m))

    def to_complex(self, a) -> complex:
        x, y = a
        if self.half:
            return complex(x + y / 2, y * math.sqrt(self.m) / 2)
        return complex(x, y * math.sqrt(self.m))


def add(a, b) -> QuadInt:
    return _qi(QuadInt, (a[0] + b[0], a[1] + b[1]))


def sub(a, b) -> QuadInt:
    return _qi(QuadInt, (a[0] - b[0], a[1] - b[1]))


def neg(a) -> QuadInt:
    return _qi(QuadInt, (-a[0], -a[1]))


def scale(c, a) -> QuadInt:
    return _qi(QuadInt, (c * a[0], c * a[1]))


def is_integral(a) -> bool:
    return all(Fraction(t).denominator == 1 for t in a)


def as_int(a) -> QuadInt:
    if not is_integral(a):
        raise ValueError(f"{a} is not an algebraic integer")
    return QuadInt(int(a[0]), int(a[1]))


def qf_mul(u, v, fp: FieldParams) -> QuadInt:
    return fp.mul(u, v)


def qf_conj(u, fp: FieldParams) -> QuadInt:
    return fp.conj(u)


def qf_norm(u, fp: FieldParams):
    return fp.norm(u)


def qf_trace(u, fp: FieldParams):
    return fp.trace(u)


def elements_of_norm(n: int, fp: FieldParams) -> Iterator[QuadInt]:
    """All integers of K with norm exactly n, in a fixed order."""
    if n < 0:
        return
    if n == 0:
        yield ZERO
        return
    if fp.half:
        # 4N = (2x + y)^2 + m y^2
        ymax = math.isqrt(4 * n // fp.m)
        for y in range(-ymax, ymax + 1):
            r = 4 * n - fp.m * y * y
            s = math.isqrt(r)
            if s * s != r:
                continue
            for t in sorted({s, -s}):
                if (t - y) % 2 == 0:
                    yield QuadInt((t - y) // 2, y)
    else:
        ymax = math.isqrt(n // fp.m)
        for y in range(-ymax, ymax + 1):
            r = n - fp.m * y * y
            s = math.isqrt(r)
            if s * s == r:
                for x in sorted({s, -s}):
                    yield QuadInt(x, y)


def count_norm(n: int, fp: FieldParams) -> int:
    return sum(1 for _ in elements_of_norm(n, fp))


def normalize_associate(g, fp: FieldParams) -> tuple[QuadInt, QuadInt]:
    """Pick a fixed representative of the associate class of g.

    Returns (unit, unit*g). Preference goes to x > 0, y >= 0, then to the upper
    half plane in coordinates, and ties break on the smallest (x, y).
    """
    if tuple(g) == (0, 0):
        return ONE, ZERO
    cands = [(u, fp.mul(u, g)) for u in fp.units()]

    def rank(pair):
        x, y = pair[1]
        if x > 0 and y >= 0:
            tier = 0
        elif x > 0 or (x == 0 and y > 0):
            tier = 1
        else:
            tier = 2
        return (tier, x, y)

    u, h = min(cands, key=rank)
    return u, QuadInt(*h)


def _nearest_quotient(a, b, fp: FieldParams) -> QuadInt:
    # b != 0; return q in O_K minimising N(a - q b)
    ex = fp.mul(a, fp.conj(b))
    n = fp.norm(b)
    fx, fy = ex[0] // n, ex[1] // n
    best = None
    for dx in (-1, 0, 1, 2):
        for dy in (-1, 0, 1, 2):
            q = QuadInt(fx + dx, fy + dy)
            r = sub(a, fp.mul(q, b))
            key = (fp.norm(r), q)
            if best is None or key < best:
                best = key
    return best[1]


def qf_xgcd(u, v, fp: FieldParams) -> tuple[QuadInt, QuadInt, QuadInt]:
    """Return (g, r, s) with g = r*u + s*v a normalised gcd of u and v."""
    if not fp.euclidean:
        raise NonEuclideanField(f"m={fp.m} is not norm-Euclidean")
    u, v = QuadInt(*u), QuadInt(*v)
    if u == ZERO and v == ZERO:
        raise ValueError("gcd of (0, 0) is undefined")
    r0, s0, a = ONE, ZERO, u
    r1, s1, b = ZERO, ONE, v
    while b != ZERO:
        q = _nearest_quotient(a, b, fp)
        rem = sub(a, fp.mul(q, b))
        if fp.norm(rem) >= fp.norm(b):
            raise NonEuclideanField(f"division step failed for m={fp.m}")
        a, b = b, rem
        r0, r1 = r1, sub(r0, fp.mul(q, r1))
        s0, s1 = s1, sub(s0, fp.mul(q, s1))
    unit, g = normalize_associate(a, fp)
    return g, fp.mul(unit, r0), fp.mul(unit, s0)


def _coords_matrix(u, v, fp: FieldParams):
    w = QuadInt(0, 1)
    return [tuple(u), tuple(fp.mul(w, u)), tuple(v), tuple(fp.mul(w, v))]


def qf_is_coprime_pair(u, v, fp: FieldParams) -> bool:
    """True when u*O_K + v*O_K = O_K (the 2x2 minors of the Z-spanning set have gcd 1)."""
    rows = _coords_matrix(u, v, fp)
    g = 0
    for i in range(4):
        for j in range(i + 1, 4):
            g = math.gcd(g, rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0])
    return g == 1


def qf_bezout(u, v, fp: FieldParams) -> tuple[QuadInt, QuadInt]:
    """Return (r, s) with r*u + s*v = 1; raises NotCoprime otherwise."""
    u, v = QuadInt(*u), QuadInt(*v)
    if fp.norm(u) == 1:
        return fp.conj(u), ZERO
    if fp.norm(v) == 1:
        return ZERO, fp.conj(v)
    if fp.euclidean:
        if u == ZERO and v == ZERO:
            raise NotCoprime("(0, 0)")
        g, r, s = qf_xgcd(u, v, fp)
        if fp.norm(g) != 1:
            raise NotCoprime(f"{u}, {v}")
        ginv = fp.conj(g)
        return fp.mul(ginv, r), fp.mul(ginv, s)
    rows = _coords_matrix(u, v, fp)
    c = solve_integer(rows, (1, 0))
    if c is None:
        raise NotCoprime(f"{u}, {v}")
    return QuadInt(c[0], c[1]), QuadInt(c[2], c[3])


def qf_residues(d: int, fp: FieldParams) -> list[QuadInt]:
    """Representatives of O_K / d O_K as the box 0 <= x, y < d."""
    if d < 1:
        raise ValueError("modulus must be positive")
    return [QuadInt(x, y) for x in range(d) for y in range(d)]


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def qf_dedekind_coeff(n: int, fp: FieldParams) -> int:
    """Number of integral ideals of norm n, counted as elements of norm n per unit."""
    c = count_norm(n, fp)
    assert c % fp.unit_count == 0
    return c // fp.unit_count


def dedekind_coeff_character(n: int, fp: FieldParams) -> int:
    return sum(kronecker(fp.disc, k) for k in range(1, n + 1) if n % k == 0)


@lru_cache(maxsize=None)
def dedekind_coeffs(fp: FieldParams, n_max: int) -> tuple[int, ...]:
    return tuple(qf_dedekind_coeff(n, fp) for n in range(1, n_max + 1))
