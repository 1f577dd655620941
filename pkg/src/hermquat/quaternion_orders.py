"""The definite quaternion algebra B = K + K eps with eps^2 = -ell and eps a = conj(a) eps.

Elements are coordinate 4-tuples in the basis (1, omega, eps, omega*eps), read as
x + y*eps with x = c0 + c1 omega and y = c2 + c3 omega. The order
O_K + O_K eps has the standard lattice Z^4 in these coordinates.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .hermitian_forms import (
    ClassList,
    HermForm,
    canonical_with_transform,
    hf_enumerate_classes,
    mat_inv_sl2,
    residues_of_norm,
)
from .lattice import hnf, inverse, row_in_lattice, short_vectors
from .quad_field import FieldParams, QuadInt, elements_of_norm, normalize_associate


class ParameterMismatch(ValueError):
    pass


class NotIntegral(ValueError):
    pass


class NoProperBasis(ValueError):
    pass


class IncompatibleOrders(ValueError):
    pass


class BadPrimeNorm(ValueError):
    pass


@dataclass(frozen=True)
class QuatAlgebra:
    fp: FieldParams
    ell: int

    def split(self, a):
        return (a[0], a[1]), (a[2], a[3])

    def mul(self, a, b) -> tuple:
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        ell = self.ell
        if self.fp.half:
            k = self.fp.k
            # conj(b2 + b3 w) = (b2 + b3) - b3 w, conj(b0 + b1 w) = (b0 + b1) - b1 w
            c2, c3 = b2 + b3, -b3
            e0, e1 = b0 + b1, -b1
            p0, p1 = a0 * b0 - k * a1 * b1, a0 * b1 + a1 * b0 + a1 * b1
            q0, q1 = a2 * c2 - k * a3 * c3, a2 * c3 + a3 * c2 + a3 * c3
            r0, r1 = a0 * b2 - k * a1 * b3, a0 * b3 + a1 * b2 + a1 * b3
            s0, s1 = a2 * e0 - k * a3 * e1, a2 * e1 + a3 * e0 + a3 * e1
        else:
            m = self.fp.m
            p0, p1 = a0 * b0 - m * a1 * b1, a0 * b1 + a1 * b0
            q0, q1 = a2 * b2 + m * a3 * b3, a3 * b2 - a2 * b3
            r0, r1 = a0 * b2 - m * a1 * b3, a0 * b3 + a1 * b2
            s0, s1 = a2 * b0 + m * a3 * b1, a3 * b0 - a2 * b1
        return (p0 - ell * q0, p1 - ell * q1, r0 + s0, r1 + s1)

    def conj(self, a) -> tuple:
        x = self.fp.conj((a[0], a[1]))
        return (x[0], x[1], -a[2], -a[3])

    def nrd(self, a):
        return self.fp.norm((a[0], a[1])) + self.ell * self.fp.norm((a[2], a[3]))

    def trd(self, a):
        return self.fp.trace((a[0], a[1]))

    def from_xy(self, x, y) -> tuple:
        return (x[0], x[1], y[0], y[1])

    def scalar(self, c) -> tuple:
        return (c, 0, 0, 0)

    def inverse(self, a) -> tuple:
        n = Fraction(self.nrd(a))
        return tuple(Fraction(t) / n for t in self.conj(a))


@dataclass(frozen=True)
class QuatElem:
    """A quaternion x + y*eps carrying its algebra; supports *, + and conj()."""

    x: QuadInt
    y: QuadInt
    alg: QuatAlgebra

    @property
    def coords(self) -> tuple:
        return (self.x[0], self.x[1], self.y[0], self.y[1])

    @classmethod
    def from_coords(cls, c, alg: QuatAlgebra) -> "QuatElem":
        return cls(QuadInt(c[0], c[1]), QuadInt(c[2], c[3]), alg)

    def _check(self, other):
        if self.alg != other.alg:
            raise ParameterMismatch("elements of different algebras")

    def __mul__(self, other):
        self._check(other)
        return QuatElem.from_coords(self.alg.mul(self.coords, other.coords), self.alg)

    def __add__(self, other):
        self._check(other)
        return QuatElem.from_coords(tuple(a + b for a, b in zip(self.coords, other.coords)), self.alg)

    def conj(self):
        return QuatElem.from_coords(self.alg.conj(self.coords), self.alg)

    def nrd(self):
        return self.alg.nrd(self.coords)

    def trd(self):
        return self.alg.trd(self.coords)


def qa_mul(a: QuatElem, b: QuatElem) -> QuatElem:
    return a * b


def qa_conj(a: QuatElem) -> QuatElem:
    return a.conj()


def qa_nrd(a: QuatElem):
    return a.nrd()


def qa_trd(a: QuatElem):
    return a.trd()


@dataclass(frozen=True)
class QuatLattice:
    """A full Z-lattice in B with basis rows / den (integer HNF, den minimal)."""

    alg: QuatAlgebra
    den: int
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, alg: QuatAlgebra, gens) -> "QuatLattice":
        den = 1
        for g in gens:
            for t in g:
                if type(t) is not int:
                    den = math.lcm(den, Fraction(t).denominator)
        if den == 1:
            return cls.from_int_generators(alg, [[int(t) for t in g] for g in gens], 1)
        return cls.from_int_generators(alg, [[int(Fraction(t) * den) for t in g] for g in gens], den)

    @classmethod
    def from_int_generators(cls, alg: QuatAlgebra, gens, den: int) -> "QuatLattice":
        """Lattice spanned by the integer vectors gens, divided by den."""
        H = hnf(gens)
        if len(H) != 4:
            raise ValueError("generators do not span a full lattice")
        c = den
        for row in H:
            for t in row:
                c = math.gcd(c, t)
        if c == 1:
            return cls(alg, den, tuple(map(tuple, H)))
        return cls(alg, den // c, tuple(tuple(t // c for t in row) for row in H))

    @property
    def basis(self) -> list[tuple[Fraction, ...]]:
        return [tuple(Fraction(t, self.den) for t in row) for row in self.rows]

    def contains(self, v) -> bool:
        return row_in_lattice(self.rows, [Fraction(t) * self.den for t in v])

    def contains_lattice(self, other: "QuatLattice") -> bool:
        return all(self.contains(b) for b in other.basis)

    def covolume(self) -> Fraction:
        """[O : L] for O = Z^4, as a rational number."""
        d = 1
        for i in range(4):
            d *= self.rows[i][i]
        return Fraction(d, self.den ** 4)

    def is_integral(self) -> bool:
        return self.den == 1

    def norm_gram(self) -> list[list[int]]:
        """Integral Gram matrix of 2*nrd*den^2 on the integer rows."""
        alg = self.alg
        rows = self.rows
        return [[alg.trd(alg.mul(rows[i], alg.conj(rows[j]))) for j in range(4)] for i in range(4)]

    def elements_of_nrd(self, n) -> list[tuple[Fraction, ...]]:
        n = Fraction(n)
        target = 2 * n * self.den ** 2
        if target.denominator != 1:
            return []
        out = []
        for x, val in short_vectors(self.norm_gram(), int(target)):
            if val == target:
                out.append(self.combine(x))
        return out

    def combine(self, x) -> tuple[Fraction, ...]:
        return tuple(
            Fraction(sum(x[i] * self.rows[i][k] for i in range(4)), self.den) for k in range(4)
        )

    def __repr__(self):
        return f"QuatLattice(den={self.den}, rows={self.rows})"


def standard_order(alg: QuatAlgebra) -> QuatLattice:
    return QuatLattice.from_generators(alg, [tuple(int(i == j) for j in range(4)) for i in range(4)])


def split_denominator(v) -> tuple[list[int], int]:
    den = 1
    for t in v:
        if type(t) is not int:
            den = math.lcm(den, Fraction(t).denominator)
    return [int(t * den) for t in v], den


def lat_product(I: QuatLattice, J: QuatLattice) -> QuatLattice:
    alg = I.alg
    if alg != J.alg:
        raise ParameterMismatch("lattices in different algebras")
    gens = [alg.mul(a, b) for a in I.rows for b in J.rows]
    return QuatLattice.from_int_generators(alg, gens, I.den * J.den)


def lat_conj(I: QuatLattice) -> QuatLattice:
    return QuatLattice.from_int_generators(I.alg, [I.alg.conj(b) for b in I.rows], I.den)


def lat_scale(I: QuatLattice, c) -> QuatLattice:
    c = Fraction(c)
    return QuatLattice.from_int_generators(I.alg, [[t * c.numerator for t in b] for b in I.rows], I.den * c.denominator)


def lat_left_mul(alpha, I: QuatLattice) -> QuatLattice:
    num, den = split_denominator(alpha)
    return QuatLattice.from_int_generators(I.alg, [I.alg.mul(num, b) for b in I.rows], den * I.den)


def lat_right_mul(I: QuatLattice, alpha) -> QuatLattice:
    num, den = split_denominator(alpha)
    return QuatLattice.from_int_generators(I.alg, [I.alg.mul(b, num) for b in I.rows], den * I.den)


def _dual_of_span(vectors) -> list[tuple[Fraction, ...]]:
    """Basis of {x : x . v in Z for all v} for vectors spanning Q^4."""
    den = 1
    for v in vectors:
        for t in v:
            den = math.lcm(den, Fraction(t).denominator)
    H = hnf([[int(Fraction(t) * den) for t in v] for v in vectors])
    C = [[Fraction(t, den) for t in row] for row in H]
    Cinv = inverse(C)
    # rows of (C^-1)^T
    return [tuple(Cinv[j][i] for j in range(4)) for i in range(4)]


def left_colon(J: QuatLattice, I: QuatLattice) -> QuatLattice:
    """(J : I)_L = {x : x I in J}."""
    alg = I.alg
    Jinv = inverse(J.basis)
    cols = []
    for b in I.basis:
        # x -> coords(x b) in J-coordinates: x . M with M[k] = coords(e_k b) Jinv
        R = [alg.mul(tuple(int(k == t) for t in range(4)), b) for k in range(4)]
        M = [[sum(R[k][s] * Jinv[s][c] for s in range(4)) for c in range(4)] for k in range(4)]
        for c in range(4):
            cols.append(tuple(M[k][c] for k in range(4)))
    return QuatLattice.from_generators(alg, _dual_of_span(cols))


def right_colon(J: QuatLattice, I: QuatLattice) -> QuatLattice:
    """(J : I)_R = {x : I x in J}."""
    alg = I.alg
    Jinv = inverse(J.basis)
    cols = []
    for b in I.basis:
        L = [alg.mul(b, tuple(int(k == t) for t in range(4))) for k in range(4)]
        M = [[sum(L[k][s] * Jinv[s][c] for s in range(4)) for c in range(4)] for k in range(4)]
        for c in range(4):
            cols.append(tuple(M[k][c] for k in range(4)))
    return QuatLattice.from_generators(alg, _dual_of_span(cols))


def left_order(I: QuatLattice) -> QuatLattice:
    return left_colon(I, I)


def right_order(I: QuatLattice) -> QuatLattice:
    return right_colon(I, I)


def lattice_nrd(I: QuatLattice) -> Fraction:
    """The reduced norm of a lattice: the positive generator of the Z-span of nrd(I)."""
    alg = I.alg
    B = I.basis
    vals = [alg.nrd(b) for b in B]
    for i in range(4):
        for j in range(i + 1, 4):
            vals.append(alg.trd(alg.mul(B[i], alg.conj(B[j]))))
    den = 1
    for v in vals:
        den = math.lcm(den, Fraction(v).denominator)
    g = 0
    for v in vals:
        g = math.gcd(g, int(Fraction(v) * den))
    return Fraction(g, den)


def qa_latimer_ideal(f: HermForm) -> QuatLattice:
    """The left ideal O_K a + O_K (b + eps) attached to f = [[a, b], [conj b, c]]."""
    alg = QuatAlgebra(f.fp, f.ell)
    a, b = f.a, f.b
    w = (0, 1)
    wb = f.fp.mul(w, b)
    gens = [(a, 0, 0, 0), (0, a, 0, 0), (b.x, b.y, 1, 0), (wb[0], wb[1], 0, 1)]
    return QuatLattice.from_generators(alg, gens)


def right_ideal_of_form(f: HermForm) -> QuatLattice:
    """conj of the left ideal of f: a right ideal of O_K + O_K eps."""
    return lat_conj(qa_latimer_ideal(f))


def qa_module_index(I: QuatLattice) -> int:
    if not I.is_integral():
        raise NotIntegral("lattice is not contained in the standard order")
    return int(I.covolume())


def _ideal_generator(rows2, fp: FieldParams):
    """A generator of the O_K-ideal with Z-basis rows2 (rational coordinates)."""
    den = 1
    for r in rows2:
        for t in r:
            den = math.lcm(den, Fraction(t).denominator)
    R = [[int(Fraction(t) * den) for t in r] for r in rows2]
    index = abs(R[0][0] * R[1][1] - R[0][1] * R[1][0])
    N = fp.norm_matrix()
    G = [[sum(R[i][s] * N[s][t] * R[j][t] for s in range(2) for t in range(2)) for j in range(2)] for i in range(2)]
    for x, val in short_vectors(G, 2 * index):
        if val == 2 * index:
            z = (x[0] * R[0][0] + x[1] * R[1][0], x[0] * R[0][1] + x[1] * R[1][1])
            return QuadInt(Fraction(z[0], den), Fraction(z[1], den))
    return None


@dataclass(frozen=True)
class ProperBasis:
    norm: Fraction
    basis: tuple


def proper_basis(I: QuatLattice) -> ProperBasis:
    """An O_K-basis (w1, w2) of a left O_K-lattice whose coefficient determinant
    is a positive rational; that determinant is the Latimer norm.
    """
    alg, fp = I.alg, I.alg.fp
    perm = [2, 3, 0, 1]
    H = hnf([[row[p] for p in perm] for row in I.rows])
    den = I.den
    # back to (x, y) order
    r = [[Fraction(row[perm.index(k)], den) for k in range(4)] for row in H]
    proj = [(r[0][2], r[0][3]), (Fraction(0), r[1][3])]
    inter = [(r[2][0], r[2][1]), (r[3][0], r[3][1])]
    assert r[1][2] == 0 and r[2][2] == r[2][3] == 0 and r[3][2] == r[3][3] == 0
    g1 = _ideal_generator(inter, fp)
    g2 = _ideal_generator(proj, fp)
    if g1 is None or g2 is None:
        raise NoProperBasis("lattice is not a left O_K-module with principal components")
    lam1 = g2[0] / proj[0][0]
    lam2 = (g2[1] - lam1 * proj[0][1]) / proj[1][1]
    assert lam1.denominator == 1 and lam2.denominator == 1
    w2 = tuple(lam1 * r[0][k] + lam2 * r[1][k] for k in range(4))
    n = fp.mul(g1, g2)
    for u in fp.units():
        t = fp.mul(u, n)
        if t[1] == 0 and t[0] > 0:
            w1 = alg.mul((u[0], u[1], 0, 0), (g1[0], g1[1], 0, 0))
            basis = (w1, w2)
            span = []
            for w in basis:
                span.append(w)
                span.append(alg.mul((0, 1, 0, 0), w))
            if QuatLattice.from_generators(alg, span) != I:
                raise NoProperBasis("lattice is not a left O_K-module")
            return ProperBasis(Fraction(t[0]), basis)
    raise NoProperBasis("no O_K-basis with rational determinant")


def qa_latimer_norm(I: QuatLattice, side: str = "left") -> Fraction:
    if side == "right":
        I = lat_conj(I)
    return proper_basis(I).norm


@dataclass(frozen=True)
class InvertibilityResult:
    invertible: bool
    inverse: QuatLattice
    left_order: QuatLattice
    right_order: QuatLattice


def lattice_inverse(I: QuatLattice) -> QuatLattice:
    return lat_scale(lat_conj(I), 1 / lattice_nrd(I))


def qa_is_invertible(I: QuatLattice) -> InvertibilityResult:
    Iinv = lattice_inverse(I)
    OL, OR = left_order(I), right_order(I)
    ok = lat_product(I, Iinv) == OL and lat_product(Iinv, I) == OR
    return InvertibilityResult(ok, Iinv, OL, OR)


def qa_is_principal(I: QuatLattice, side: str = "right"):
    """A generator alpha with I = alpha O_R(I) (side 'right') or O_L(I) alpha, else None."""
    n = lattice_nrd(I)
    if side == "right":
        O = right_order(I)
        for a in I.elements_of_nrd(n):
            if lat_left_mul(a, O) == I:
                return a
    else:
        O = left_order(I)
        for a in I.elements_of_nrd(n):
            if lat_right_mul(O, a) == I:
                return a
    return None


def qa_same_class(I: QuatLattice, J: QuatLattice):
    """For right ideals of the same right order, some alpha with alpha I = J, else None."""
    if right_order(I) != right_order(J):
        raise IncompatibleOrders("right orders differ")
    C = left_colon(J, I)
    target = lattice_nrd(J) / lattice_nrd(I)
    for a in C.elements_of_nrd(target):
        if lat_left_mul(a, I) == J:
            return a
    return None


# ---- certificates from the form side -------------------------------------


def _kmat_inv(M, fp):
    (p, q), (r, s) = M
    dt = fp.mul(p, s)
    dt = (dt[0] - fp.mul(q, r)[0], dt[1] - fp.mul(q, r)[1])
    inv = fp.inverse(dt)
    return (
        (fp.mul(s, inv), fp.mul((-q[0], -q[1]), inv)),
        (fp.mul((-r[0], -r[1]), inv), fp.mul(p, inv)),
    )


def _kmat_mul(A, B, fp):
    def add(u, v):
        return (u[0] + v[0], u[1] + v[1])

    return tuple(
        tuple(add(fp.mul(A[i][0], B[0][j]), fp.mul(A[i][1], B[1][j])) for j in range(2)) for i in range(2)
    )


def _coefficient_matrix(f: HermForm):
    return (((f.a, 0), (0, 0)), ((f.b[0], f.b[1]), (1, 0)))


def form_class_certificate(f: HermForm, g: HermForm, reduction=None):
    """beta with L(f) beta = L(g) for equivalent forms f, g (f canonical), built from
    an explicit SL2 transform; None if the algebra does not produce one.

    `reduction` may carry a precomputed (canonical form, T) for g.
    """
    fp, ell = f.fp, f.ell
    canon, T = reduction or canonical_with_transform(g)
    if canon != f:
        return None
    A = mat_inv_sl2(T)  # A f A* = g
    M = tuple(tuple(fp.conj(e) for e in row) for row in A)
    X = _kmat_mul(_kmat_inv(_kmat_mul(M, _coefficient_matrix(f), fp), fp), _coefficient_matrix(g), fp)
    b1, b2 = X[0]
    expect = ((-ell * fp.conj(b2)[0], -ell * fp.conj(b2)[1]), fp.conj(b1))
    if tuple(map(tuple, X[1])) != tuple(map(tuple, expect)):
        return None
    return (b1[0], b1[1], b2[0], b2[1])


# ---- class and type data ---------------------------------------------------


def default_bad_primes(m: int, ell: int) -> frozenset[int]:
    n = 2 * ell * m
    out = set()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out.add(p)
            n //= p
        p += 1
    if n > 1:
        out.add(n)
    return frozenset(out)


def theta_counts(L: QuatLattice, scale, n_max: int) -> dict[int, int]:
    """Number of x in L with nrd(x) = n * scale, for 1 <= n <= n_max."""
    scale = Fraction(scale)
    bound = 2 * n_max * scale * L.den ** 2
    unit = 2 * scale * L.den ** 2
    out = defaultdict(int)
    for x, val in short_vectors(L.norm_gram(), int(bound)):
        if val == 0:
            continue
        n = Fraction(val) / unit
        if n.denominator == 1:
            out[int(n)] += 1
    return dict(out)


def _order_basis_candidates(O: QuatLattice):
    """Three short elements that together with 1 span B over Q."""
    els = []
    for x, val in sorted(short_vectors(O.norm_gram(), 2 * 4 * O.den ** 2 * 16), key=lambda t: (t[1], t[0])):
        if val == 0:
            continue
        els.append(O.combine(x))
    chosen = [(1, 0, 0, 0)]
    for e in els:
        if _rank(chosen + [e]) > len(chosen):
            chosen.append(e)
            if len(chosen) == 4:
                return chosen
    raise RuntimeError("order too large for the basis search")


def _rank(vectors) -> int:
    den = 1
    for v in vectors:
        for t in v:
            den = math.lcm(den, Fraction(t).denominator)
    return len(hnf([[int(Fraction(t) * den) for t in v] for v in vectors]))


def orders_conjugate(O1: QuatLattice, O2: QuatLattice):
    """Search for a ring isomorphism O1 -> O2 (necessarily inner). Returns the
    images of a Q-basis of O1, or None."""
    alg = O1.alg
    E = _order_basis_candidates(O1)
    Einv = inverse(E)

    def coords_in_E(v):
        return [sum(Fraction(v[s]) * Einv[s][c] for s in range(4)) for c in range(4)]

    table = {(i, j): coords_in_E(alg.mul(E[i], E[j])) for i in range(1, 4) for j in range(1, 4)}
    pair_trd = {(i, j): alg.trd(alg.mul(E[i], alg.conj(E[j]))) for i in range(1, 4) for j in range(i + 1, 4)}
    cands = []
    for i in range(1, 4):
        n, t = alg.nrd(E[i]), alg.trd(E[i])
        cands.append([y for y in O2.elements_of_nrd(n) if alg.trd(y) == t])
    O1_in_E = [coords_in_E(b) for b in O1.basis]

    def search(k, imgs):
        if k == 4:
            full = [(1, 0, 0, 0)] + imgs
            for (i, j), c in table.items():
                lhs = alg.mul(full[i], full[j])
                rhs = tuple(sum(c[s] * full[s][t] for s in range(4)) for t in range(4))
                if tuple(Fraction(v) for v in lhs) != rhs:
                    return None
            image = [tuple(sum(c[s] * full[s][t] for s in range(4)) for t in range(4)) for c in O1_in_E]
            if QuatLattice.from_generators(alg, image) == O2:
                return full
            return None
        for y in cands[k - 1]:
            if all(alg.trd(alg.mul(imgs[i - 1], alg.conj(y))) == pair_trd[(i, k)] for i in range(1, k)):
                r = search(k + 1, imgs + [y])
                if r is not None:
                    return r
        return None

    return search(1, [])


@dataclass(frozen=True)
class ClassTypeData:
    alg: QuatAlgebra
    classes: ClassList
    forms: tuple[HermForm, ...]
    ideals: tuple[QuatLattice, ...]
    norms: tuple[int, ...]
    left_orders: tuple[QuatLattice, ...]
    unit_counts: tuple[int, ...]
    type_of: tuple[int, ...]
    type_reps: tuple[int, ...]
    bad_primes: frozenset[int]
    form_index: dict = field(compare=False, hash=False, repr=False)

    def __hash__(self):
        return hash((self.alg, self.forms, self.bad_primes))

    @property
    def h1(self) -> int:
        return len(self.ideals)

    @property
    def h2(self) -> int:
        return len(self.type_reps)


@lru_cache(maxsize=None)
def qa_class_type_data(ell: int, fp: FieldParams, bad_primes: frozenset | None = None) -> ClassTypeData:
    alg = QuatAlgebra(fp, ell)
    if bad_primes is None:
        bad_primes = default_bad_primes(fp.m, ell)
    classes = hf_enumerate_classes(ell, fp)
    forms = classes.support_reps
    O = standard_order(alg)
    ideals = tuple(right_ideal_of_form(f) for f in forms)
    for R in ideals:
        assert right_order(R) == O, "ideal is not a right ideal of the standard order"
    for i in range(len(ideals)):
        for j in range(i + 1, len(ideals)):
            if qa_same_class(ideals[i], ideals[j]) is not None:
                raise AssertionError(f"ideal classes {i} and {j} coincide")
    norms = tuple(f.a for f in forms)
    lefts = tuple(left_order(R) for R in ideals)
    units = tuple(len(L.elements_of_nrd(1)) for L in lefts)
    type_of = []
    type_reps = []
    for i, L in enumerate(lefts):
        for t, j in enumerate(type_reps):
            if units[i] == units[j] and orders_conjugate(L, lefts[j]) is not None:
                type_of.append(t)
                break
        else:
            type_of.append(len(type_reps))
            type_reps.append(i)
    return ClassTypeData(
        alg=alg,
        classes=classes,
        forms=forms,
        ideals=ideals,
        norms=norms,
        left_orders=lefts,
        unit_counts=units,
        type_of=tuple(type_of),
        type_reps=tuple(type_reps),
        bad_primes=frozenset(bad_primes),
        form_index={classes.support[k]: k for k in range(len(forms))},
    )


@dataclass(frozen=True)
class IdealRecord:
    ideal: QuatLattice
    norm: int
    class_index: int
    alpha: tuple  # alpha * ideals[class_index] == ideal


@lru_cache(maxsize=None)
def qa_ideals_of_norm(d: int, data: ClassTypeData, certify: bool = True) -> tuple[IdealRecord, ...]:
    """All right ideals of the standard order with reduced norm d, class-tagged.

    They are alpha * conj(O_K d' + O_K (h + eps)) with N(alpha) = e, e d' = d and
    N(h) = -ell mod d'. The class comes from the form [[d', h], [conj h, .]] and is
    certified by an explicit alpha with alpha R_i = I.
    """
    if any(d % p == 0 for p in data.bad_primes):
        raise BadPrimeNorm(f"{d} is divisible by a bad prime")
    alg, fp, ell = data.alg, data.alg.fp, data.alg.ell
    classes = data.classes
    seen = {}
    for e in range(1, d + 1):
        if d % e:
            continue
        dp = d // e
        alphas = [a for a in elements_of_norm(e, fp) if normalize_associate(a, fp)[1] == a]
        for h in residues_of_norm(dp, -ell, fp):
            g = _latimer_form(dp, h, ell, fp)
            red = canonical_with_transform(g)
            ci = data.form_index[classes.index[red[0].key]]
            P = right_ideal_of_form(g)
            beta = form_class_certificate(data.forms[ci], g, red) if certify else None
            for a in alphas:
                aq = (a[0], a[1], 0, 0)
                I = lat_left_mul(aq, P)
                if I in seen:
                    continue
                alpha = alg.mul(aq, alg.conj(beta)) if beta is not None else None
                if certify:
                    if alpha is None or lat_left_mul(alpha, data.ideals[ci]) != I:
                        raise AssertionError(f"class certificate failed for d={d}, h={h}")
                seen[I] = IdealRecord(I, d, ci, alpha)
    return tuple(seen.values())


def _latimer_form(dp: int, h, ell: int, fp: FieldParams) -> HermForm:
    return HermForm(dp, QuadInt(*h), (fp.norm(h) + ell) // dp, fp)


def ideal_class_counts(d: int, data: ClassTypeData) -> tuple[int, ...]:
    counts = [0] * data.h1
    for rec in qa_ideals_of_norm(d, data):
        counts[rec.class_index] += 1
    return tuple(counts)
