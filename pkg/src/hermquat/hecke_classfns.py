"""Brandt matrices on ideal classes, Hecke eigenforms on order types, and the
matching between their Dirichlet coefficients and the completed partial zetas.

B(d)[i][j] counts the right ideals J inside I_i with nrd(J) = d nrd(I_i) and J
in the class of I_j. It is computed from the elements of I_i I_j^-1 of reduced
norm d N_i / N_j, divided by the unit count of the left order of I_j.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy

from .quaternion_orders import (
    ClassTypeData,
    ideal_class_counts,
    lat_conj,
    lat_product,
    lat_scale,
    theta_counts,
)
from .report import CheckRecord
from .zeta_series import DirichletCoeffs, coprime_to, zs_zeta_hat

NUMERIC_DIGITS = 50
NUMERIC_TOL = mpmath.mpf("1e-20")


def sigma(n: int) -> int:
    return sum(k for k in range(1, n + 1) if n % k == 0)


def is_prime(n: int) -> bool:
    return n > 1 and all(n % p for p in range(2, int(n ** 0.5) + 1))


@lru_cache(maxsize=None)
def _pair_theta(data: ClassTypeData, i: int, j: int, n_max: int) -> dict[int, int]:
    Ri, Rj = data.ideals[i], data.ideals[j]
    Ni, Nj = data.norms[i], data.norms[j]
    C = lat_scale(lat_product(Ri, lat_conj(Rj)), Fraction(1, Nj))
    return theta_counts(C, Fraction(Ni, Nj), n_max)


def brandt_counts(d: int, data: ClassTypeData, n_max: int | None = None) -> list[list[int]]:
    """Raw element counts #{a in I_i I_j^-1 : nrd(a) = d N_i / N_j}."""
    n_max = max(d, n_max or d)
    h = data.h1
    return [[_pair_theta(data, i, j, n_max).get(d, 0) for j in range(h)] for i in range(h)]


def hk_brandt(d: int, data: ClassTypeData, n_max: int | None = None) -> list[list[Fraction]]:
    counts = brandt_counts(d, data, n_max)
    w = data.unit_counts
    B = []
    for i, row in enumerate(counts):
        B.append([Fraction(c, w[j]) for j, c in enumerate(row)])
    return B


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _real_spectrum(B) -> bool:
    """All roots of the characteristic polynomial are real (counted with multiplicity)."""
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in B])
    poly = sympy.Poly(M.charpoly(sympy.Symbol("x")).as_expr(), sympy.Symbol("x"))
    return len(sympy.real_roots(poly)) == poly.degree()


def brandt_property_checks(data: ClassTypeData, primes: list[int], n_max: int | None = None) -> list[CheckRecord]:
    """Integrality, row sums sigma(p), weighted symmetry, real spectrum,
    commutation, and the constant function as an eigenvector with eigenvalue p + 1."""
    cfg = {"m": data.alg.fp.m, "ell": data.alg.ell}
    h = data.h1
    w = data.unit_counts
    mats = {p: hk_brandt(p, data, n_max or max(primes)) for p in primes}
    out = []
    for p, B in mats.items():
        par = {**cfg, "p": p}
        integral = all(x.denominator == 1 and x >= 0 for row in B for x in row)
        out.append(CheckRecord("brandt-integral", par, integral, True, integral))
        sums = [sum(row) for row in B]
        out.append(CheckRecord("brandt-row-sums", par, sums, [sigma(p)] * h, all(s == sigma(p) for s in sums)))
        sym = all(B[i][j] * w[j] == B[j][i] * w[i] for i in range(h) for j in range(h))
        out.append(CheckRecord("brandt-weighted-symmetry", par, sym, True, sym))
        ones = [sum(row) for row in B]
        out.append(CheckRecord("brandt-eisenstein", par, ones, [p + 1] * h, all(v == p + 1 for v in ones)))
        real = _real_spectrum(B)
        out.append(CheckRecord("brandt-real-eigenvalues", par, real, True, real))
        trivial = ideal_class_counts(p, data)
        out.append(CheckRecord("brandt-row0-vs-ideals", par, [int(x) for x in B[0]], list(trivial), [int(x) for x in B[0]] == list(trivial)))
    ps = list(mats)
    for a in range(len(ps)):
        for b in range(a + 1, len(ps)):
            A, B = mats[ps[a]], mats[ps[b]]
            ok = _matmul(A, B) == _matmul(B, A)
            out.append(CheckRecord("brandt-commute", {**cfg, "p": ps[a], "q": ps[b]}, ok, True, ok))
    return out


def type_operator(B, data: ClassTypeData):
    """The action of B on functions constant on the fibres of rho, as a matrix on
    types; None if that subspace is not preserved."""
    h2 = data.h2
    fibres = [[i for i in range(data.h1) if data.type_of[i] == t] for t in range(h2)]
    A = []
    for s in range(h2):
        rows = [[sum(B[i][j] for j in fibres[t]) for t in range(h2)] for i in fibres[s]]
        if any(r != rows[0] for r in rows):
            return None
        A.append(rows[0])
    return A


@dataclass
class ClassFunction:
    """A function on types, pulled back to ideal classes through rho."""

    type_values: tuple
    class_values: tuple
    eigenvalues: dict
    exact: bool

    def at_identity(self):
        return self.class_values[0]


def _exact_eigenvectors(mats: list) -> list[tuple] | None:
    """Simultaneous eigenvectors over Q, if all eigenvalues of a generic
    combination are rational; otherwise None."""
    n = len(mats[0])
    M = sympy.zeros(n, n)
    for c, A in enumerate(mats):
        M += (c + 1) * sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in A])
    x = sympy.Symbol("x")
    poly = sympy.Poly(M.charpoly(x).as_expr(), x)
    if any(sympy.degree(fac, x) > 1 for fac, _ in sympy.factor_list(poly.as_expr())[1]):
        return None
    vecs = []
    basis = [sympy.eye(n)[:, k] for k in range(n)]
    spaces = [basis]
    for A in mats:
        SA = sympy.Matrix([[sympy.Rational(t.numerator, t.denominator) for t in row] for row in A])
        new_spaces = []
        for space in spaces:
            V = sympy.Matrix.hstack(*space)
            # restriction of SA to span(V): solve V X = SA V
            X = (V.T * V).inv() * V.T * SA * V
            for val, mult, evs in X.eigenvects():
                if not val.is_rational:
                    return None
                new_spaces.append([V * e for e in evs])
        spaces = new_spaces
    for space in spaces:
        for v in space:
            vecs.append(tuple(Fraction(int(sympy.fraction(t)[0]), int(sympy.fraction(t)[1])) for t in v))
    return vecs


def _numeric_eigenvectors(mats: list) -> list[tuple]:
    mpmath.mp.dps = NUMERIC_DIGITS
    n = len(mats[0])
    M = mpmath.matrix(n, n)
    for c, A in enumerate(mats):
        for i in range(n):
            for j in range(n):
                M[i, j] += (c + 1) * mpmath.mpf(A[i][j].numerator) / A[i][j].denominator
    _, ER = mpmath.eig(M)
    return [tuple(ER[i, k] for i in range(n)) for k in range(n)]


def _normalise(vec, idx0: int):
    top = vec[idx0]
    if top != 0:
        return tuple(v / top for v in vec)
    lead = next(v for v in vec if v != 0)
    return tuple(v / lead for v in vec)


def hk_eigensystem(data: ClassTypeData, primes: list[int], n_max: int | None = None) -> list[ClassFunction]:
    """Simultaneous eigenforms of the Brandt operators on rho-constant functions."""
    n_max = n_max or max(primes)
    ops = []
    for p in primes:
        A = type_operator(hk_brandt(p, data, n_max), data)
        if A is None:
            raise ValueError(f"rho-constant functions are not preserved by B({p})")
        ops.append(A)
    t0 = data.type_of[0]
    vecs = _exact_eigenvectors(ops)
    exact = vecs is not None
    if not exact:
        vecs = _numeric_eigenvectors(ops)
    out = []
    for v in vecs:
        v = _normalise(v, t0)
        eig = {}
        for p, A in zip(primes, ops):
            Av = [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
            k = next(i for i in range(len(v)) if v[i] != 0 and (exact or abs(v[i]) > NUMERIC_TOL))
            eig[p] = Av[k] / v[k]
        out.append(ClassFunction(tuple(v), tuple(v[data.type_of[i]] for i in range(data.h1)), eig, exact))
    return out


def hk_L_coeffs(f: ClassFunction, data: ClassTypeData, n_max: int) -> DirichletCoeffs:
    """c(d) = (sum over right ideals I of norm d of f(rho(I))) / f(1) for good d."""
    f1 = f.at_identity()
    if f1 == 0:
        raise ZeroDivisionError("eigenform vanishes at the identity class")
    c = []
    for d in range(1, n_max + 1):
        if not coprime_to(d, data.bad_primes):
            c.append(0)
            continue
        counts = ideal_class_counts(d, data)
        c.append(sum(n * f.class_values[k] for k, n in enumerate(counts)) / f1)
    return DirichletCoeffs(n_max, tuple(c), "L")


def _equal(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) < NUMERIC_TOL


def hk_verify_sub_main(data: ClassTypeData, n_max: int, primes: list[int] | None = None) -> list[CheckRecord]:
    """sum_i f(rho(i)) zeta_hat_i(d) = f(1) c(d) for each eigenform f and good d,
    plus c(d) against the Brandt eigenvalue at d, and the per-type sums of
    zeta_hat against the per-type ideal counts."""
    classes = data.classes
    P = data.bad_primes
    cfg = {"m": data.alg.fp.m, "ell": data.alg.ell}
    if primes is None:
        primes = [p for p in range(2, n_max + 1) if is_prime(p) and p not in P][:4]
    forms = hk_eigensystem(data, primes, n_max)
    hats = [zs_zeta_hat(i, classes, P, n_max) for i in classes.support]
    out = []
    for k, f in enumerate(forms):
        f1 = f.at_identity()
        L = hk_L_coeffs(f, data, n_max) if f1 != 0 else None
        for d in range(1, n_max + 1):
            if not coprime_to(d, P):
                continue
            lhs = sum(f.class_values[i] * hats[i][d] for i in range(data.h1))
            rhs = f1 * L[d] if L is not None else 0
            par = {**cfg, "form": k, "d": d}
            out.append(CheckRecord("sub-main", par, lhs, rhs, _equal(lhs, rhs, f.exact),
                                   "" if f.exact else "numeric, tolerance 1e-20"))
            if L is not None and d > 1:
                B = type_operator(hk_brandt(d, data, n_max), data)
                v = f.type_values
                t = data.type_of[0]
                lam = sum(B[t][j] * v[j] for j in range(len(v))) / v[t]
                out.append(CheckRecord("L-coeff-eigenvalue", par, L[d], lam, _equal(L[d], lam, f.exact),
                                       "" if f.exact else "numeric, tolerance 1e-20"))
    for d in range(1, n_max + 1):
        if not coprime_to(d, P):
            continue
        counts = ideal_class_counts(d, data)
        for t in range(data.h2):
            fib = [i for i in range(data.h1) if data.type_of[i] == t]
            lhs = sum(hats[i][d] for i in fib)
            rhs = sum(counts[i] for i in fib)
            out.append(CheckRecord("type-aggregation", {**cfg, "type": t, "d": d}, lhs, rhs, lhs == rhs))
    return out
