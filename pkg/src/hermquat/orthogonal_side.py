"""The rank-four orthogonal lattice attached to K and its vectors of fixed length.

Hermitian matrices [[x, y + omega z], [conj(y + omega z), w]] are identified with
(x, y, z, w) in Q^4; the determinant becomes the quadratic form
phi0[v] = x w - 1/2 S[(y, z)], where S is twice the Gram matrix of the norm form.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .hermitian_forms import ClassList, HermForm, hf_in_support, hf_r_class
from .lattice import box_representatives, hnf, inverse
from .quad_field import FieldParams, QuadInt, is_squarefree


class NotInSupport(ValueError):
    pass


@dataclass(frozen=True)
class GramData:
    fp: FieldParams
    S: tuple[tuple[int, int], tuple[int, int]]
    S0: tuple[tuple[int, ...], ...]
    level_q: int


def gram_data(fp: FieldParams) -> GramData:
    S = fp.norm_matrix()
    S0 = (
        (0, 0, 0, 1),
        (0, -S[0][0], -S[0][1], 0),
        (0, -S[1][0], -S[1][1], 0),
        (1, 0, 0, 0),
    )
    q = S[0][0] * S[1][1] - S[0][1] * S[1][0]
    return GramData(fp, S, S0, q)


def adj_value(s, g: GramData) -> int:
    """1/2 q S^{-1}[s] = 1/2 adj(S)[s], an integral binary form."""
    (p, r), (_, t) = g.S
    s1, s2 = s
    return (t * s1 * s1 - 2 * r * s1 * s2 + p * s2 * s2) // 2


@dataclass(frozen=True)
class OrthVector:
    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


def phi0(v, g: GramData) -> Fraction:
    x, y, z, w = (Fraction(t) for t in v)
    S = g.S
    return x * w - Fraction(S[0][0] * y * y + 2 * S[0][1] * y * z + S[1][1] * z * z, 2)


def phi0_bilinear(v, w, g: GramData) -> Fraction:
    return sum(Fraction(v[i]) * g.S0[i][j] * Fraction(w[j]) for i in range(4) for j in range(4)) / 2


def os_f_omega(h, fp: FieldParams) -> OrthVector:
    """Hermitian matrix (a HermForm or a triple (a, b, c)) to its vector in Q^4."""
    if isinstance(h, HermForm):
        a, b, c = h.a, h.b, h.c
    else:
        a, b, c = h
    return OrthVector((Fraction(a), Fraction(b[0]), Fraction(b[1]), Fraction(c)))


def os_f_omega_inv(v) -> tuple:
    x, y, z, w = v
    return (x, QuadInt(y, z), w)


def rational_gcd(values) -> Fraction:
    values = [Fraction(t) for t in values]
    den = 1
    for t in values:
        den = math.lcm(den, t.denominator)
    g = 0
    for t in values:
        g = math.gcd(g, int(t * den))
    return Fraction(g, den)


def os_in_support(v, ell: int, g: GramData) -> bool:
    """phi0[v] = ell and the functionals phi0(v, .) generate exactly 1/2 Z."""
    if phi0(v, g) != ell:
        return False
    s0v = [sum(g.S0[i][j] * Fraction(v[j]) for j in range(4)) for i in range(4)]
    return rational_gcd(s0v) == 1


def xi_vector(ell: int) -> OrthVector:
    return OrthVector((Fraction(1), Fraction(0), Fraction(0), Fraction(ell)))


@lru_cache(maxsize=None)
def _lattice_reps(d: int, S) -> np.ndarray:
    cols = [[d * S[0][0], d * S[1][0]], [d * S[0][1], d * S[1][1]]]
    H = hnf(cols)
    return np.array(box_representatives(H), dtype=np.int64)


def orbit_vectors(d: int, ell: int, g: GramData) -> list[OrthVector]:
    """The vectors ((1/2 q S^-1[s] - D)/(q d), S^-1 s, d) with D = -ell q, one per
    s in Z^2 / d S Z^2 satisfying the congruence D = 1/2 q S^-1[s] mod q d.
    """
    q = g.level_q
    D = -ell * q
    reps = _lattice_reps(d, g.S)
    (p, r), (_, t) = g.S
    s1, s2 = reps[:, 0], reps[:, 1]
    vals = (t * s1 * s1 - 2 * r * s1 * s2 + p * s2 * s2) // 2
    mask = (vals - D) % (q * d) == 0
    Sinv = inverse(g.S)
    out = []
    for a, b, val in zip(s1[mask], s2[mask], vals[mask]):
        a, b, val = int(a), int(b), int(val)
        y = Sinv[0][0] * a + Sinv[0][1] * b
        z = Sinv[1][0] * a + Sinv[1][1] * b
        out.append(OrthVector((Fraction(val - D, q * d), y, z, Fraction(d))))
    return out


def n_counts_direct(d: int, classes: ClassList, g: GramData) -> tuple[int, ...]:
    """Sort the congruence solutions for d by the class of their Hermitian matrix."""
    counts = Counter()
    for v in orbit_vectors(d, classes.ell, g):
        assert phi0(v, g) == classes.ell
        x, b, w = os_f_omega_inv(v.coords)
        if x.denominator != 1 or b.x.denominator != 1 or b.y.denominator != 1:
            raise AssertionError(f"non-integral transported vector {v}")
        f = HermForm(int(x), QuadInt(int(b.x), int(b.y)), int(w), g.fp)
        counts[classes.class_of(f)] += 1
    return tuple(counts[i] for i in range(len(classes)))


def os_n_xi_d(xi_class: int, d: int, classes: ClassList, g: GramData, path: str = "direct") -> int:
    """n(xi; d) for xi in the orbit of the support class with index xi_class."""
    f = classes.reps[xi_class]
    if not hf_in_support(f):
        raise NotInSupport(f"class {xi_class} is outside the support")
    if path == "direct":
        return n_counts_direct(d, classes, g)[xi_class]
    if path == "fast":
        return hf_r_class(f, d, classes)
    raise ValueError(f"unknown path {path!r}")


@dataclass(frozen=True)
class MaximalityVerdict:
    m: int
    ell: int
    maximal: bool
    witness: tuple | None
    conditions_hold: bool
    squarefree_shortcut: bool | None

    @property
    def consistent(self) -> bool:
        return self.maximal or not self.conditions_hold


def stabiliser_conditions(m: int, ell: int) -> bool:
    """Hypotheses under which the stabiliser of xi is expected to be maximal."""
    if not is_squarefree(ell) or math.gcd(ell, m) != 1:
        return False
    if m % 4 == 3:
        return True
    if m % 4 == 1:
        return ell % 4 == 1
    return False


def os_check_maximal(ell: int, g: GramData) -> MaximalityVerdict:
    """Scan M*/M for M = Z^3 with Gram 1/2 diag(-2 ell, -S) for an integral overlattice."""
    S = g.S
    T2 = [[-2 * ell, 0, 0], [0, -S[0][0], -S[0][1]], [0, -S[1][0], -S[1][1]]]
    T2inv = inverse(T2)
    H = hnf([[T2[i][j] for i in range(3)] for j in range(3)])
    witness = None
    for t in box_representatives(H):
        x = [sum(T2inv[i][j] * t[j] for j in range(3)) for i in range(3)]
        if all(c.denominator == 1 for c in x):
            continue
        val = sum(x[i] * T2[i][j] * x[j] for i in range(3) for j in range(3)) / 2
        if val.denominator == 1:
            witness = tuple(x)
            break
    m = g.fp.m
    shortcut = None
    if m % 4 == 3:
        # |det(2T)| / 2 = ell * q
        shortcut = is_squarefree(ell * g.level_q)
    return MaximalityVerdict(m, ell, witness is None, witness, stabiliser_conditions(m, ell), shortcut)
