"""Positive definite binary Hermitian forms over O_K and their SL2(O_K)-classes.

A form is the matrix [[a, b], [conj(b), c]] with a, c positive integers and b in
O_K; its value at (u, v) is a N(u) + Tr(b u conj(v)) + c N(v) and its
determinant is ell = a c - N(b). Matrices act by f -> A f A*.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .lattice import short_vectors
from .quad_field import (
    _qi,
    FieldParams,
    QuadInt,
    ZERO,
    add,
    neg,
    qf_bezout,
    qf_is_coprime_pair,
    scale,
    sub,
)


class NotPositiveDefinite(ValueError):
    pass


class DeterminantMismatch(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class WrongValue(ValueError):
    pass


class ClassEnumerationUnstable(RuntimeError):
    pass


@dataclass(frozen=True)
class HermForm:
    a: int
    b: QuadInt
    c: int
    fp: FieldParams
    ell: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "b", QuadInt(*self.b))
        ell = self.a * self.c - self.fp.norm(self.b)
        if self.a <= 0 or self.c <= 0 or ell <= 0:
            raise NotPositiveDefinite(f"[[{self.a}, {self.b}], [., {self.c}]] is not positive definite")
        object.__setattr__(self, "ell", ell)

    def __repr__(self) -> str:
        return f"HermForm(a={self.a}, b=({self.b.x}, {self.b.y}), c={self.c}, m={self.fp.m})"

    @property
    def key(self) -> tuple:
        b = self.b
        return (self.a, self.fp.norm(b), self.fp.trace(b), b.x, b.y)

    def matrix(self):
        fp = self.fp
        return ((QuadInt(self.a, 0), self.b), (fp.conj(self.b), QuadInt(self.c, 0)))

    def as_json(self) -> dict:
        return {"a": str(self.a), "b": [str(self.b.x), str(self.b.y)], "c": str(self.c)}


def form_from_entries(a: int, b, ell: int, fp: FieldParams) -> HermForm:
    """Build [[a, b], [conj b, c]] with c forced by the determinant."""
    n = fp.norm(b) + ell
    if n % a:
        raise ValueError(f"{a} does not divide N(b) + ell")
    return HermForm(a, QuadInt(*b), n // a, fp)


def diagonal_form(ell: int, fp: FieldParams) -> HermForm:
    return HermForm(1, ZERO, ell, fp)


def hf_eval(f: HermForm, u, v) -> int:
    fp = f.fp
    return f.a * fp.norm(u) + fp.trace(fp.mul(f.b, fp.mul(u, fp.conj(v)))) + f.c * fp.norm(v)


def cross_term(f: HermForm, r, s, u, v) -> QuadInt:
    """(r, s) f (conj u, conj v)^T, the off-diagonal entry after a change of basis."""
    fp = f.fp
    first = add(scale(f.a, r), fp.mul(s, fp.conj(f.b)))
    second = add(fp.mul(r, f.b), scale(f.c, s))
    return add(fp.mul(first, fp.conj(u)), fp.mul(second, fp.conj(v)))


def hf_transform(f: HermForm, A) -> HermForm:
    """Return A f A* for a 2x2 matrix A over O_K."""
    (r, s), (u, v) = A
    return HermForm(hf_eval(f, r, s), cross_term(f, r, s, u, v), hf_eval(f, u, v), f.fp)


def mat_mul(A, B, fp: FieldParams):
    return tuple(
        tuple(add(fp.mul(A[i][0], B[0][j]), fp.mul(A[i][1], B[1][j])) for j in range(2))
        for i in range(2)
    )


def mat_det(A, fp: FieldParams) -> QuadInt:
    return sub(fp.mul(A[0][0], A[1][1]), fp.mul(A[0][1], A[1][0]))


def mat_inv_sl2(A):
    (r, s), (u, v) = A
    return ((v, neg(s)), (neg(u), r))


IDENTITY = ((QuadInt(1, 0), ZERO), (ZERO, QuadInt(1, 0)))
SWAP = ((ZERO, QuadInt(1, 0)), (QuadInt(-1, 0), ZERO))


def hf_in_support(f: HermForm) -> bool:
    """gcd(a, c, Tr(b), Tr(b omega)) == 1."""
    fp = f.fp
    tb = fp.trace(f.b)
    tbw = fp.trace(fp.mul(f.b, QuadInt(0, 1)))
    return math.gcd(f.a, f.c, tb, tbw) == 1


@lru_cache(maxsize=None)
def gram2(f: HermForm) -> tuple[tuple[int, ...], ...]:
    """Integral Gram matrix of 2f on Z^4 with coordinates (u.x, u.y, v.x, v.y)."""
    fp = f.fp
    N = fp.norm_matrix()
    basis = (QuadInt(1, 0), QuadInt(0, 1))
    M = [[fp.trace(fp.mul(f.b, fp.mul(basis[i], fp.conj(basis[j])))) for j in range(2)] for i in range(2)]
    G = [[0] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            G[i][j] = f.a * N[i][j]
            G[2 + i][2 + j] = f.c * N[i][j]
            G[i][2 + j] = M[i][j]
            G[2 + j][i] = M[i][j]
    return tuple(map(tuple, G))


@lru_cache(maxsize=4096)
def vectors_up_to(f: HermForm, bound: int) -> tuple[tuple[QuadInt, QuadInt, int], ...]:
    """All nonzero (u, v) with f(u, v) <= bound, with their values."""
    out = []
    for x, val in short_vectors(gram2(f), 2 * bound):
        if val == 0:
            continue
        out.append((_qi(QuadInt, (x[0], x[1])), _qi(QuadInt, (x[2], x[3])), val // 2))
    out.sort(key=lambda t: t[2])
    return tuple(out)


_TABLES: dict = {}


def value_table(f: HermForm, bound: int) -> dict[int, tuple[tuple[QuadInt, QuadInt], ...]]:
    """Vectors of f bucketed by value, covering at least all values <= bound."""
    have = _TABLES.get(f)
    if have is not None and have[0] >= bound:
        return have[1]
    bound = max(bound, 32, 4 * have[0] if have is not None else 0)
    table = defaultdict(list)
    for u, v, val in vectors_up_to(f, bound):
        table[val].append((u, v))
    frozen = {k: tuple(v) for k, v in table.items()}
    _TABLES[f] = (bound, frozen)
    return frozen


def vectors_of_value(f: HermForm, d: int):
    return value_table(f, d).get(d, ())


def _best_translate(a: int, b, fp: FieldParams):
    """Minimise (N, Tr, x, y) of b + a*s over s in O_K; returns (b', s)."""
    bx, by = b
    fx, fy = (-bx) // a, (-by) // a
    half, k = fp.half, fp.k
    best = None
    for sx in range(fx - 1, fx + 3):
        x = bx + a * sx
        for sy in range(fy - 1, fy + 3):
            y = by + a * sy
            if half:
                key = (x * x + x * y + k * y * y, 2 * x + y, x, y)
            else:
                key = (x * x + k * y * y, 2 * x, x, y)
            if best is None or key < best:
                best = key
                s = (sx, sy)
    return QuadInt(best[2], best[3]), QuadInt(*s)


def _translation(s: QuadInt, fp: FieldParams):
    # [[1, 0], [conj s, 1]] sends b to b + a*s
    return ((QuadInt(1, 0), ZERO), (fp.conj(s), QuadInt(1, 0)))


def greedy_reduce(f: HermForm, track: bool = False):
    """Alternate translating b and swapping until a <= c and b is short mod a."""
    fp, ell = f.fp, f.ell
    a, b, c = f.a, f.b, f.c
    T = IDENTITY
    while True:
        b, s = _best_translate(a, b, fp)
        c = (fp.norm(b) + ell) // a
        if track:
            T = mat_mul(_translation(s, fp), T, fp)
        if c < a:
            a, c, b = c, a, neg(fp.conj(b))
            if track:
                T = mat_mul(SWAP, T, fp)
        else:
            break
    return HermForm(a, b, c, fp), T


def _canonical(f: HermForm, track: bool):
    fp, ell = f.fp, f.ell
    g, T = greedy_reduce(f, track)
    vecs = vectors_up_to(g, g.a)
    amin = vecs[0][2]
    best = None
    for r, s, val in vecs:
        if val != amin:
            break
        x, y = qf_bezout(r, s, fp)
        u, v = neg(y), x
        b2 = cross_term(g, r, s, u, v)
        b3, t = _best_translate(amin, b2, fp)
        key = (fp.norm(b3), fp.trace(b3), b3.x, b3.y)
        if best is None or key < best[0]:
            best = (key, b3, ((r, s), (u, v)), t)
    _, b, C, t = best
    canon = HermForm(amin, b, (fp.norm(b) + ell) // amin, fp)
    if track:
        T = mat_mul(_translation(t, fp), mat_mul(C, T, fp), fp)
    return canon, T


@lru_cache(maxsize=200000)
def canonical_form(f: HermForm) -> HermForm:
    """The distinguished representative of the class of f.

    It has a equal to the minimum of f, and among all first-row completions
    and translations the least (N(b), Tr(b), b.x, b.y).
    """
    return _canonical(f, False)[0]


@lru_cache(maxsize=200000)
def canonical_with_transform(f: HermForm):
    """(canonical form, T) with T f T* equal to the canonical form."""
    canon, T = _canonical(f, True)
    assert hf_transform(f, T) == canon
    return canon, T


def hf_are_equivalent(f: HermForm, g: HermForm):
    """Search for A in SL2(O_K) with A f A* = g; returns A or None.

    Rows of A must represent g.a and g.c by f, so both row sets are finite.
    """
    if f.fp != g.fp:
        raise DeterminantMismatch("forms over different fields")
    if f.ell != g.ell:
        raise DeterminantMismatch(f"determinants {f.ell} and {g.ell} differ")
    fp = f.fp
    tops = vectors_of_value(f, g.a)
    bottoms = vectors_of_value(f, g.c)
    one = QuadInt(1, 0)
    for r, s in tops:
        for u, v in bottoms:
            if mat_det(((r, s), (u, v)), fp) != one:
                continue
            if cross_term(f, r, s, u, v) == g.b:
                return ((r, s), (u, v))
    return None


def hf_automorphs(f: HermForm) -> list:
    fp = f.fp
    one = QuadInt(1, 0)
    out = []
    for r, s in vectors_of_value(f, f.a):
        for u, v in vectors_of_value(f, f.c):
            if mat_det(((r, s), (u, v)), fp) == one and cross_term(f, r, s, u, v) == f.b:
                out.append(((r, s), (u, v)))
    return out


@lru_cache(maxsize=None)
def unit_order(f: HermForm) -> int:
    """e(f), the number of automorphs of f in SL2(O_K)."""
    return len(hf_automorphs(f))


def hf_all_reps(f: HermForm, d: int) -> int:
    """q(f, d): number of (u, v) in O_K^2 with f(u, v) = d."""
    return len(vectors_of_value(f, d))


def hf_primitive_reps(f: HermForm, d: int):
    """p(f, d) and the list of primitive (u, v) with f(u, v) = d."""
    wit = [(u, v) for u, v in vectors_of_value(f, d) if qf_is_coprime_pair(u, v, f.fp)]
    return len(wit), wit


def reduce_mod(h, d: int) -> QuadInt:
    return QuadInt(h[0] % d, h[1] % d)


def hf_phi_map(f: HermForm, u, v, d: int) -> QuadInt:
    """Complete (u, v) to the bottom row of some A in SL2(O_K); return (A f A*)_12 mod d."""
    fp = f.fp
    if hf_eval(f, u, v) != d:
        raise WrongValue(f"f({u}, {v}) != {d}")
    if not qf_is_coprime_pair(u, v, fp):
        raise NotPrimitive(f"({u}, {v}) is not primitive")
    x, y = qf_bezout(u, v, fp)
    # x u + y v = 1, so the row (y, -x) completes (u, v) with determinant 1
    r, s = y, neg(x)
    return reduce_mod(cross_term(f, r, s, u, v), d)


def residues_of_norm(d: int, target: int, fp: FieldParams) -> list[QuadInt]:
    """Box representatives h mod d with N(h) = target mod d."""
    xs, ys = np.meshgrid(np.arange(d, dtype=np.int64), np.arange(d, dtype=np.int64), indexing="ij")
    if fp.half:
        n = xs * xs + xs * ys + fp.k * ys * ys
    else:
        n = xs * xs + fp.m * ys * ys
    mask = (n - target) % d == 0
    return [QuadInt(int(x), int(y)) for x, y in zip(xs[mask], ys[mask])]


def form_of_residue(h: QuadInt, d: int, ell: int, fp: FieldParams) -> HermForm:
    """[[(N(h) + ell)/d, h], [conj h, d]]."""
    return HermForm((fp.norm(h) + ell) // d, h, d, fp)


@dataclass(frozen=True)
class ClassList:
    """The SL2(O_K)-classes of forms of a given determinant."""

    ell: int
    fp: FieldParams
    reps: tuple[HermForm, ...]
    support: tuple[int, ...]
    unit_orders: tuple[int, ...]
    index: dict = field(compare=False, hash=False, repr=False)

    def __hash__(self):
        return hash((self.ell, self.fp, self.reps))

    def __len__(self):
        return len(self.reps)

    @property
    def support_reps(self) -> tuple[HermForm, ...]:
        return tuple(self.reps[i] for i in self.support)

    def class_of(self, f: HermForm) -> int:
        return self.index[canonical_form(f).key]


def _candidate_forms(ell: int, fp: FieldParams, bound: int) -> Iterable[HermForm]:
    for a in range(1, bound + 1):
        for h in residues_of_norm(a, -ell, fp):
            yield form_from_entries(a, h, ell, fp)


def class_search_bound(ell: int, fp: FieldParams) -> int:
    # sqrt(2) is Hermite's constant in dimension 4
    return max(math.isqrt(4 * ell - 1) + 1, math.isqrt(ell * abs(fp.disc) // 2))


def _canonical_set(ell, fp, bound):
    return {canonical_form(f) for f in _candidate_forms(ell, fp, bound)}


@lru_cache(maxsize=None)
def hf_enumerate_classes(ell: int, fp: FieldParams) -> ClassList:
    if ell < 1:
        raise ValueError("ell must be positive")
    bound = class_search_bound(ell, fp)
    found = _canonical_set(ell, fp, bound)
    if _canonical_set(ell, fp, 2 * bound) != found:
        raise ClassEnumerationUnstable(f"class list for ell={ell}, m={fp.m} grew when the bound doubled")
    reps = tuple(sorted(found, key=lambda f: f.key))
    return ClassList(
        ell=ell,
        fp=fp,
        reps=reps,
        support=tuple(i for i, f in enumerate(reps) if hf_in_support(f)),
        unit_orders=tuple(unit_order(f) for f in reps),
        index={f.key: i for i, f in enumerate(reps)},
    )


@lru_cache(maxsize=None)
def r_class_counts(d: int, classes: ClassList) -> tuple[int, ...]:
    """For each class, the number of h mod d with N(h) = -ell mod d whose form lies in it."""
    counts = [0] * len(classes)
    for h in residues_of_norm(d, -classes.ell, classes.fp):
        counts[classes.class_of(form_of_residue(h, d, classes.ell, classes.fp))] += 1
    return tuple(counts)


def hf_r_class(f: HermForm, d: int, classes: ClassList) -> int:
    return r_class_counts(d, classes)[classes.class_of(f)]


def r_total(d: int, ell: int, fp: FieldParams) -> int:
    """r(d, -ell): solutions of N(h) = -ell mod d."""
    return len(residues_of_norm(d, -ell, fp))


def phi_bijectivity(classes: ClassList, d: int) -> dict:
    """Check that the primitive representations of d by all classes cover each
    residue h (N(h) = -ell mod d) exactly e(f) times, all from the class of h's form.
    """
    fp, ell = classes.fp, classes.ell
    hits = defaultdict(lambda: defaultdict(int))
    for i, f in enumerate(classes.reps):
        _, prim = hf_primitive_reps(f, d)
        for u, v in prim:
            hits[hf_phi_map(f, u, v, d)][i] += 1
    targets = residues_of_norm(d, -ell, fp)
    bad = []
    for h in targets:
        i = classes.class_of(form_of_residue(h, d, ell, fp))
        got = dict(hits.get(h, {}))
        if got != {i: classes.unit_orders[i]}:
            bad.append((h, got))
    stray = [h for h in hits if fp.norm(h) % d != (-ell) % d]
    total_images = sum(sum(v.values()) for v in hits.values())
    return {
        "d": d,
        "residues": len(targets),
        "images": total_images,
        "mismatches": bad,
        "stray": stray,
        "ok": not bad and not stray,
    }
