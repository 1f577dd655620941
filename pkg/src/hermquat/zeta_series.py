"""Truncated Dirichlet series: the partial zeta functions of orbits and their
completion by the Dedekind zeta function of K.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .hermitian_forms import ClassList, hf_all_reps, r_class_counts, unit_order
from .orthogonal_side import gram_data, n_counts_direct
from .quad_field import FieldParams, dedekind_coeffs
from .quaternion_orders import ClassTypeData, ideal_class_counts
from .report import CheckRecord


@dataclass(frozen=True)
class DirichletCoeffs:
    """Coefficients c(1), ..., c(n_max) of sum c(n) n^-s."""

    n_max: int
    coeffs: tuple
    label: str = ""

    def __post_init__(self):
        if len(self.coeffs) != self.n_max:
            raise ValueError("coefficient count does not match n_max")

    def __getitem__(self, n: int):
        if not 1 <= n <= self.n_max:
            raise IndexError(n)
        return self.coeffs[n - 1]

    def items(self):
        return [(n, self.coeffs[n - 1]) for n in range(1, self.n_max + 1)]


def coprime_to(n: int, primes) -> bool:
    return all(n % p for p in primes)


def zs_convolve(A: DirichletCoeffs, B: DirichletCoeffs, label: str = "") -> DirichletCoeffs:
    n_max = min(A.n_max, B.n_max)
    c = [0] * n_max
    for i in range(1, n_max + 1):
        a = A[i]
        if not a:
            continue
        for j in range(1, n_max // i + 1):
            c[i * j - 1] += a * B[j]
    return DirichletCoeffs(n_max, tuple(c), label)


def zs_restrict(A: DirichletCoeffs, primes) -> DirichletCoeffs:
    return DirichletCoeffs(
        A.n_max, tuple(c if coprime_to(n, primes) else 0 for n, c in A.items()), A.label
    )


def riemann_zeta(n_max: int) -> DirichletCoeffs:
    return DirichletCoeffs(n_max, (1,) * n_max, "zeta")


def dedekind_zeta(fp: FieldParams, n_max: int) -> DirichletCoeffs:
    return DirichletCoeffs(n_max, dedekind_coeffs(fp, n_max), "zeta_K")


@lru_cache(maxsize=None)
def _n_counts(d: int, classes: ClassList, path: str) -> tuple[int, ...]:
    if path == "fast":
        return r_class_counts(d, classes)
    return n_counts_direct(d, classes, gram_data(classes.fp))


def zs_zeta_xi(xi_class: int, classes: ClassList, bad_primes, n_max: int, path: str = "fast") -> DirichletCoeffs:
    """c(N) = n(xi; N) for N prime to the bad primes, else 0."""
    c = tuple(
        _n_counts(n, classes, path)[xi_class] if coprime_to(n, bad_primes) else 0
        for n in range(1, n_max + 1)
    )
    return DirichletCoeffs(n_max, c, f"zeta_xi[{xi_class}]")


def zs_zeta_hat(xi_class: int, classes: ClassList, bad_primes, n_max: int, path: str = "fast") -> DirichletCoeffs:
    zk = dedekind_zeta(classes.fp, n_max)
    z = zs_convolve(zk, zs_zeta_xi(xi_class, classes, bad_primes, n_max, path))
    return DirichletCoeffs(n_max, zs_restrict(z, bad_primes).coeffs, f"zeta_hat[{xi_class}]")


def q_series(f, n_max: int) -> DirichletCoeffs:
    return DirichletCoeffs(n_max, tuple(hf_all_reps(f, n) for n in range(1, n_max + 1)), "q")


def _hat_rep_failures(classes: ClassList, n_max: int, i: int) -> list[int]:
    """d <= n_max where e(f) zeta_hat(d) != q(f, d) with no primes removed."""
    f = classes.reps[i]
    hat = zs_zeta_hat(i, classes, (), n_max)
    e = unit_order(f)
    return [d for d in range(1, n_max + 1) if e * hat[d] != hf_all_reps(f, d)]


def minimal_prime_set(failing: list[int], candidates) -> tuple[int, ...] | None:
    """Smallest set of candidate primes dividing every failing index, or None."""
    candidates = sorted(candidates)
    for size in range(len(candidates) + 1):
        for P in combinations(candidates, size):
            if all(any(d % p == 0 for p in P) for d in failing):
                return P
    return None


def zs_verify_hat_identities(data: ClassTypeData, n_max: int, with_ideals: bool = True) -> list[CheckRecord]:
    """e(f_i) zeta_hat_i(d) = q(f_i, d), and zeta_hat_i(d) = number of right ideals
    of norm d in class i, for d prime to the bad primes.
    """
    classes = data.classes
    P = data.bad_primes
    cfg = {"m": classes.fp.m, "ell": classes.ell}
    out = []
    for k, i in enumerate(classes.support):
        f = classes.reps[i]
        e = unit_order(f)
        hat = zs_zeta_hat(i, classes, P, n_max)
        for d in range(1, n_max + 1):
            if not coprime_to(d, P):
                continue
            q = hf_all_reps(f, d)
            out.append(CheckRecord("zeta-hat-reps", {**cfg, "class": k, "d": d}, e * hat[d], q, e * hat[d] == q))
            if with_ideals:
                n = ideal_class_counts(d, data)[k]
                out.append(CheckRecord("zeta-hat-ideals", {**cfg, "class": k, "d": d}, hat[d], n, hat[d] == n))
    return out


def smallest_bad_sets(data: ClassTypeData, n_max: int) -> dict[int, tuple[int, ...] | None]:
    """For each support class, the smallest set of removed primes needed for the
    representation identity (empty when it holds for every d)."""
    classes = data.classes
    out = {}
    for k, i in enumerate(classes.support):
        out[k] = minimal_prime_set(_hat_rep_failures(classes, n_max, i), data.bad_primes)
    return out
