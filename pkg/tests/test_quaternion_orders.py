from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hermquat.hermitian_forms import HermForm, hf_enumerate_classes, hf_eval
from hermquat.quad_field import FieldParams, QuadInt
from hermquat.quaternion_orders import (
    BadPrimeNorm,
    IncompatibleOrders,
    ParameterMismatch,
    QuatAlgebra,
    QuatElem,
    QuatLattice,
    default_bad_primes,
    form_class_certificate,
    ideal_class_counts,
    lat_conj,
    lat_left_mul,
    lat_product,
    lattice_nrd,
    left_order,
    proper_basis,
    qa_class_type_data,
    qa_ideals_of_norm,
    qa_is_invertible,
    qa_is_principal,
    qa_latimer_ideal,
    qa_latimer_norm,
    qa_module_index,
    qa_mul,
    qa_nrd,
    qa_same_class,
    right_ideal_of_form,
    right_order,
    standard_order,
)

CONFIGS = [(1, 1), (1, 5), (3, 1), (3, 2), (3, 13), (7, 1), (7, 3), (11, 1), (11, 19)]
coord = st.integers(-20, 20)
quat = st.tuples(coord, coord, coord, coord)


def _alg(m, ell):
    return QuatAlgebra(FieldParams(m), ell)


@given(st.sampled_from(CONFIGS), quat, quat, quat)
@settings(max_examples=200, deadline=None)
def test_multiplication_matches_matrix_model(cfg, a, b, c):
    m, ell = cfg
    alg = _alg(m, ell)
    assert tuple(alg.mul(a, b)) == oracles.q_mul(a, b, ell, m)
    assert alg.mul(alg.mul(a, b), c) == alg.mul(a, alg.mul(b, c))
    assert alg.nrd(alg.mul(a, b)) == alg.nrd(a) * alg.nrd(b)
    assert alg.conj(alg.mul(a, b)) == alg.mul(alg.conj(b), alg.conj(a))
    # nrd is the determinant of the matrix model
    X = oracles.q_matrix(a, ell, m)
    det = oracles.k_mul(X[0], X[3], m)
    off = oracles.k_mul(X[1], X[2], m)
    assert (det[0] - off[0], det[1] - off[1]) == (alg.nrd(a), 0)


def test_eps_relations():
    alg = _alg(7, 3)
    eps, w = (0, 0, 1, 0), (0, 1, 0, 0)
    assert alg.mul(eps, eps) == (-3, 0, 0, 0)
    assert alg.mul(eps, w) == alg.mul(alg.conj(w)[:2] + (0, 0), eps)
    x = QuatElem.from_coords((1, 2, 3, 4), alg)
    assert qa_nrd(x) == alg.nrd((1, 2, 3, 4))
    assert qa_mul(x, x.conj()).coords == (qa_nrd(x), 0, 0, 0)
    with pytest.raises(ParameterMismatch):
        x * QuatElem.from_coords((1, 0, 0, 0), _alg(7, 5))


@pytest.mark.parametrize("m,ell", CONFIGS)
def test_latimer_ideals(m, ell):
    classes = hf_enumerate_classes(ell, FieldParams(m))
    O = standard_order(_alg(m, ell))
    for f in classes.support_reps:
        L = qa_latimer_ideal(f)
        assert left_order(L) == O
        inv = qa_is_invertible(L)
        assert inv.invertible
        assert lat_product(L, inv.inverse) == O
        N = qa_latimer_norm(L)
        assert N == f.a
        assert N * N == qa_module_index(L)
        assert lattice_nrd(L) == lattice_nrd(lat_conj(L)) == f.a
        R = right_ideal_of_form(f)
        assert right_order(R) == O
        assert qa_latimer_norm(R, side="right") == f.a


def test_normalized_norm_form_of_latimer_ideal():
    # nrd(x a + y (b + eps)) / a recovers the conjugate form
    for m, ell in CONFIGS:
        fp = FieldParams(m)
        alg = _alg(m, ell)
        for f in hf_enumerate_classes(ell, fp).support_reps:
            for x in [(1, 0), (0, 1), (2, -1)]:
                for y in [(1, 0), (1, 1), (-1, 2)]:
                    el = alg.mul((x[0], x[1], 0, 0), (f.a, 0, 0, 0))
                    t = alg.mul((y[0], y[1], 0, 0), (f.b.x, f.b.y, 1, 0))
                    v = tuple(p + q for p, q in zip(el, t))
                    conj_form = HermForm(f.a, fp.conj(f.b), f.c, fp)
                    assert Fraction(alg.nrd(v), f.a) == hf_eval(conj_form, x, y)


def test_non_invertible_lattice():
    alg = _alg(1, 1)
    I = QuatLattice(alg, 1, ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 4)))
    res = qa_is_invertible(I)
    assert not res.invertible
    assert lat_product(I, res.inverse) != res.left_order


def test_proper_basis_determinant():
    f = HermForm(3, QuadInt(1, 1), 1, FieldParams(1))
    pb = proper_basis(qa_latimer_ideal(f))
    assert pb.norm == 3


def test_principal_and_same_class():
    fp = FieldParams(11)
    classes = hf_enumerate_classes(1, fp)
    R0, R1 = (right_ideal_of_form(f) for f in classes.support_reps)
    assert qa_is_principal(R0) is not None
    assert qa_is_principal(R1) is None
    assert qa_same_class(R0, R1) is None
    other = QuatLattice.from_generators(_alg(11, 1), [(2, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    with pytest.raises(IncompatibleOrders):
        qa_same_class(R0, other)


@pytest.mark.parametrize("m,ell", [(1, 1), (1, 5), (3, 1), (7, 1), (11, 1), (3, 13)])
def test_class_certificates(m, ell):
    fp = FieldParams(m)
    data = qa_class_type_data(ell, fp)
    for d in range(1, 16):
        if any(d % p == 0 for p in data.bad_primes):
            continue
        for rec in qa_ideals_of_norm(d, data):
            assert lat_left_mul(rec.alpha, data.ideals[rec.class_index]) == rec.ideal
            assert lattice_nrd(rec.ideal) == d
            assert right_order(rec.ideal) == standard_order(data.alg)
        assert sum(ideal_class_counts(d, data)) == oracles.sigma(d)


def test_certificate_rejects_wrong_class():
    fp = FieldParams(11)
    f0, f1 = hf_enumerate_classes(1, fp).support_reps
    assert form_class_certificate(f0, f1) is None


@pytest.mark.parametrize("m,ell,d", [(1, 1, 3), (1, 1, 5), (3, 1, 5), (7, 1, 3), (11, 1, 3), (3, 2, 5)])
def test_ideals_of_norm_exhaustive(m, ell, d):
    """Every right ideal of index d^2 in Z^4, found by brute force over sublattices."""
    data = qa_class_type_data(ell, FieldParams(m))
    brute = {tuple(map(tuple, M)) for M in oracles.right_ideals_exhaustive(d, ell, m)}
    ours = {rec.ideal.rows for rec in qa_ideals_of_norm(d, data)}
    assert all(rec.ideal.den == 1 for rec in qa_ideals_of_norm(d, data))
    assert ours == brute
    assert len(brute) == oracles.sigma(d)


def test_spot_ideal_counts():
    data = qa_class_type_data(1, FieldParams(1))
    assert len(qa_ideals_of_norm(5, data)) == 6
    assert len(qa_ideals_of_norm(3, data)) == 4
    assert len(qa_ideals_of_norm(1, data)) == 1
    with pytest.raises(BadPrimeNorm):
        qa_ideals_of_norm(2, data)


def test_class_and_type_numbers():
    d15 = qa_class_type_data(5, FieldParams(1))
    assert (d15.h1, d15.h2) == (3, 1)
    d111 = qa_class_type_data(1, FieldParams(11))
    assert (d111.h1, d111.h2) == (2, 2)
    d11 = qa_class_type_data(1, FieldParams(1))
    assert (d11.h1, d11.h2) == (1, 1)
    assert d11.unit_counts == (8,)
    assert qa_class_type_data(1, FieldParams(3)).unit_counts == (12,)


def test_default_bad_primes():
    assert default_bad_primes(1, 1) == {2}
    assert default_bad_primes(3, 10) == {2, 3, 5}
    assert default_bad_primes(11, 19) == {2, 11, 19}
