import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromlag.qseries import QRat, XSeries, exponents_upto, pochhammer_inf
from chromlag.qtorus import (
    OperatorPoly,
    TorusMonomial,
    act,
    apply_phi,
    framing_shift,
    framing_shift_mono,
    mono_mul,
    phi_coefficient,
    rescale_mono,
    rescale_sigma,
)

q = QRat.qpow(1)
one = QRat.const(1)
U = TorusMonomial.U(0, 1)
V = TorusMonomial.V(0, 1)


def X(v, D, c=one):
    return XSeries.monomial(v, D, c)


def test_commutation():
    vu = mono_mul(V, U)
    uv = mono_mul(U, V)
    s1, e1 = vu.normal_coefficient()
    s2, e2 = uv.normal_coefficient()
    assert (vu.m, vu.n) == (uv.m, uv.n)
    assert s1 == s2 and e1 - e2 == 2


def test_normal_ordered_roundtrip():
    t = TorusMonomial.normal_ordered(-1, 3, (1, 2), (0, 1))
    assert t.normal_coefficient() == (-1, 3)
    assert TorusMonomial.from_json(t.to_json()) == t


def test_act_examples():
    D = 5
    F = X((1,), D) + X((2,), D, 3 * one)
    assert act(U, F) == X((2,), D) + X((3,), D, 3 * one)
    assert act(V, F) == X((1,), D, q**2) + X((2,), D, 3 * q**4)
    assert act(V.lattice_neg(), X((1,), D)) == X((1,), D, QRat.qpow(-2))


def test_annihilator_of_pochhammer():
    D = 8
    P = pochhammer_inf(1, (1,), D)
    uv = TorusMonomial.normal_ordered(1, 0, (1,), (1,))
    op = OperatorPoly.from_monomials([TorusMonomial.identity(1), uv, (-one, V)], 1)
    assert act(op, P) == XSeries.zero(1, D)


def test_negative_exponent_rejected():
    with pytest.raises(ValueError):
        act(U.lattice_neg(), XSeries.one(1, 3))


def test_framing_shift_examples():
    F = X((1, 1), 4) + X((2, 0), 4)
    G = framing_shift([[1, 2], [2, 0]], F)
    assert G == X((1, 1), 4, q**5) + X((2, 0), 4, q**4)
    with pytest.raises(ValueError):
        framing_shift([[1, 2], [0, 0]], F)


def test_framing_shift_additive():
    D = 5
    F = XSeries.from_function(2, D, lambda v: one / (1 - q ** (2 + sum(v))))
    A, B = [[1, -1], [-1, 2]], [[0, 3], [3, -2]]
    AB = [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]
    assert framing_shift(A, framing_shift(B, F)) == framing_shift(AB, F)


def test_framing_shift_mono():
    t = TorusMonomial.U(0, 2)
    assert framing_shift_mono([[2, 1], [1, 0]], t) == TorusMonomial(0, (1, 0), (2, 1))


def test_rescale():
    F = X((1,), 3) + X((2,), 3)
    assert rescale_sigma((1,), F) == X((1,), 3, -q) + X((2,), 3, q**2)
    assert rescale_mono((2,), U) == TorusMonomial(2, (1,), (0,))


def test_phi_coefficient_examples():
    assert phi_coefficient(0, 1) == one
    assert phi_coefficient(1, 1) == -q / (1 - q**2)
    assert phi_coefficient(2, -1) == q**4 / ((1 - q**2) * (1 - q**4))
    with pytest.raises(ValueError):
        phi_coefficient(1, 0)


def test_apply_phi_inverse():
    D = 7
    F = XSeries.one(1, D)
    assert apply_phi(U, 1, apply_phi(U, -1, F)) == F


def test_apply_phi_on_one():
    D = 6
    got = apply_phi(U, 1, XSeries.one(1, D))
    assert got == XSeries.from_function(1, D, lambda v: phi_coefficient(v[0], 1))


def test_apply_phi_requires_raising():
    with pytest.raises(ValueError):
        apply_phi(V, 1, XSeries.one(1, 3))


mono = st.builds(
    lambda c, m, n, s: TorusMonomial(c, (m,), (n,), s),
    st.integers(-3, 3),
    st.integers(0, 2),
    st.integers(-2, 2),
    st.sampled_from([1, -1]),
)


@settings(max_examples=60, deadline=None)
@given(mono, mono)
def test_action_is_multiplicative(a, b):
    D = 6
    F = XSeries.from_function(1, D, lambda v: one / (1 - q ** (v[0] + 1)))
    assert act(mono_mul(a, b), F) == act(a, act(b, F))


@settings(max_examples=40, deadline=None)
@given(mono, mono, mono)
def test_mono_mul_associative(a, b, c):
    assert mono_mul(mono_mul(a, b), c) == mono_mul(a, mono_mul(b, c))
