import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromlag.qseries import QRat, XSeries, plethystic_exp
from chromlag.quiverdt import (
    SymQuiver,
    classical_y_system,
    coefficient_change,
    disk_invariants,
    dt_integer_invariants,
    dt_series,
    dt_series_matrix,
    verify_framing_duality,
)
from chromlag.wavefn import canoe_wavefunction, ov_factorize, ov_reconstruct

q = QRat.qpow(1)
one = QRat.const(1)


def test_quiver_validation():
    assert SymQuiver([[1, 2], [2, 0]]).n == 2
    with pytest.raises(ValueError):
        SymQuiver([[1, 2], [1, 0]])
    with pytest.raises(ValueError):
        SymQuiver([[-1]])


def test_chi():
    Q = SymQuiver([[1, 2], [2, 0]])
    assert Q.chi((1, 1), (1, 1)) == 1 - 1 + 1 - 4


def test_zero_loop_coefficient():
    # -t^{1/2}/(1-t) with t^{1/2} = -q
    F = dt_series(SymQuiver([[0]]), 3)
    assert F.coefficient((1,)) == q / (1 - q**2)


def test_one_loop_is_euler():
    D = 6
    F = dt_series(SymQuiver([[1]]), D)
    assert F == plethystic_exp(XSeries.monomial((1,), D, one / (1 - q**2)))


@pytest.mark.parametrize("a", [0, 1, 2, -1])
def test_coefficient_change(a):
    assert coefficient_change(dt_series_matrix([[a]], 6)) == dt_series_matrix([[1 - a]], 6)


def test_coefficient_change_g2():
    A = [[1, 2], [2, 0]]
    IA = [[0, -2], [-2, 1]]
    assert coefficient_change(dt_series_matrix(A, 4)) == dt_series_matrix(IA, 4)


def test_dt_invariants_examples():
    assert dt_integer_invariants([[1]], 6).entries == {((1,), 0): -1}
    assert dt_integer_invariants([[0]], 6).entries == {((1,), 1): 1}


@pytest.mark.parametrize("A", [[[2]], [[3]], [[1, 1], [1, 0]], [[2, 1], [1, 1]]])
def test_dt_sign_rule(A):
    t = dt_integer_invariants(SymQuiver(A), 5)
    assert t.admissible
    for (_, k), N in t.entries.items():
        assert (-1) ** ((k - 1) % 2) * N > 0


def test_dt_reconstruction():
    t = dt_integer_invariants([[2]], 5)
    # N_{v,k} t^{k/2} = -n_{v,k'} (-q)^{k'+1} with k' = k - 1 converts to the OV form
    ov = type(t)(t.g, t.order, {(v, k - 1): -N for (v, k), N in t.entries.items()})
    assert ov_reconstruct(ov) == dt_series_matrix([[2]], 5)


@pytest.mark.parametrize("A", [[[0]], [[2]], [[-3]], [[1, -1], [-1, 2]]])
def test_y_system_residual(A):
    D = 5
    ys = classical_y_system(A, D)
    g = len(A)
    for i, Y in enumerate(ys):
        assert Y.constant_term().is_one()
        e = 1 - A[i][i]
        X = XSeries.monomial(tuple(int(i == j) for j in range(g)), D)
        term = X * (Y**e).scale((-1) ** (e % 2))
        for j in range(g):
            if j != i and A[i][j]:
                term = term * ys[j] ** (-A[i][j])
        assert term + Y == XSeries.one(g, D)


def test_y_system_zero_framing():
    (Y,) = classical_y_system([[0]], 6)
    assert Y == (XSeries.one(1, 6) - XSeries.monomial((1,), 6)).inverse()


@pytest.mark.parametrize(
    "h,row",
    [(2, (1, 1, 3, 10, 40, 171, 791)), (3, (1, 2, 10, 60, 425, 3296, 27447))],
)
def test_disk_table_rows(h, row):
    n = disk_invariants([[2 - 2 * h]], 7)
    assert tuple(n[(d,)] for d in range(1, 8)) == row


def test_disk_zero_framing():
    assert disk_invariants([[0]], 7) == {(1,): 1}


@pytest.mark.parametrize("a", [0, -2, -4, 1, 2])
def test_disk_equals_summed_ov(a):
    D = 5
    n = disk_invariants([[a]], D)
    assert ov_factorize(canoe_wavefunction(1, [[a]], D, "shift")).classical() == n
    dual = ov_factorize(canoe_wavefunction(1, [[a]], D, "dual")).classical()
    assert dual == {d: -x for d, x in n.items()}


def test_disk_g2():
    n = disk_invariants([[0, 1], [1, 0]], 4)
    assert all(isinstance(x, int) for x in n.values())
    assert n[(1, 0)] == n[(0, 1)]


@pytest.mark.parametrize("A,g,D", [([[1]], 1, 6), ([[1, 1], [1, 0]], 2, 5), ([[0]], 1, 6)])
def test_framing_duality(A, g, D):
    assert verify_framing_duality(A, g, D)["ok"]


def test_framing_duality_rejects_bad_shape():
    with pytest.raises(ValueError):
        verify_framing_duality([[1]], 2, 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_framing_duality_random(a, b, c):
    assert verify_framing_duality([[a, b], [b, c]], 2, 4)["ok"]
