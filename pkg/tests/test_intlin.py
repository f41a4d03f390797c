import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromlag.intlin import (
    IntMatrix,
    LatticePresentation,
    content,
    hermite_rows,
    is_isotropic,
    kernel_basis,
    quotient_coordinates,
    quotient_rank_and_torsion,
    rank,
    smith_normal_form,
    unimodular_inverse,
)


def det(rows):
    """Fraction-based Gaussian elimination; exact for small integer matrices."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    out = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return 0
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            out = -out
        out *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            for c in range(i, n):
                a[r][c] -= f * a[i][c]
    return int(out)


def invariant_factors(rows, ncols):
    """d_k = D_k / D_{k-1}, D_k the gcd of all k x k minors."""
    m = len(rows)
    prev, out = 1, []
    for k in range(1, min(m, ncols) + 1):
        g = 0
        for R in itertools.combinations(range(m), k):
            for C in itertools.combinations(range(ncols), k):
                g = gcd(g, det([[rows[i][j] for j in C] for i in R]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def matmul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


small_matrix = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_snf_diag_2_3():
    _, D, _ = smith_normal_form(IntMatrix.of([[2, 0], [0, 3]]))
    assert D.tolist() == [[1, 0], [0, 6]]


def test_snf_zero_and_identity():
    assert smith_normal_form(IntMatrix.zeros(2, 2))[1].tolist() == [[0, 0], [0, 0]]
    assert smith_normal_form(IntMatrix.identity(3))[1].tolist() == IntMatrix.identity(3).tolist()


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_snf_factorization(rows):
    M = IntMatrix.of(rows)
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U.tolist(), rows), V.tolist()) == D.tolist()
    assert abs(det(U.tolist())) == 1
    assert abs(det(V.tolist())) == 1
    d = D.tolist()
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == invariant_factors(rows, len(rows[0]))


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_quotient_against_minors(rows):
    n = len(rows[0])
    r, torsion = quotient_rank_and_torsion(LatticePresentation(n, IntMatrix.of(rows)))
    facs = invariant_factors(rows, n)
    assert r == n - len(facs)
    assert torsion == [x for x in facs if x > 1]


@settings(max_examples=100, deadline=None)
@given(small_matrix)
def test_rank_nullity(rows):
    M = IntMatrix.of(rows)
    K = kernel_basis(M)
    assert K.rows + rank(M) == M.cols
    for v in K.tolist():
        assert M.apply(v) == (0,) * M.rows
        first = next(x for x in v if x)
        assert first > 0


def test_kernel_examples():
    assert kernel_basis(IntMatrix.of([[1, 1]])).tolist() == [[1, -1]]
    assert kernel_basis(IntMatrix.identity(3)).rows == 0


def test_quotient_examples():
    assert quotient_rank_and_torsion(LatticePresentation(3, IntMatrix.of([[1, 1, 0]]))) == (2, [])
    assert quotient_rank_and_torsion(LatticePresentation(2, IntMatrix.of([[2, 0]]))) == (1, [2])


def test_quotient_coordinates_split():
    P = LatticePresentation(4, IntMatrix.of([[1, 1, 0, 0], [0, 1, 1, 1]]))
    proj, lift = quotient_coordinates(P)
    assert (proj @ lift).tolist() == IntMatrix.identity(2).tolist()
    for r in P.relations.tolist():
        assert proj.apply(r) == (0, 0)


def test_isotropy():
    S = IntMatrix.of([[0, 1], [-1, 0]])
    assert is_isotropic(IntMatrix.of([[3, 5]]), S)
    assert not is_isotropic(IntMatrix.of([[1, 0], [0, 1]]), S)


def test_unimodular_inverse():
    M = IntMatrix.of([[2, 1], [1, 1]])
    assert (M @ unimodular_inverse(M)).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        unimodular_inverse(IntMatrix.of([[2, 0], [0, 1]]))


def test_hermite_and_content():
    assert hermite_rows([[2, 4], [1, 2]]) == [[1, 2]]
    assert content([4, -6, 10]) == 2
    assert content([0, 0]) == 0
