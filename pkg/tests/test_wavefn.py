import json

import pytest

from chromlag.qseries import QRat, XSeries, plethystic_exp, pochhammer_inf, q_pochhammer
from chromlag.seeds import Mutate, standard_necklace_seed
from chromlag.wavefn import (
    InadmissiblePath,
    OVTable,
    SolveFailure,
    aenv_operator,
    canoe_path,
    canoe_seed,
    canoe_wavefunction,
    check_framing_preserves_integrality,
    evaluate_path,
    loop_path_g1,
    ov_factorize,
    ov_reconstruct,
    run_path,
    solve_face_relations,
    solve_q_difference,
)

q = QRat.qpow(1)
one = QRat.const(1)


def inverse_poch(v):
    out = one
    for x in v:
        out = out / q_pochhammer(x)
    return out


def test_strand_mutation_gives_pochhammer():
    D = 7
    assert evaluate_path(None, [Mutate("s1", 1)], D, g=1) == pochhammer_inf(1, (1,), D)


def test_loop_is_trivial():
    seed, psi = run_path(loop_path_g1(), 9, g=1)
    assert psi == XSeries.one(1, 9)
    assert seed.isomorphism_to(standard_necklace_seed(1)) is not None


def test_g2_canoe_bare():
    D = 5
    want = pochhammer_inf(1, (1, 0), D) * pochhammer_inf(1, (0, 1), D)
    assert canoe_wavefunction(2, None, D, "bare") == want


def test_path_independence_g2():
    D = 5
    a = evaluate_path(None, [Mutate("s1", 1), Mutate("s2", 1)], D, g=2)
    b = evaluate_path(None, [Mutate("s2", 1), Mutate("s1", 1)], D, g=2)
    assert a == b


@pytest.mark.parametrize("g", [1, 2])
def test_unframed_canoe(g):
    D = 6
    F = canoe_wavefunction(g, None, D)
    assert F == XSeries.from_function(g, D, inverse_poch)


@pytest.mark.parametrize("A", [[[1]], [[-2]], [[3]]])
def test_canoe_conventions_g1(A):
    D = 6
    a = A[0][0]
    shift = XSeries.from_function(1, D, lambda v: inverse_poch(v).mul_qpow(a * v[0] ** 2))
    dual = XSeries.from_function(1, D, lambda v: inverse_poch(v).mul_qpow(v[0] ** 2 - a * v[0] ** 2))
    assert canoe_wavefunction(1, A, D, "shift") == shift
    assert canoe_wavefunction(1, A, D, "dual") == dual


def test_canoe_unknown_convention():
    with pytest.raises(ValueError):
        canoe_path(1, None, "sideways")
    with pytest.raises(ValueError):
        canoe_path(2, [[1]])


def test_inadmissible_step_index():
    with pytest.raises(InadmissiblePath) as info:
        evaluate_path(None, [Mutate("s1", 1), Mutate("s1", 1)], 4, g=1)
    assert info.value.index == 1


def test_solver_necklace():
    assert solve_face_relations(standard_necklace_seed(2), 5) == XSeries.one(2, 5)


@pytest.mark.parametrize("g", [1, 2])
def test_solver_agrees_with_path(g):
    D = 5
    for A in ([[0] * g for _ in range(g)], [[1 + (i == j) for j in range(g)] for i in range(g)]):
        for conv in ("shift", "dual", "bare"):
            path = canoe_path(g, A, conv)
            seed, psi = run_path(path, D, g=g)
            assert solve_face_relations(seed, D) == psi


def test_solver_canoe_series():
    got = solve_face_relations(canoe_seed(1), 7)
    assert got == XSeries.from_function(1, 7, inverse_poch)


def test_solver_fails_on_non_algebraic_seed():
    s, _ = standard_necklace_seed(1).mutate("s1", 1)
    s, _ = s.mutate("s1", 1)
    r = solve_face_relations(s, 4)
    assert isinstance(r, SolveFailure)
    assert not r
    assert "inconsistent" in str(r)


def test_solver_underdetermined():
    r = solve_q_difference([], 1, 3)
    assert isinstance(r, SolveFailure) and r.reason == "underdetermined"


def test_aenv():
    op, ctx = aenv_operator()
    F = solve_q_difference([op], 1, 6, ctx)
    Q = QRat.gen("Q", ctx)
    q2 = QRat.qpow(2, ctx)
    num = den = QRat.const(1, ctx)
    for k in range(7):
        assert F.coefficient((k,)) == num / den
        num = num * (1 - Q * q2**k)
        den = den * (1 - q2 ** (k + 1))


def test_ov_pochhammer():
    t = ov_factorize(pochhammer_inf(1, (1,), 8))
    assert t.entries == {((1,), -1): -1}


def test_ov_trivial():
    t = ov_factorize(XSeries.one(2, 5))
    assert t.entries == {} and t.admissible


def test_ov_requires_unit_constant():
    with pytest.raises(ValueError):
        ov_factorize(XSeries.one(1, 3).scale(2 * one))


def test_ov_euler_oracle():
    # Euler: sum X^v/(q^2)_v = Exp(X/(1-q^2)) = 1/(X;q^2) = Phi(-q^{-1}X)
    D = 7
    F = XSeries.from_function(1, D, inverse_poch)
    assert F == plethystic_exp(XSeries.monomial((1,), D, one / (1 - q**2)))
    assert ov_factorize(F).entries == {((1,), -1): 1}
    G = XSeries.from_function(1, D, lambda v: inverse_poch(v).mul_qpow(v[0] ** 2))
    assert ov_factorize(G).entries == {((1,), 0): -1}


def test_ov_non_integral_flagged():
    F = XSeries.one(1, 4) + XSeries.monomial((1,), 4, one / 2)
    t = ov_factorize(F)
    assert not t.admissible and t.witness[0] == (1,)


@pytest.mark.parametrize("g,A,conv", [(1, [[2]], "shift"), (1, [[-1]], "dual"), (2, [[1, 1], [1, 0]], "dual"), (2, [[0, -1], [-1, 2]], "shift")])
def test_reconstruction(g, A, conv):
    D = 5
    F = canoe_wavefunction(g, A, D, conv)
    t = ov_factorize(F)
    assert t.admissible
    assert ov_reconstruct(t) == F


def test_framing_integrality():
    P = pochhammer_inf(1, (1,), 6)
    assert check_framing_preserves_integrality(P, [[[2]], [[-3]], [[0]]])["ok"]


def test_framing_integrality_reports_fault():
    F = XSeries.one(1, 3) + XSeries.monomial((2,), 3, one / 3)
    r = check_framing_preserves_integrality(F, [[[1]]])
    assert not r["ok"] and r["results"][0]["witness"] is not None


def test_ovtable_json_csv_roundtrip():
    t = ov_factorize(canoe_wavefunction(2, [[1, 2], [2, 0]], 4, "dual"))
    assert OVTable.from_json(json.dumps(t.to_json())) == t
    back = OVTable.from_csv(t.to_csv(), t.g, t.order)
    assert back.entries == t.entries
