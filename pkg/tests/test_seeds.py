import json

import pytest

from chromlag.cubicmap import canoe
from chromlag.qseries import QRat
from chromlag.qtorus import OperatorPoly, TorusMonomial
from chromlag.seeds import (
    FramedSeed,
    FramingShift,
    Mutate,
    Rescale,
    RelabelEdges,
    check_mutation_compatibility,
    path_from_json,
    path_to_json,
    standard_necklace_seed,
)

q = QRat.qpow(1)
one = QRat.const(1)


def op(g, *terms):
    """Operator from (coefficient, m, n) triples in normal order."""
    return OperatorPoly(g, {(tuple(m), tuple(n)): c for c, m, n in terms})


def test_necklace_g1_monomials():
    s = standard_necklace_seed(1)
    assert s["s1"].normal_coefficient() == (-1, -1) and s["s1"].m == (1,)
    assert s["s2"].normal_coefficient() == (-1, 1) and s["s2"].m == (-1,)
    for k in (1, 2):
        assert not any(s[f"a{k}"].m) and not any(s[f"b{k}"].m)
        assert s[f"a{k}"].lattice_add(s[f"b{k}"]) == TorusMonomial(-2, (0,), (0,))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_necklace_validates(g):
    assert standard_necklace_seed(g).validate() == []


def test_needs_positive_genus():
    with pytest.raises(ValueError):
        standard_necklace_seed(0)


def test_injected_fault_is_reported():
    s = standard_necklace_seed(2)
    mono = dict(s.edge_mono)
    t = mono["a2"]
    mono["a2"] = TorusMonomial(t.c, t.m, t.n, -t.sign)
    report = FramedSeed(s.graph, 2, mono).validate()
    assert any("face" in r and "a2" in r for r in report)


def test_admissibility():
    s = standard_necklace_seed(1)
    assert s.is_admissible("s1", 1) and s.is_primitive("s1", 1)
    assert not s.is_admissible("s2", 1)
    assert s.is_admissible("s2", -1)
    for e in ("a1", "b1", "a2", "b2"):
        assert not s.is_admissible(e, 1) and not s.is_admissible(e, -1)


def test_primitivity_needs_gcd_one():
    s = standard_necklace_seed(1).rescale((0,))
    mono = dict(s.edge_mono)
    mono["s1"] = TorusMonomial(0, (2,), (0,))
    bad = FramedSeed(s.graph, 1, mono)
    assert bad.is_admissible("s1", 1) and not bad.is_primitive("s1", 1)


def test_mutation_gives_canoe_seed():
    s, step = standard_necklace_seed(1).mutate("s1", 1)
    assert s.graph.is_isomorphic(canoe(1), labelled=False)
    uv = TorusMonomial.normal_ordered(1, -1, (1,), (1,))
    inv = TorusMonomial.normal_ordered(-1, 1, (-1,), (0,))
    assert s["b1"] == uv and s["a2"] == uv
    assert s["s1"] == inv and s["s2"] == inv
    assert step.monomial == TorusMonomial(-1, (1,), (0,)) and step.sign == 1
    assert s.validate() == []


def test_canoe_triangle_relation():
    s, _ = standard_necklace_seed(1).mutate("s1", 1)
    R = s.face_relation(s.face_containing(["b1", "s2", "b2"]), "b1")
    qi = QRat.qpow(-1)
    assert R == op(1, (qi, (0,), (0,)), (qi, (1,), (1,)), (-qi, (0,), (1,)))


def test_bead_relation():
    s = standard_necklace_seed(1)
    R = s.face_relation(s.face_containing(["a2", "b2"]), "a2")
    qi = QRat.qpow(-1)
    assert R == op(1, (qi, (0,), (0,)), (-qi, (0,), (1,)))


@pytest.mark.parametrize("g", [1, 2])
def test_rebase_is_unit_multiple(g):
    for s in (standard_necklace_seed(g), standard_necklace_seed(g).mutate("s1", 1)[0]):
        for f in s.faces():
            for i, e in enumerate(f.edges):
                prev = f.edges[i - 1]
                unit = OperatorPoly.from_monomials([(q, s[prev])], g)
                assert s.face_relation(f, prev) == unit * s.face_relation(f, e)


def test_face_relation_rejects_foreign_edge():
    s = standard_necklace_seed(1)
    with pytest.raises(ValueError):
        s.face_relation(s.face_containing(["a1", "b1"]), "s2")


def test_mutate_inverse():
    s = standard_necklace_seed(2)
    for e in ("s1", "s2"):
        t, _ = s.mutate(e, 1)
        back, _ = t.mutate(e, -1)
        assert back == s


@pytest.mark.parametrize("g", [1, 2, 3])
def test_closure_under_steps(g):
    s = standard_necklace_seed(g)
    for k in range(1, g + 1):
        t, _ = s.mutate(f"s{k}", 1)
        assert t.validate() == []
    omega = [[(i + j) % 3 - 1 for j in range(g)] for i in range(g)]
    assert s.framing_shift(omega).validate() == []
    assert s.rescale(tuple(range(g))).validate() == []


def test_relabel():
    s = standard_necklace_seed(1)
    r = s.relabel({"s1": "x"})
    assert r["x"] == s["s1"]
    assert r.isomorphism_to(s) is not None


def test_classical_limit_of_relations():
    # q -> -1 turns every face relation into a unit times a polynomial; it must not vanish
    for g in (1, 2):
        s = standard_necklace_seed(g)
        for R in s.face_relations():
            assert any(v != 0 for v in R.classical(-1).values())


def test_seed_json_roundtrip():
    s, _ = standard_necklace_seed(2).mutate("s2", 1)
    assert FramedSeed.from_json(json.dumps(s.to_json())) == s


def test_path_json_roundtrip():
    path = [Mutate("s1", 1), FramingShift([[1]]), Rescale([2]), RelabelEdges({"a1": "z"}), Mutate("s2", -1)]
    assert path_from_json(json.dumps(path_to_json(path))) == path
    with pytest.raises(ValueError):
        path_from_json([{"kind": "teleport"}])


def test_apply_steps():
    s = standard_necklace_seed(1)
    t, step = s.apply(Mutate("s1", 1))
    assert step.edge == "s1"
    u, none = t.apply(FramingShift([[1]]))
    assert none is None and u.validate() == []


def test_intertwining_g1():
    r = check_mutation_compatibility(standard_necklace_seed(1), "s1", 1, 6)
    assert r["ok"]
    assert len(r["faces"]) == 4


def test_intertwining_rejects_inadmissible():
    with pytest.raises(ValueError):
        check_mutation_compatibility(standard_necklace_seed(1), "s2", 1, 3)


@pytest.mark.parametrize("edge", ["s1", "s2"])
def test_intertwining_g2(edge):
    assert check_mutation_compatibility(standard_necklace_seed(2), edge, 1, 5)["ok"]
