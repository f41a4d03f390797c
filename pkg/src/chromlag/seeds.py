"""Framed seeds on cubic planar graphs.

A framed seed assigns to every edge of a cubic map a quantum-torus monomial.
The assignment has to reproduce the edge skew form, satisfy the face
relations X_{e_1}...X_{e_n} = q^{-n} and the global relation
X_{sum of all edges} = (-q)^{-(g+3)}.

Mutation at an edge flips the graph and moves the monomials by the lattice map
nu^{+/-}; the quantum dilogarithm part is recorded as a ``DilogStep`` and
applied to wavefunctions by :mod:`chromlag.wavefn`.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from .cubicmap import CubicMap, FaceCycle, necklace
from .intlin import IntMatrix
from .qseries import DEFAULT, QRat, XSeries, exponents_upto
from .qtorus import (
    OperatorPoly,
    TorusMonomial,
    act,
    apply_phi,
    framing_shift_mono,
    mono_mul,
    rescale_mono,
)

__all__ = [
    "FramedSeed",
    "DilogStep",
    "Mutate",
    "FramingShift",
    "Rescale",
    "RelabelEdges",
    "SeedPath",
    "standard_necklace_seed",
    "check_mutation_compatibility",
    "path_to_json",
    "path_from_json",
]


@dataclass(frozen=True)
class DilogStep:
    """Record of one mutation: the wavefunction gets multiplied by Phi(monomial)^(-sign)."""

    monomial: TorusMonomial
    sign: int
    edge: str


@dataclass(frozen=True)
class Mutate:
    edge: str
    sign: int = 1


@dataclass(frozen=True)
class FramingShift:
    omega: tuple[tuple[int, ...], ...]

    def __init__(self, omega):
        object.__setattr__(self, "omega", tuple(tuple(int(x) for x in r) for r in omega))


@dataclass(frozen=True)
class Rescale:
    d: tuple[int, ...]

    def __init__(self, d):
        object.__setattr__(self, "d", tuple(int(x) for x in d))


@dataclass(frozen=True)
class RelabelEdges:
    mapping: tuple[tuple[str, str], ...]

    def __init__(self, mapping: Mapping[str, str] | Iterable[tuple[str, str]]):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        object.__setattr__(self, "mapping", tuple(sorted((str(a), str(b)) for a, b in items)))


Step = Union[Mutate, FramingShift, Rescale, RelabelEdges]
SeedPath = list[Step]


def path_to_json(path: Sequence[Step]) -> list[dict]:
    out = []
    for st in path:
        if isinstance(st, Mutate):
            out.append({"kind": "mutate", "edge": st.edge, "sign": st.sign})
        elif isinstance(st, FramingShift):
            out.append({"kind": "framing_shift", "omega": [list(r) for r in st.omega]})
        elif isinstance(st, Rescale):
            out.append({"kind": "rescale", "d": list(st.d)})
        elif isinstance(st, RelabelEdges):
            out.append({"kind": "relabel", "mapping": dict(st.mapping)})
        else:
            raise TypeError(f"unknown step {st!r}")
    return out


def path_from_json(data: Sequence[Mapping] | str) -> SeedPath:
    if isinstance(data, str):
        data = json.loads(data)
    out: SeedPath = []
    for st in data:
        kind = st["kind"]
        if kind == "mutate":
            out.append(Mutate(str(st["edge"]), int(st.get("sign", 1))))
        elif kind == "framing_shift":
            out.append(FramingShift(st["omega"]))
        elif kind == "rescale":
            out.append(Rescale(st["d"]))
        elif kind == "relabel":
            out.append(RelabelEdges(st["mapping"]))
        else:
            raise ValueError(f"unknown step kind {kind!r}")
    return out


class FramedSeed:
    """A cubic map with a torus monomial on every edge."""

    __slots__ = ("graph", "g", "edge_mono")

    def __init__(self, graph: CubicMap, g: int, edge_mono: Mapping[str, TorusMonomial]):
        self.graph = graph
        self.g = g
        if set(edge_mono) != set(graph.edge_labels):
            raise ValueError("edge monomials must cover exactly the graph edges")
        if any(t.g != g for t in edge_mono.values()):
            raise ValueError("monomial rank differs from seed genus")
        self.edge_mono = {e: edge_mono[e] for e in graph.edge_labels}

    def __getitem__(self, edge: str) -> TorusMonomial:
        return self.edge_mono[edge]

    def faces(self) -> list[FaceCycle]:
        return self.graph.faces()

    def lattice(self, coeffs: Mapping[str, int]) -> TorusMonomial:
        """X_{sum c_e e} as a lattice combination of edge monomials."""
        out = TorusMonomial.identity(self.g)
        for e, k in coeffs.items():
            if k:
                out = out.lattice_add(self.edge_mono[e].power(k))
        return out

    # validation -------------------------------------------------------
    def validate(self) -> list[str]:
        """List of violated invariants; empty means the seed is consistent."""
        problems = []
        labels = self.graph.edge_labels
        W = self.graph.edge_skew_form()
        for i, e in enumerate(labels):
            for j in range(i + 1, len(labels)):
                f = labels[j]
                got = self.edge_mono[e].pair(self.edge_mono[f])
                if got != W[i, j]:
                    problems.append(f"pairing of {e},{f} is {got}, skew form says {W[i, j]}")
        for face in self.faces():
            prod = TorusMonomial.identity(self.g)
            for e in face.edges:
                prod = mono_mul(prod, self.edge_mono[e])
            n = len(face)
            want = TorusMonomial.normal_ordered(1, -n, (0,) * self.g, (0,) * self.g)
            if prod != want:
                problems.append(f"face {face.edges}: ordered product {prod} != q^-{n}")
        total = self.lattice({e: 1 for e in labels})
        want = TorusMonomial(-(self.g + 3), (0,) * self.g, (0,) * self.g)
        if total != want:
            problems.append(f"global relation: X_s = {total}, expected (-q)^{-(self.g + 3)}")
        return problems

    # admissibility ----------------------------------------------------
    def mutation_monomial(self, edge: str, sign: int) -> TorusMonomial:
        t = self.edge_mono[edge]
        return t if sign == 1 else t.lattice_neg()

    def is_admissible(self, edge: str, sign: int) -> bool:
        m = self.mutation_monomial(edge, sign).m
        return all(x >= 0 for x in m) and any(m)

    def is_primitive(self, edge: str, sign: int) -> bool:
        if not self.is_admissible(edge, sign):
            return False
        c = 0
        for x in self.mutation_monomial(edge, sign).m:
            c = gcd(c, x)
        return c == 1

    # groupoid generators ---------------------------------------------
    def nu(self, edge: str, sign: int) -> dict[str, dict[str, int]]:
        """Lattice map nu^sign: new edge -> combination of old edges."""
        out = {}
        for e in self.graph.edge_labels:
            if e == edge:
                out[e] = {edge: -1}
            else:
                k = max(0, sign * self.graph.skew(e, edge))
                out[e] = {e: 1, edge: k} if k else {e: 1}
        return out

    def mutate(self, edge: str, sign: int = 1) -> tuple["FramedSeed", DilogStep]:
        if sign not in (1, -1):
            raise ValueError("mutation sign must be +1 or -1")
        graph = self.graph.flip(edge)
        mono = {e: self.lattice(comb) for e, comb in self.nu(edge, sign).items()}
        step = DilogStep(self.mutation_monomial(edge, sign), sign, edge)
        return FramedSeed(graph, self.g, mono), step

    def framing_shift(self, omega) -> "FramedSeed":
        return FramedSeed(self.graph, self.g, {e: framing_shift_mono(omega, t) for e, t in self.edge_mono.items()})

    def rescale(self, d: Sequence[int]) -> "FramedSeed":
        return FramedSeed(self.graph, self.g, {e: rescale_mono(d, t) for e, t in self.edge_mono.items()})

    def relabel(self, mapping: Mapping[str, str]) -> "FramedSeed":
        graph = self.graph.relabel(mapping)
        return FramedSeed(graph, self.g, {mapping.get(e, e): t for e, t in self.edge_mono.items()})

    def apply(self, step: Step) -> tuple["FramedSeed", DilogStep | None]:
        if isinstance(step, Mutate):
            return self.mutate(step.edge, step.sign)
        if isinstance(step, FramingShift):
            return self.framing_shift(step.omega), None
        if isinstance(step, Rescale):
            return self.rescale(step.d), None
        if isinstance(step, RelabelEdges):
            return self.relabel(dict(step.mapping)), None
        raise TypeError(f"unknown step {step!r}")

    # face relations ---------------------------------------------------
    def face_containing(self, edges: Iterable[str]) -> FaceCycle:
        want = Counter(edges)
        for f in self.faces():
            if Counter(f.edges) == want:
                return f
        raise KeyError(f"no face with edges {sorted(want)}")

    def face_relation(self, face: FaceCycle | int, base_edge: str | None = None, ctx=DEFAULT) -> OperatorPoly:
        """q^{-1} + X_{e1} + X_{e1+e2} + ... + X_{e1+...+e_{n-1}}, counterclockwise from the base edge."""
        if isinstance(face, int):
            face = self.faces()[face]
        if base_edge is None:
            base_edge = face.edges[0]
        if base_edge not in face.edges:
            raise ValueError(f"edge {base_edge} is not on face {face.edges}")
        f = face.rotated_to(base_edge)
        monos: list = [(QRat.qpow(-1, ctx), TorusMonomial.identity(self.g))]
        acc = TorusMonomial.identity(self.g)
        for e in f.edges[:-1]:
            acc = acc.lattice_add(self.edge_mono[e])
            monos.append(acc)
        return OperatorPoly.from_monomials(monos, self.g, ctx)

    def face_relations(self, ctx=DEFAULT) -> list[OperatorPoly]:
        return [self.face_relation(f, ctx=ctx) for f in self.faces()]

    # comparison -------------------------------------------------------
    def isomorphism_to(self, other: "FramedSeed") -> dict[str, str] | None:
        """Edge relabelling carrying self to other (graph and monomials), if any."""
        if self.g != other.g:
            return None
        return self.graph.isomorphism_to(other.graph, self.edge_mono, other.edge_mono)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FramedSeed)
            and self.g == other.g
            and self.graph.isomorphism_to(other.graph) is not None
            and self.edge_mono == other.edge_mono
        )

    def to_json(self) -> dict:
        d = self.graph.to_json()
        d["g"] = self.g
        d["edge_mono"] = {e: t.to_json() for e, t in self.edge_mono.items()}
        return d

    @classmethod
    def from_json(cls, data: Mapping | str) -> "FramedSeed":
        if isinstance(data, str):
            data = json.loads(data)
        graph = CubicMap.from_json(data)
        mono = {e: TorusMonomial.from_json(t) for e, t in data["edge_mono"].items()}
        g = int(data.get("g", graph.genus))
        return cls(graph, g, mono)

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {t}" for e, t in self.edge_mono.items())
        return f"FramedSeed(g={self.g}; {body})"


def standard_necklace_seed(g: int) -> FramedSeed:
    """Necklace with strands -q^{-1}U_k, the big strand -q^{2g-1}prod U^{-1}, V-monomial beads."""
    if g < 1:
        raise ValueError("the standard necklace seed needs g >= 1")
    zero = (0,) * g

    def unit(i: int, k: int = 1) -> tuple[int, ...]:
        v = [0] * g
        v[i] = k
        return tuple(v)

    mono: dict[str, TorusMonomial] = {}
    for k in range(1, g + 1):
        mono[f"s{k}"] = TorusMonomial(-1, unit(k - 1), zero)
    mono[f"s{g + 1}"] = TorusMonomial(2 * g - 1, (-1,) * g, zero)
    for k in range(1, g + 2):
        n = [0] * g
        if k >= 2:
            n[k - 2] += 1
        if k <= g:
            n[k - 1] -= 1
        mono[f"a{k}"] = TorusMonomial(-1, zero, tuple(n))
        mono[f"b{k}"] = TorusMonomial(-1, zero, tuple(-x for x in n))
    return FramedSeed(necklace(g), g, mono)


# ----------------------------------------------------------------------
# compatibility of face relations with a mutation


def _lowering(op: OperatorPoly) -> int:
    return max([0] + [-sum(m) for m, _ in op.terms])


def _raising(op: OperatorPoly) -> int:
    return max([0] + [sum(m) for m, _ in op.terms])


def check_mutation_compatibility(s: FramedSeed, edge: str, sign: int, D: int) -> dict:
    """Check iota_1(R'_f) o Phi = Phi o iota_0(R_f) on monomials X^w.

    Phi is the dilogarithm factor of the mutation (Phi(X_{sign e})^{-sign}),
    R'_f a face relation of the mutated seed and R_f the relation of the
    matching face before the flip (same edges apart from the flipped one).
    Relations are compared up to the choice of base edges, which changes them
    by left unit multiples.  Monomials X^w run over |w - K| <= D, where the
    shift K keeps every exponent nonnegative when relations contain U^{-1}.
    """
    if not s.is_admissible(edge, sign):
        raise ValueError(f"mutation at {edge} with sign {sign} is not admissible")
    s1, step = s.mutate(edge, sign)
    ctx = DEFAULT
    g = s.g
    phi_cache: dict[tuple[tuple[int, ...], int], XSeries] = {}

    def phi_mono(u: tuple[int, ...], N: int) -> XSeries:
        key = (u, N)
        if key not in phi_cache:
            phi_cache[key] = apply_phi(step.monomial, -step.sign, XSeries.monomial(u, N, 1, ctx))
        return phi_cache[key]

    def lhs(R1: OperatorPoly, w, N):
        return act(R1, phi_mono(w, N))

    def rhs(R0: OperatorPoly, w, N):
        out = XSeries.zero(g, N, ctx)
        for (m, n), c in R0.terms.items():
            u = tuple(a + b for a, b in zip(w, m))
            coef = c.mul_qpow(2 * sum(x * y for x, y in zip(n, w)))
            out = out + phi_mono(u, N).scale(coef)
        return out

    faces_report = []
    ok_all = True
    for f1 in s1.faces():
        key = Counter(e for e in f1.edges if e != edge)
        f0 = next(f for f in s.faces() if Counter(e for e in f.edges if e != edge) == key)
        result = None
        for b0 in dict.fromkeys(f0.edges):
            R0 = s.face_relation(f0, b0, ctx)
            for b1 in dict.fromkeys(f1.edges):
                R1 = s1.face_relation(f1, b1, ctx)
                K = tuple(max(0, -min(R0.min_m()[i], R1.min_m()[i])) for i in range(g))
                low = max(_lowering(R0), _lowering(R1))
                checked = 0
                for wp in exponents_upto(g, D):
                    w = tuple(a + b for a, b in zip(wp, K))
                    top = sum(w) + D
                    N = top + low
                    if lhs(R1, w, N).truncate(top) != rhs(R0, w, N).truncate(top):
                        break
                    checked += 1
                else:
                    result = {"base_before": b0, "base_after": b1, "monomials_checked": checked}
                    break
            if result:
                break
        if result is None:
            ok_all = False
            faces_report.append({"face": list(f1.edges), "ok": False, "reason": "no choice of base edges intertwines"})
        else:
            faces_report.append({"face": list(f1.edges), "ok": True, **result})
    return {"edge": edge, "sign": sign, "order": D, "ok": ok_all, "faces": faces_report}
