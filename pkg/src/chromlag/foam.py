"""Combinatorial deformed foams.

A foam is recorded by its boundary cubic map, a set of arcs and a list of
faces.  Each face carries a signed word in edges and arcs; an external face
touches the boundary along exactly one edge, an internal face only along
arcs.  H1 of the filling is Z^{E + A} modulo the face words, and the edge
classes give the map tau from H1 of the boundary surface.

Arc signs are input data.  They are checked for consistency: every face cycle
of the boundary graph has to map to zero under tau.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .cubicmap import CubicMap, necklace, prism, tetrahedron
from .intlin import (
    IntMatrix,
    LatticePresentation,
    is_isotropic,
    kernel_basis,
    quotient_coordinates,
    quotient_rank_and_torsion,
    smith_normal_form,
    unimodular_inverse,
)

__all__ = [
    "FoamFace",
    "DeformedFoam",
    "InvalidFoam",
    "PhaseFraming",
    "h1_presentation",
    "tau_map",
    "tau_basis",
    "tau_of",
    "phase_and_framings",
    "mutate_foam",
    "transfer_edge_vectors",
    "same_h1_span",
    "necklace_foam",
    "prism_foam",
    "tetrahedron_foam",
    "build_foam",
]


class InvalidFoam(ValueError):
    pass


@dataclass(frozen=True)
class FoamFace:
    word: tuple[tuple[str, int], ...]
    external: bool

    def __init__(self, word: Sequence[Sequence], external: bool = True):
        object.__setattr__(self, "word", tuple((str(a), int(s)) for a, s in word))
        object.__setattr__(self, "external", bool(external))


class DeformedFoam:
    __slots__ = ("graph", "arcs", "faces")

    def __init__(self, graph: CubicMap, arcs: Sequence[str], faces: Sequence[FoamFace]):
        self.graph = graph
        self.arcs = tuple(arcs)
        self.faces = tuple(faces)
        self._validate_words()

    @property
    def edges(self) -> tuple[str, ...]:
        return tuple(self.graph.edge_labels)

    @property
    def generators(self) -> tuple[str, ...]:
        return self.edges + self.arcs

    @property
    def genus(self) -> int:
        return self.graph.genus

    def _validate_words(self) -> None:
        edges = set(self.edges)
        if edges & set(self.arcs):
            raise InvalidFoam("arc labels clash with edge labels")
        if len(set(self.arcs)) != len(self.arcs):
            raise InvalidFoam("duplicate arc labels")
        seen: dict[str, int] = {}
        for f in self.faces:
            letters = [a for a, _ in f.word]
            bad = [a for a in letters if a not in edges and a not in self.arcs]
            if bad:
                raise InvalidFoam(f"unknown letters {bad} in face word")
            in_face = [(a, s) for a, s in f.word if a in edges]
            if f.external:
                if len(in_face) != 1 or in_face[0][1] != 1:
                    raise InvalidFoam(f"external face {f.word} must contain exactly one edge with sign +1")
                seen[in_face[0][0]] = seen.get(in_face[0][0], 0) + 1
            elif in_face:
                raise InvalidFoam(f"internal face {f.word} contains edges")
        for e in self.edges:
            if seen.get(e, 0) != 1:
                raise InvalidFoam(f"edge {e} lies on {seen.get(e, 0)} external faces")

    def face_external_for(self, edge: str) -> int:
        for i, f in enumerate(self.faces):
            if f.external and any(a == edge for a, _ in f.word):
                return i
        raise KeyError(edge)

    def relation_rows(self) -> list[list[int]]:
        idx = {a: i for i, a in enumerate(self.generators)}
        rows = []
        for f in self.faces:
            r = [0] * len(idx)
            for a, s in f.word:
                r[idx[a]] += s
            rows.append(r)
        return rows

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "arcs": list(self.arcs),
            "faces": [{"word": [[a, s] for a, s in f.word], "external": f.external} for f in self.faces],
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> "DeformedFoam":
        if isinstance(data, str):
            data = json.loads(data)
        graph = CubicMap.from_json(data["graph"])
        faces = [FoamFace(f["word"], f.get("external", True)) for f in data["faces"]]
        return cls(graph, data["arcs"], faces)

    def __repr__(self) -> str:
        return f"DeformedFoam(edges={len(self.edges)}, arcs={list(self.arcs)}, faces={len(self.faces)})"


# ----------------------------------------------------------------------
# H1 and tau


def h1_presentation(F: DeformedFoam) -> LatticePresentation:
    """Z^{E + A} modulo one relation per foam face; generator order is edges then arcs."""
    rows = F.relation_rows()
    pres = LatticePresentation(len(F.generators), IntMatrix.of(rows, len(F.generators)))
    r, torsion = quotient_rank_and_torsion(pres)
    if r != F.genus:
        raise InvalidFoam(f"H1 has rank {r}, boundary genus is {F.genus}")
    return pres


@dataclass(frozen=True)
class _TauData:
    matrix: IntMatrix  # g x |E|, columns = tau(edge) in the H1(L) basis
    basis_arcs: tuple[str, ...] | None
    arc_coords: dict[str, tuple[int, ...]]
    torsion: tuple[int, ...]


def _tau_data(F: DeformedFoam) -> _TauData:
    pres = h1_presentation(F)
    _, torsion = quotient_rank_and_torsion(pres)
    proj, _ = quotient_coordinates(pres)
    g = proj.rows
    n_e = len(F.edges)
    col = lambda j: [proj[i, j] for i in range(g)]  # noqa: E731
    basis_arcs = None
    change = IntMatrix.identity(g)
    for combo in itertools.combinations(range(len(F.arcs)), g):
        B = IntMatrix.of([[proj[i, n_e + a] for a in combo] for i in range(g)], g) if g else IntMatrix.zeros(0, 0)
        try:
            inv = unimodular_inverse(B) if g else IntMatrix.zeros(0, 0)
        except ValueError:
            continue
        basis_arcs = tuple(F.arcs[a] for a in combo)
        change = inv
        break

    def coords(j):
        v = col(j)
        return tuple(change.apply(v)) if g else ()

    tau = IntMatrix.of([[coords(j)[i] for j in range(n_e)] for i in range(g)], n_e) if g else IntMatrix.zeros(0, n_e)
    arc_coords = {a: coords(n_e + k) for k, a in enumerate(F.arcs)}
    data = _TauData(tau, basis_arcs, arc_coords, tuple(torsion))
    # consistency with the boundary face relations
    for face in F.graph.faces():
        v = face.edge_vector(F.edges)
        if any(tau.apply(v)):
            raise InvalidFoam(f"tau does not kill the boundary face {face.edges}; arc signs are inconsistent")
    return data


def tau_map(F: DeformedFoam) -> IntMatrix:
    """Matrix of tau on edge generators; rows index the H1(L) basis (basis arcs when available)."""
    data = _tau_data(F)
    g = data.matrix.rows
    if g:
        _, D, _ = smith_normal_form(data.matrix)
        if any(D[i, i] != 1 for i in range(g)):
            raise InvalidFoam("tau is not surjective")
    return data.matrix


def tau_basis(F: DeformedFoam) -> tuple[str, ...] | None:
    """Arcs used as the basis of H1(L), or None when no g arcs form a basis."""
    return _tau_data(F).basis_arcs


def tau_of(F: DeformedFoam, edge: str) -> tuple[int, ...]:
    T = tau_map(F)
    j = F.edges.index(edge)
    return tuple(T[i, j] for i in range(T.rows))


# ----------------------------------------------------------------------
# phases and framings


@dataclass(frozen=True)
class PhaseFraming:
    """Phase and a base framing as edge vectors, plus H1(S) coordinates and a cone."""

    phase: IntMatrix
    framing: IntMatrix
    cone: tuple[tuple[int, ...], ...]
    phase_h1: IntMatrix
    framing_h1: IntMatrix
    edges: tuple[str, ...]


def _h1_surface(graph: CubicMap):
    faces = [f.edge_vector(graph.edge_labels) for f in graph.faces()]
    pres = LatticePresentation(len(graph.edge_labels), IntMatrix.of(faces, len(graph.edge_labels)))
    proj, lift = quotient_coordinates(pres)
    W = graph.edge_skew_form()
    omega = lift.T @ W @ lift
    return proj, lift, omega


def _form(omega: IntMatrix, v, w) -> int:
    return sum(v[i] * omega[i, j] * w[j] for i in range(omega.rows) for j in range(omega.cols) if v[i] and w[j])


def phase_and_framings(F: DeformedFoam) -> tuple[PhaseFraming, int]:
    """Phase = ker tau, an isotropic base framing, and the framing parameter rank g(g+1)/2."""
    tau = tau_map(F)
    g = tau.rows
    proj, lift, omega = _h1_surface(F.graph)
    n = lift.cols  # 2g
    edges = F.edges
    if g == 0:
        empty = IntMatrix.zeros(0, len(edges))
        return PhaseFraming(empty, empty, (), IntMatrix.zeros(0, n), IntMatrix.zeros(0, n), edges), 0
    tbar = tau @ lift  # g x 2g
    K = kernel_basis(tbar)  # rows in Z^{2g}
    if K.rows != g:
        raise InvalidFoam("phase does not have rank g")
    mus = [list(K.data[i]) for i in range(g)]
    if not is_isotropic(K, omega):
        raise AssertionError("phase is not isotropic")
    # lifts s_i with tbar s_i = e_i
    U, D, V = smith_normal_form(tbar)
    if any(D[i, i] != 1 for i in range(g)):
        raise InvalidFoam("tau is not surjective")
    lifts = []
    for i in range(g):
        y = [U[r, i] for r in range(g)] + [0] * (n - g)
        lifts.append(list(V.apply(y)))
    P = IntMatrix.of([[_form(omega, lifts[i], mus[j]) for j in range(g)] for i in range(g)], g)
    S = [[_form(omega, lifts[i], lifts[k]) for k in range(g)] for i in range(g)]
    M = IntMatrix.of([[S[i][k] if i > k else 0 for k in range(g)] for i in range(g)], g)
    try:
        C = M @ unimodular_inverse(P.T)
    except ValueError as exc:
        raise AssertionError("phase pairing with the lifts is not unimodular") from exc
    frame = []
    for i in range(g):
        f = list(lifts[i])
        for j in range(g):
            if C[i, j]:
                f = [a + C[i, j] * b for a, b in zip(f, mus[j])]
        frame.append(f)
    Fm = IntMatrix.of(frame, n)
    if not is_isotropic(Fm, omega):
        raise AssertionError("no isotropic splitting found")
    if tbar @ Fm.T != IntMatrix.identity(g):
        raise AssertionError("framing is not a splitting of tau")
    to_edges = lambda rows: IntMatrix.of([list(lift.apply(r)) for r in rows], len(edges))  # noqa: E731
    cone = tuple(tuple(int(i == j) for j in range(g)) for i in range(g))
    pf = PhaseFraming(to_edges(mus), to_edges(frame), cone, K, Fm, edges)
    return pf, g * (g + 1) // 2


def same_h1_span(graph: CubicMap, a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> bool:
    """Do two families of edge vectors span the same sublattice of H1 of the surface?"""
    from .intlin import hermite_rows

    proj, _, _ = _h1_surface(graph)
    pa = hermite_rows([proj.apply(v) for v in a], proj.rows)
    pb = hermite_rows([proj.apply(v) for v in b], proj.rows)
    return pa == pb


# ----------------------------------------------------------------------
# mutation


def _new_arc_name(F: DeformedFoam, edge: str) -> str:
    base = f"m_{edge}"
    name, k = base, 1
    while name in F.arcs or name in F.edges:
        k += 1
        name = f"{base}_{k}"
    return name


def mutate_foam(F: DeformedFoam, edge: str, sign: int = 1) -> tuple[DeformedFoam, dict]:
    """Flip the boundary at ``edge`` and add the arc of the new tetrahedron.

    The new arc alpha takes the class of the flipped edge.  The old face of
    ``edge`` becomes internal with ``edge`` replaced by alpha, the new edge gets
    the external face (edge + alpha), and each neighbor gaining the flipped
    edge under nu^sign gets -alpha.  Also returns the transfer maps on edge
    classes of the boundary surface and on generators of H1(L).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not any(tau_of(F, edge)):
        raise InvalidFoam(f"mutation at {edge} is not allowable: its class bounds in the filling")
    graph = F.graph
    alpha = _new_arc_name(F, edge)
    gains = {e: max(0, sign * graph.skew(e, edge)) for e in F.edges if e != edge}
    gains = {e: k for e, k in gains.items() if k}
    faces = []
    for f in F.faces:
        letters = dict.fromkeys(a for a, _ in f.word)
        if f.external and edge in letters:
            faces.append(FoamFace([(alpha if a == edge else a, s) for a, s in f.word], external=False))
            continue
        word = list(f.word)
        if f.external:
            (e,) = [a for a, _ in word if a in graph.edge_labels]
            if e in gains:
                word.append((alpha, -gains[e]))
        faces.append(FoamFace(word, f.external))
    faces.append(FoamFace([(edge, 1), (alpha, 1)], True))
    new = DeformedFoam(graph.flip(edge), F.arcs + (alpha,), faces)
    # old edge e -> -(new e); a gaining neighbor b -> new b + k (new e)
    surface = {e: {e: 1} for e in F.edges}
    surface[edge] = {edge: -1}
    for e, k in gains.items():
        surface[e] = {e: 1, edge: k}
    filling = {a: {a: 1} for a in F.arcs}
    for e in F.edges:
        filling[e] = {e: 1}
    filling[edge] = {alpha: 1}
    for e, k in gains.items():
        filling[e] = {e: 1, alpha: -k}
    return new, {"surface": surface, "filling": filling, "new_arc": alpha}


def transfer_edge_vectors(transfer: Mapping, old_edges: Sequence[str], new_edges: Sequence[str], vectors) -> list[list[int]]:
    """Push edge vectors of the old surface through the surface part of a transfer map."""
    idx = {e: i for i, e in enumerate(new_edges)}
    out = []
    for v in vectors:
        w = [0] * len(new_edges)
        for e, c in zip(old_edges, v):
            if c:
                for e2, k in transfer["surface"][e].items():
                    w[idx[e2]] += c * k
        out.append(w)
    return out


# ----------------------------------------------------------------------
# bundled foams


def necklace_foam(g: int) -> DeformedFoam:
    """Arcs t_k run along the strands; beads bound in the filling."""
    graph = necklace(g)
    arcs = [f"t{k}" for k in range(1, g + 2)]
    faces = [FoamFace([(f"s{k}", 1), (f"t{k}", -1)]) for k in range(1, g + 2)]
    for k in range(1, g + 2):
        faces.append(FoamFace([(f"a{k}", 1)]))
        faces.append(FoamFace([(f"b{k}", 1)]))
    faces.append(FoamFace([(t, 1) for t in arcs], external=False))
    return DeformedFoam(graph, arcs, faces)


def prism_foam() -> DeformedFoam:
    """Three arcs a, b, c with one internal face b + c."""
    words = {
        "T1": [("a", 1)],
        "T2": [("a", -1), ("c", -1)],
        "T3": [("b", -1)],
        "L1": [("b", 1)],
        "L2": [],
        "L3": [("c", 1)],
        "B1": [("b", -1), ("a", -1)],
        "B2": [("a", 1)],
        "B3": [("c", -1)],
    }
    faces = [FoamFace([(e, 1)] + w) for e, w in words.items()]
    faces.append(FoamFace([("b", 1), ("c", 1)], external=False))
    return DeformedFoam(prism(), ["a", "b", "c"], faces)


def tetrahedron_foam() -> DeformedFoam:
    """Single deformed Harvey-Lawson tetrahedron: one arc; e12 and e34 bound."""
    words = {
        "e12": [],
        "e34": [],
        "e13": [("a", -1)],
        "e24": [("a", -1)],
        "e14": [("a", 1)],
        "e23": [("a", 1)],
    }
    faces = [FoamFace([(e, 1)] + w) for e, w in words.items()]
    return DeformedFoam(tetrahedron(), ["a"], faces)


def build_foam(name: str, g: int = 1) -> DeformedFoam:
    if name == "necklace":
        return necklace_foam(g)
    if name == "prism":
        return prism_foam()
    if name in ("tetrahedron", "hl"):
        return tetrahedron_foam()
    raise ValueError(f"no bundled foam called {name!r}")
