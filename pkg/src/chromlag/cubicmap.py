"""Cubic planar graphs stored as combinatorial maps.

A map has darts (half-edges) ``0..2E-1``.  Edge ``i`` owns darts ``2i`` and
``2i+1`` and ``alpha`` swaps them.  ``sigma`` sends a dart to the next dart
counterclockwise around its vertex.  Faces are the orbits of
``sigma^{-1} o alpha``; with that choice each face is walked counterclockwise,
i.e. with the face on the left of every dart.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .intlin import IntMatrix, rank

__all__ = [
    "CubicMap",
    "FaceCycle",
    "build_named",
    "necklace",
    "canoe",
    "theta",
    "tetrahedron",
    "prism",
    "cube",
    "NECKLACE_G1_FIGURE_LABELS",
]


@dataclass(frozen=True)
class FaceCycle:
    """A face as the cyclic list of darts met counterclockwise."""

    darts: tuple[int, ...]
    edges: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.darts)

    def rotated_to(self, label: str) -> "FaceCycle":
        """Same cycle starting at the first occurrence of ``label``."""
        i = self.edges.index(label)
        return FaceCycle(self.darts[i:] + self.darts[:i], self.edges[i:] + self.edges[:i])

    def edge_vector(self, order: Sequence[str]) -> tuple[int, ...]:
        idx = {e: i for i, e in enumerate(order)}
        v = [0] * len(order)
        for e in self.edges:
            v[idx[e]] += 1
        return tuple(v)


class CubicMap:
    """Trivalent map on the sphere with stable edge labels."""

    __slots__ = ("sigma", "edge_labels", "_index", "_faces", "_vertices")

    def __init__(self, sigma: Sequence[int], edge_labels: Sequence[str], check: bool = True):
        self.sigma = tuple(int(x) for x in sigma)
        self.edge_labels = tuple(str(x) for x in edge_labels)
        self._index = {e: i for i, e in enumerate(self.edge_labels)}
        self._faces = None
        self._vertices = None
        if check:
            self._validate()

    # basic structure --------------------------------------------------
    @property
    def half_edges(self) -> int:
        return len(self.sigma)

    @staticmethod
    def alpha(d: int) -> int:
        return d ^ 1

    def pairing(self) -> tuple[int, ...]:
        return tuple(d ^ 1 for d in range(self.half_edges))

    def sigma_inv(self, d: int) -> int:
        return self._sigma_inverse()[d]

    def _sigma_inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.sigma)
        for d, s in enumerate(self.sigma):
            inv[s] = d
        return tuple(inv)

    def edge_of(self, d: int) -> str:
        return self.edge_labels[d >> 1]

    def darts_of(self, label: str) -> tuple[int, int]:
        i = self._index[label]
        return 2 * i, 2 * i + 1

    def edge_index(self, label: str) -> int:
        return self._index[label]

    @property
    def num_edges(self) -> int:
        return len(self.edge_labels)

    def vertices(self) -> list[tuple[int, ...]]:
        if self._vertices is None:
            self._vertices = _cycles(self.sigma)
        return self._vertices

    def vertex_of(self, d: int) -> int:
        for i, cyc in enumerate(self.vertices()):
            if d in cyc:
                return i
        raise KeyError(d)

    def faces(self) -> list[FaceCycle]:
        if self._faces is None:
            inv = self._sigma_inverse()
            phi = [inv[d ^ 1] for d in range(self.half_edges)]
            self._faces = [FaceCycle(c, tuple(self.edge_of(d) for d in c)) for c in _cycles(phi)]
        return self._faces

    def face_of_dart(self, d: int) -> int:
        for i, f in enumerate(self.faces()):
            if d in f.darts:
                return i
        raise KeyError(d)

    @property
    def genus(self) -> int:
        """Genus g of the double cover: the map has 2g+2 vertices."""
        return len(self.vertices()) // 2 - 1

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices()), self.num_edges, len(self.faces())

    def _validate(self) -> None:
        n = len(self.sigma)
        if n % 2 or sorted(self.sigma) != list(range(n)):
            raise ValueError("rotation must be a permutation of an even number of darts")
        if len(self.edge_labels) != n // 2 or len(set(self.edge_labels)) != n // 2:
            raise ValueError("need one distinct label per edge")
        if any(len(c) != 3 for c in self.vertices()):
            raise ValueError("every vertex must be trivalent")
        if not self.is_connected():
            raise ValueError("map is not connected")
        v, e, f = self.counts()
        if v - e + f != 2:
            raise ValueError(f"not a sphere map: v-e+f = {v - e + f}")

    def is_connected(self) -> bool:
        if not self.sigma:
            return True
        seen = {0}
        todo = [0]
        while todo:
            d = todo.pop()
            for x in (self.sigma[d], d ^ 1):
                if x not in seen:
                    seen.add(x)
                    todo.append(x)
        return len(seen) == len(self.sigma)

    # skew form --------------------------------------------------------
    def edge_skew_form(self) -> IntMatrix:
        """omega(e, e') summed over shared vertices: +1 when e' follows e."""
        E = self.num_edges
        W = [[0] * E for _ in range(E)]
        for d, s in enumerate(self.sigma):
            a, b = d >> 1, s >> 1
            W[a][b] += 1
            W[b][a] -= 1
        return IntMatrix.of(W, E)

    def skew(self, e: str, f: str) -> int:
        i, j = self._index[e], self._index[f]
        total = 0
        for d, s in enumerate(self.sigma):
            a, b = d >> 1, s >> 1
            if (a, b) == (i, j):
                total += 1
            if (a, b) == (j, i):
                total -= 1
        return total

    def face_vectors(self) -> IntMatrix:
        return IntMatrix.of([f.edge_vector(self.edge_labels) for f in self.faces()], self.num_edges)

    # local structure around an edge ----------------------------------
    def flip_neighbors(self, label: str) -> dict[str, str]:
        """The four edges around ``label`` as in a flip picture.

        With the edge drawn horizontally from L (dart ``2i``) to R, the
        counterclockwise orders are (e0, e1, e2) at L and (e0, e3, e4) at R.
        """
        h, h2 = self.darts_of(label)
        s = self.sigma
        return {
            "e1": self.edge_of(s[h]),
            "e2": self.edge_of(s[s[h]]),
            "e3": self.edge_of(s[h2]),
            "e4": self.edge_of(s[s[h2]]),
        }

    def flip(self, label: str) -> "CubicMap":
        """Diagonal exchange at an edge; every label is kept."""
        h, hp = self.darts_of(label)
        s = list(self.sigma)
        if self.vertex_of(h) == self.vertex_of(hp):
            raise ValueError(f"edge {label} is a loop and cannot be flipped")
        h1, h2 = s[h], s[s[h]]
        h3, h4 = s[hp], s[s[hp]]
        # new vertices: T = (h, h4, h1), B = (hp, h2, h3)
        s[h], s[h4], s[h1] = h4, h1, h
        s[hp], s[h2], s[h3] = h2, h3, hp
        return CubicMap(s, self.edge_labels)

    # isomorphism ------------------------------------------------------
    def _encode(self, start: int, data: Mapping[str, Hashable] | None) -> tuple:
        order = {start: 0}
        queue = deque([start])
        seq = []
        while queue:
            d = queue.popleft()
            seq.append(d)
            for x in (self.sigma[d], d ^ 1):
                if x not in order:
                    order[x] = len(order)
                    queue.append(x)
        lab = (lambda e: e) if data is None else (lambda e: data[e])
        return tuple((order[self.sigma[d]], order[d ^ 1], lab(self.edge_of(d))) for d in seq)

    def canonical_form(self, data: Mapping[str, Hashable] | None = None) -> tuple:
        """Relabelling-invariant code; edges carry ``data[label]`` (or the label)."""
        if data is None:
            starts = list(self.darts_of(min(self.edge_labels)))
        else:
            starts = range(self.half_edges)
        return min(self._encode(d, data) for d in starts)

    def isomorphism_to(
        self,
        other: "CubicMap",
        data: Mapping[str, Hashable] | None = None,
        other_data: Mapping[str, Hashable] | None = None,
    ) -> dict[str, str] | None:
        """Orientation-preserving map self -> other matching edge data.

        Without data, labels must match.  Returns the edge-label
        correspondence or None.
        """
        if self.half_edges != other.half_edges:
            return None
        if data is None:
            data = {e: e for e in self.edge_labels}
            other_data = {e: e for e in other.edge_labels}
        start = 0
        for t in range(other.half_edges):
            m = {start: t}
            queue = deque([start])
            ok = True
            while queue and ok:
                d = queue.popleft()
                td = m[d]
                if data[self.edge_of(d)] != other_data[other.edge_of(td)]:
                    ok = False
                    break
                for x, y in ((self.sigma[d], other.sigma[td]), (d ^ 1, td ^ 1)):
                    if x in m:
                        if m[x] != y:
                            ok = False
                            break
                    else:
                        m[x] = y
                        queue.append(x)
            if ok and len(m) == self.half_edges and len(set(m.values())) == self.half_edges:
                return {self.edge_of(d): other.edge_of(m[d]) for d in range(0, self.half_edges, 2)}
        return None

    def is_isomorphic(self, other: "CubicMap", labelled: bool = True) -> bool:
        if labelled:
            return self.isomorphism_to(other) is not None
        dummy = {e: 0 for e in self.edge_labels}
        odummy = {e: 0 for e in other.edge_labels}
        return self.isomorphism_to(other, dummy, odummy) is not None

    def relabel(self, mapping: Mapping[str, str]) -> "CubicMap":
        return CubicMap(self.sigma, [mapping.get(e, e) for e in self.edge_labels])

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "half_edges": self.half_edges,
            "pairing": list(self.pairing()),
            "rotation": list(self.sigma),
            "edge_labels": list(self.edge_labels),
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> "CubicMap":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["half_edges"])
        pairing = [int(x) for x in data.get("pairing", [d ^ 1 for d in range(n)])]
        if pairing != [d ^ 1 for d in range(n)]:
            # renumber darts so that partners are 2i, 2i+1
            ren, nxt = {}, 0
            for d in range(n):
                if d not in ren:
                    ren[d], ren[pairing[d]] = nxt, nxt + 1
                    nxt += 2
            sigma = [0] * n
            for d, s in enumerate(data["rotation"]):
                sigma[ren[d]] = ren[int(s)]
            return cls(sigma, data["edge_labels"])
        return cls(data["rotation"], data["edge_labels"])

    def __eq__(self, other) -> bool:
        return isinstance(other, CubicMap) and self.sigma == other.sigma and self.edge_labels == other.edge_labels

    def __hash__(self) -> int:
        return hash((self.sigma, self.edge_labels))

    def __repr__(self) -> str:
        v, e, f = self.counts()
        return f"CubicMap(v={v}, e={e}, f={f}, edges={list(self.edge_labels)})"

    # construction helpers ----------------------------------------------
    @classmethod
    def from_rotations(cls, rotations: Iterable[Sequence[str]], labels: Sequence[str] | None = None) -> "CubicMap":
        """Build from counterclockwise edge-label lists, one per vertex.

        Each label must occur exactly twice overall (twice at one vertex for
        a loop).
        """
        rotations = [list(r) for r in rotations]
        if labels is None:
            labels = []
            for r in rotations:
                for e in r:
                    if e not in labels:
                        labels.append(e)
        idx = {e: i for i, e in enumerate(labels)}
        used = {e: 0 for e in labels}
        dart_rows = []
        for r in rotations:
            row = []
            for e in r:
                if used[e] > 1:
                    raise ValueError(f"edge {e} used more than twice")
                row.append(2 * idx[e] + used[e])
                used[e] += 1
            dart_rows.append(row)
        if any(c != 2 for c in used.values()):
            raise ValueError("every edge needs exactly two ends")
        sigma = [0] * (2 * len(labels))
        for row in dart_rows:
            for k, d in enumerate(row):
                sigma[d] = row[(k + 1) % len(row)]
        return cls(sigma, labels)

    @classmethod
    def from_straight_line(
        cls, points: Mapping[Hashable, tuple[float, float]], edges: Sequence[tuple[Hashable, Hashable, str]]
    ) -> "CubicMap":
        """Map of a straight-line drawing (rotation by angle)."""
        ends: dict[Hashable, list[tuple[float, str]]] = {p: [] for p in points}
        for u, v, lab in edges:
            (x0, y0), (x1, y1) = points[u], points[v]
            ends[u].append((math.atan2(y1 - y0, x1 - x0), lab))
            ends[v].append((math.atan2(y0 - y1, x0 - x1), lab))
        rot = [[lab for _, lab in sorted(ends[p])] for p in points]
        return cls.from_rotations(rot, [lab for _, _, lab in edges])


def _cycles(perm: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    out = []
    for d in range(len(perm)):
        if not seen[d]:
            cyc = []
            x = d
            while not seen[x]:
                seen[x] = True
                cyc.append(x)
                x = perm[x]
            out.append(tuple(cyc))
    return out


# ----------------------------------------------------------------------
# named graphs


def theta() -> CubicMap:
    """Two vertices joined by three parallel edges."""
    return CubicMap.from_rotations([["e2", "e1", "e3"], ["e1", "e2", "e3"]], ["e1", "e2", "e3"])


def necklace(g: int) -> CubicMap:
    """The necklace with beads a_k/b_k (k = 1..g+1) and strands s_k.

    Vertices sit at 0..2g+1 on a line.  Bead k is a circle between vertices
    2k-2 and 2k-1 with upper arc ``a{k}`` and lower arc ``b{k}``; strand
    ``s{k}`` (k <= g) joins 2k-1 to 2k and ``s{g+1}`` loops over everything
    from 0 to 2g+1.
    """
    if g < 0:
        raise ValueError("genus must be nonnegative")
    top = f"s{g + 1}"
    rot = [["a1", top, "b1"]]
    for k in range(1, g + 1):
        rot.append([f"s{k}", f"a{k}", f"b{k}"])
        rot.append([f"a{k + 1}", f"s{k}", f"b{k + 1}"])
    rot.append([top, f"a{g + 1}", f"b{g + 1}"])
    labels = []
    for k in range(1, g + 2):
        labels += [f"a{k}", f"b{k}", f"s{k}"]
    return CubicMap.from_rotations(rot, labels)


# Figure numbering of the genus-one necklace edges.
NECKLACE_G1_FIGURE_LABELS = {"1": "a1", "2": "b1", "3": "s1", "4": "a2", "5": "b2", "6": "s2"}


def canoe(g: int) -> CubicMap:
    """Necklace flipped at the strands s_1..s_g."""
    m = necklace(g)
    for k in range(1, g + 1):
        m = m.flip(f"s{k}")
    return m


def tetrahedron() -> CubicMap:
    """K4 drawn as a triangle 1,2,3 with vertex 4 in the middle."""
    pts = {1: (0.0, 2.0), 2: (-2.0, -1.0), 3: (2.0, -1.0), 4: (0.0, 0.0)}
    edges = [(1, 2, "e12"), (1, 3, "e13"), (1, 4, "e14"), (2, 3, "e23"), (2, 4, "e24"), (3, 4, "e34")]
    return CubicMap.from_straight_line(pts, edges)


def prism() -> CubicMap:
    """Triangular prism: top triangle T1..T3, bottom B1..B3, verticals L1..L3.

    Top vertices A, B, C with T1 = AC, T2 = BC, T3 = AB; bottom D, E, F below
    them with B1 = DF, B2 = EF, B3 = DE; L1 = AD, L2 = CF, L3 = BE.
    """
    rot = [
        ["T3", "T1", "L1"],  # A
        ["T2", "T3", "L3"],  # B
        ["L2", "T1", "T2"],  # C
        ["L1", "B1", "B3"],  # D
        ["L3", "B3", "B2"],  # E
        ["L2", "B2", "B1"],  # F
    ]
    return CubicMap.from_rotations(rot, ["T1", "T2", "T3", "L1", "L2", "L3", "B1", "B2", "B3"])


def cube() -> CubicMap:
    """Cube 1-skeleton: inner square 1-4, outer square 5-8, diagonals 9-12.

    Inner edges 1 bottom, 2 right, 3 top, 4 left; outer edges likewise 5-8;
    the connecting edges 9, 10, 11, 12 sit at the lower-left, lower-right,
    upper-right and upper-left corners.
    """
    pts = {
        "il": (-1.0, -1.0), "ir": (1.0, -1.0), "ur": (1.0, 1.0), "ul": (-1.0, 1.0),
        "OL": (-3.0, -3.0), "OR": (3.0, -3.0), "UR": (3.0, 3.0), "UL": (-3.0, 3.0),
    }
    edges = [
        ("il", "ir", "1"), ("ir", "ur", "2"), ("ur", "ul", "3"), ("ul", "il", "4"),
        ("OL", "OR", "5"), ("OR", "UR", "6"), ("UR", "UL", "7"), ("UL", "OL", "8"),
        ("il", "OL", "9"), ("ir", "OR", "10"), ("ur", "UR", "11"), ("ul", "UL", "12"),
    ]
    return CubicMap.from_straight_line(pts, edges)


_BUILDERS = {
    "theta": lambda g: theta(),
    "necklace": necklace,
    "canoe": canoe,
    "tetrahedron": lambda g: tetrahedron(),
    "prism": lambda g: prism(),
    "cube": lambda g: cube(),
}


def build_named(name: str, g: int = 1) -> CubicMap:
    """Named graph; tetrahedron, prism and cube ignore ``g``."""
    try:
        return _BUILDERS[name](g)
    except KeyError:
        raise ValueError(f"unknown graph {name!r}") from None


def skew_rank(m: CubicMap) -> int:
    return rank(m.edge_skew_form())
