"""Cross-ratio coordinates of P^1 colorings of faces, and face polynomials.

Colors are exact rationals or the point at infinity.  Cross-ratios are
computed from homogeneous 2-vectors, so infinity needs no special case.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .cubicmap import CubicMap, FaceCycle

__all__ = [
    "INF",
    "Color",
    "DegenerateColoring",
    "edge_faces",
    "cross_ratios",
    "face_polynomial",
    "random_coloring",
    "chromatic_check",
]


class _Infinity:
    __slots__ = ()

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_infinity, ())


def _infinity():
    return INF


INF = _Infinity()
Color = Union[Fraction, int, _Infinity]


class DegenerateColoring(ValueError):
    pass


def _hom(c: Color) -> tuple[Fraction, Fraction]:
    if c is INF:
        return Fraction(1), Fraction(0)
    return Fraction(c), Fraction(1)


def _det(p, q) -> Fraction:
    return p[0] * q[1] - p[1] * q[0]


def edge_faces(m: CubicMap, edge: str) -> tuple[int, int, int, int]:
    """Face indices (a, b, c, d) around an edge.

    a and c lie on the two sides of the edge; b and d are the faces opposite
    it across its two endpoints.
    """
    h, hp = m.darts_of(edge)
    s = m.sigma
    return m.face_of_dart(h), m.face_of_dart(s[h]), m.face_of_dart(hp), m.face_of_dart(s[hp])


def cross_ratios(m: CubicMap, col: Mapping[int, Color] | Sequence[Color]) -> dict[str, Fraction]:
    """x_e = -(a - b)(c - d) / ((b - c)(d - a)) for every edge."""
    out = {}
    for e in m.edge_labels:
        a, b, c, d = (_hom(col[i]) for i in edge_faces(m, e))
        num = _det(a, b) * _det(c, d)
        den = _det(b, c) * _det(d, a)
        if num == 0 or den == 0:
            raise DegenerateColoring(f"coloring is degenerate at edge {e}")
        out[e] = -num / den
    return out


def face_polynomial(x: Mapping[str, Fraction], f: FaceCycle, base_edge: str | None = None) -> Fraction:
    """1 + x_{e1} + x_{e1}x_{e2} + ... + x_{e1}...x_{e_{n-1}} from the base edge."""
    if base_edge is not None:
        f = f.rotated_to(base_edge)
    total, prod = Fraction(1), Fraction(1)
    for e in f.edges[:-1]:
        prod *= x[e]
        total += prod
    return total


def random_coloring(m: CubicMap, rng: random.Random, height: int = 50, p_inf: float = 0.1) -> list[Color]:
    """Random nondegenerate coloring with small-height rationals and occasional infinity."""
    nf = len(m.faces())
    while True:
        col: list[Color] = []
        for _ in range(nf):
            if rng.random() < p_inf:
                col.append(INF)
            else:
                col.append(Fraction(rng.randint(-height, height), rng.randint(1, height)))
        try:
            cross_ratios(m, col)
        except DegenerateColoring:
            continue
        return col


def chromatic_check(m: CubicMap, samples: int = 200, seed: int = 0) -> dict:
    """Check the face relations, the global relation and V_f = 0 on random colorings."""
    rng = random.Random(seed)
    g = m.genus
    sign = (-1) ** (g + 1)
    failures = []
    for i in range(samples):
        col = random_coloring(m, rng)
        x = cross_ratios(m, col)
        glob = Fraction(1)
        for v in x.values():
            glob *= v
        if glob != sign:
            failures.append({"sample": i, "check": "global", "value": str(glob)})
        for f in m.faces():
            prod = Fraction(1)
            for e in f.edges:
                prod *= x[e]
            if prod != 1:
                failures.append({"sample": i, "check": "face product", "face": list(f.edges), "value": str(prod)})
            for base in dict.fromkeys(f.edges):
                V = face_polynomial(x, f, base)
                if V != 0:
                    failures.append({"sample": i, "check": "V_f", "face": list(f.edges), "base": base, "value": str(V)})
    return {"samples": samples, "seed": seed, "genus": g, "ok": not failures, "failures": failures[:20]}
