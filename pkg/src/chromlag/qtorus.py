"""The quantum torus D_{2g} and its action on power series.

Generators U_i, V_i with V_i U_j = q^{2 delta_ij} U_j V_i act on series by
U_i F = X_i F and (V_i F)(X) = F(..., q^2 X_i, ...).

``TorusMonomial`` stores the lattice point (m, n) together with a scalar
``sign * (-q)^c`` in front of the *symmetric* (Weyl) monomial
X_{(m,n)} = q^{m.n} U^m V^n.  Lattice sums are then plain additions, products
pick up q^{<a,b>} with <a,b> = n_a.m_b - m_a.n_b, and the normal-ordered
coefficient of U^m V^n is ``sign * (-q)^c * q^{m.n}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .intlin import IntMatrix
from .qseries import DEFAULT, QRat, XSeries

__all__ = [
    "TorusMonomial",
    "OperatorPoly",
    "mono_mul",
    "act",
    "framing_shift",
    "framing_shift_mono",
    "rescale_sigma",
    "rescale_mono",
    "apply_phi",
    "pairing",
]

Vec = tuple[int, ...]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def pairing(m1: Sequence[int], n1: Sequence[int], m2: Sequence[int], n2: Sequence[int]) -> int:
    """<(m1,n1),(m2,n2)> = n1.m2 - m1.n2, so X_a X_b = q^<a,b> X_{a+b}."""
    return _dot(n1, m2) - _dot(m1, n2)


@dataclass(frozen=True)
class TorusMonomial:
    """sign * (-q)^c * X_{(m,n)} with X_{(m,n)} = q^{m.n} U^m V^n."""

    c: int
    m: Vec
    n: Vec
    sign: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if len(self.m) != len(self.n):
            raise ValueError("U and V exponent vectors differ in length")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def g(self) -> int:
        return len(self.m)

    @classmethod
    def identity(cls, g: int) -> "TorusMonomial":
        return cls(0, (0,) * g, (0,) * g)

    @classmethod
    def U(cls, i: int, g: int, power: int = 1) -> "TorusMonomial":
        m = [0] * g
        m[i] = power
        return cls(0, tuple(m), (0,) * g)

    @classmethod
    def V(cls, i: int, g: int, power: int = 1) -> "TorusMonomial":
        n = [0] * g
        n[i] = power
        return cls(0, (0,) * g, tuple(n))

    @classmethod
    def normal_ordered(cls, sign: int, qpow: int, m: Sequence[int], n: Sequence[int]) -> "TorusMonomial":
        """The monomial sign * q^qpow * U^m V^n."""
        k = qpow - _dot(m, n)  # sign q^k X = sign (-1)^k (-q)^k X
        return cls(k, tuple(m), tuple(n), sign * (-1) ** (k % 2))

    def normal_coefficient(self) -> tuple[int, int]:
        """(sign, e) with the monomial equal to sign * q^e * U^m V^n."""
        return self.sign * (-1) ** (self.c % 2), self.c + _dot(self.m, self.n)

    def scalar(self, ctx=DEFAULT) -> QRat:
        s, e = self.normal_coefficient()
        return QRat.qpow(e, ctx, s)

    def lattice_add(self, other: "TorusMonomial") -> "TorusMonomial":
        """X_{v+w}: add exponents, multiply signs (no q-correction)."""
        return TorusMonomial(
            self.c + other.c,
            tuple(a + b for a, b in zip(self.m, other.m)),
            tuple(a + b for a, b in zip(self.n, other.n)),
            self.sign * other.sign,
        )

    def lattice_neg(self) -> "TorusMonomial":
        """X_{-v}, which is the inverse of X_v."""
        return TorusMonomial(-self.c, tuple(-a for a in self.m), tuple(-a for a in self.n), self.sign)

    inverse = lattice_neg

    def power(self, k: int) -> "TorusMonomial":
        """X_v^k = X_{kv} since <v,v> = 0."""
        return TorusMonomial(k * self.c, tuple(k * a for a in self.m), tuple(k * a for a in self.n), self.sign**k if k >= 0 else self.sign ** (-k))

    def pair(self, other: "TorusMonomial") -> int:
        return pairing(self.m, self.n, other.m, other.n)

    def is_scalar(self) -> bool:
        return not any(self.m) and not any(self.n)

    def to_json(self) -> dict:
        out = {"c": self.c, "m": list(self.m), "n": list(self.n)}
        if self.sign != 1:
            out["sign"] = self.sign
        return out

    @classmethod
    def from_json(cls, d: Mapping) -> "TorusMonomial":
        return cls(int(d["c"]), tuple(d["m"]), tuple(d["n"]), int(d.get("sign", 1)))

    def __str__(self) -> str:
        s, e = self.normal_coefficient()
        parts = []
        for i, x in enumerate(self.m):
            if x:
                parts.append(f"U{i + 1}" + (f"^{x}" if x != 1 else ""))
        for i, x in enumerate(self.n):
            if x:
                parts.append(f"V{i + 1}" + (f"^{x}" if x != 1 else ""))
        head = ("-" if s < 0 else "") + (f"q^{e}" if e else "1")
        return head + ("*" + "*".join(parts) if parts else "")


def mono_mul(a: TorusMonomial, b: TorusMonomial) -> TorusMonomial:
    """Product in the quantum torus: X_a X_b = q^{<a,b>} X_{a+b}."""
    if a.g != b.g:
        raise ValueError("monomials of different rank")
    k = a.pair(b)
    s = a.lattice_add(b)
    return TorusMonomial(s.c + k, s.m, s.n, s.sign * (-1) ** (k % 2))


class OperatorPoly:
    """Finite sum of coefficient * U^m V^n (normal ordered)."""

    __slots__ = ("g", "ctx", "terms")

    def __init__(self, g: int, terms: Mapping[tuple[Vec, Vec], QRat] | None = None, ctx=DEFAULT):
        self.g = g
        self.ctx = ctx
        clean = {}
        for (m, n), c in (terms or {}).items():
            if not c.is_zero():
                clean[(tuple(m), tuple(n))] = c
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def from_monomials(cls, monos: Iterable[TorusMonomial | tuple[QRat, TorusMonomial]], g: int, ctx=DEFAULT) -> "OperatorPoly":
        acc: dict[tuple[Vec, Vec], QRat] = {}
        for item in monos:
            coef, t = item if isinstance(item, tuple) else (QRat.const(1, ctx), item)
            key = (t.m, t.n)
            val = coef * t.scalar(ctx)
            acc[key] = acc[key] + val if key in acc else val
        return cls(g, acc, ctx)

    @classmethod
    def scalar(cls, c: QRat, g: int) -> "OperatorPoly":
        return cls(g, {((0,) * g, (0,) * g): c}, c.ctx)

    def __add__(self, other: "OperatorPoly") -> "OperatorPoly":
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return OperatorPoly(self.g, acc, self.ctx)

    def __neg__(self) -> "OperatorPoly":
        return OperatorPoly(self.g, {k: -c for k, c in self.terms.items()}, self.ctx)

    def __sub__(self, other: "OperatorPoly") -> "OperatorPoly":
        return self + (-other)

    def __mul__(self, other) -> "OperatorPoly":
        if isinstance(other, QRat):
            return OperatorPoly(self.g, {k: c * other for k, c in self.terms.items()}, self.ctx)
        acc: dict[tuple[Vec, Vec], QRat] = {}
        for (m1, n1), c1 in self.terms.items():
            for (m2, n2), c2 in other.terms.items():
                # U^m1 V^n1 U^m2 V^n2 = q^{2 n1.m2} U^{m1+m2} V^{n1+n2}
                key = (tuple(a + b for a, b in zip(m1, m2)), tuple(a + b for a, b in zip(n1, n2)))
                val = (c1 * c2).mul_qpow(2 * _dot(n1, m2))
                acc[key] = acc[key] + val if key in acc else val
        return OperatorPoly(self.g, acc, self.ctx)

    def __eq__(self, other) -> bool:
        return isinstance(other, OperatorPoly) and self.g == other.g and self.terms == other.terms

    def min_m(self) -> Vec:
        """Componentwise minimum of the U-exponents (0 for an empty operator)."""
        if not self.terms:
            return (0,) * self.g
        return tuple(min(m[i] for m, _ in self.terms) for i in range(self.g))

    def classical(self, q_value: int = 1) -> dict[tuple[Vec, Vec], Fraction]:
        """Specialise q to +1 or -1; U, V become commuting variables."""
        out = {}
        for k, c in self.terms.items():
            v = c.evaluate(q_value)
            if v:
                out[k] = v
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (m, n), c in self.terms.items():
            mon = [f"U{i + 1}^{x}" for i, x in enumerate(m) if x] + [f"V{i + 1}^{x}" for i, x in enumerate(n) if x]
            parts.append(f"({c!r})" + ("*" + "*".join(mon) if mon else ""))
        return " + ".join(parts)


def _as_operator(t: TorusMonomial | OperatorPoly, ctx) -> OperatorPoly:
    if isinstance(t, OperatorPoly):
        return t
    return OperatorPoly.from_monomials([t], t.g, ctx)


def act(t: TorusMonomial | OperatorPoly, F: XSeries) -> XSeries:
    """Apply an operator to a series (U_i multiplies by X_i, V_i scales X_i by q^2)."""
    op = _as_operator(t, F.ctx)
    if op.g != F.g:
        raise ValueError("operator and series have different rank")
    acc: dict[tuple[int, ...], list[QRat]] = {}
    for (m, n), c in op.terms.items():
        for w, a in F.terms.items():
            v = tuple(x + y for x, y in zip(w, m))
            if min(v, default=0) < 0:
                raise ValueError(f"negative exponent {v} produced by U^{m}")
            if sum(v) > F.order:
                continue
            acc.setdefault(v, []).append((a * c).mul_qpow(2 * _dot(n, w)))
    from .qseries import _qsum

    return XSeries(F.g, F.order, {v: _qsum(cs, F.ctx) for v, cs in acc.items()}, F.ctx)


def _check_symmetric(omega: IntMatrix | Sequence[Sequence[int]], g: int) -> list[list[int]]:
    O = omega.tolist() if isinstance(omega, IntMatrix) else [list(r) for r in omega]
    if len(O) != g or any(len(r) != g for r in O):
        raise ValueError(f"framing matrix must be {g}x{g}")
    if any(O[i][j] != O[j][i] for i in range(g) for j in range(g)):
        raise ValueError("framing matrix must be symmetric")
    return O


def framing_shift(omega, F: XSeries) -> XSeries:
    """T_Omega: multiply the X^w coefficient by q^{w^T Omega w}."""
    O = _check_symmetric(omega, F.g)
    return F.map_coefficients(lambda w, c: c.mul_qpow(sum(w[i] * O[i][j] * w[j] for i in range(F.g) for j in range(F.g))))


def framing_shift_mono(omega, t: TorusMonomial) -> TorusMonomial:
    """Induced automorphism U_j -> q^{w_jj} U_j prod_k V_k^{w_jk}, V fixed.

    In symmetric form this is X_{(m,n)} -> X_{(m, n + Omega m)}.
    """
    O = _check_symmetric(omega, t.g)
    n = tuple(t.n[i] + sum(O[i][j] * t.m[j] for j in range(t.g)) for i in range(t.g))
    return TorusMonomial(t.c, t.m, n, t.sign)


def rescale_sigma(d: Sequence[int], F: XSeries) -> XSeries:
    """sigma_d: multiply the X^w coefficient by (-q)^{d.w}."""
    if len(d) != F.g:
        raise ValueError("rescaling vector has the wrong length")
    return F.map_coefficients(lambda w, c: c.mul_qpow(_dot(d, w), (-1) ** (_dot(d, w) % 2)))


def rescale_mono(d: Sequence[int], t: TorusMonomial) -> TorusMonomial:
    """Induced automorphism U_i -> (-q)^{d_i} U_i, V fixed."""
    return TorusMonomial(t.c + _dot(d, t.m), t.m, t.n, t.sign)


def phi_coefficient(k: int, sign: int, ctx=DEFAULT) -> QRat:
    """Coefficient of x^k in Phi(x)^sign.

    Phi(x) = prod_{n>=0} (1 + q^{2n+1} x)^{-1} = sum_k (-q)^k x^k / (q^2)_k and
    Phi(x)^{-1} = (-q x; q^2)_inf = sum_k q^{k^2} x^k / (q^2)_k.
    """
    poch = QRat.const(1, ctx)
    for i in range(1, k + 1):
        poch = poch * (1 - QRat.qpow(2 * i, ctx))
    if sign == 1:
        return QRat.qpow(k, ctx, (-1) ** k) / poch
    if sign == -1:
        return QRat.qpow(k * k, ctx) / poch
    raise ValueError("sign must be +1 or -1")


def apply_phi(t: TorusMonomial, sign: int, F: XSeries) -> XSeries:
    """Multiply F by the operator series Phi(t)^sign.

    ``t`` must raise the X-degree (m >= 0 componentwise, m != 0), which makes
    the truncation exact.
    """
    if any(x < 0 for x in t.m) or not any(t.m):
        raise ValueError(f"monomial {t} is not admissible for the dilogarithm action")
    out = F
    k = 1
    while k * sum(t.m) <= F.order:
        term = act(t.power(k), F)
        if term.terms:
            out = out + term.scale(phi_coefficient(k, sign, F.ctx))
        k += 1
    return out
