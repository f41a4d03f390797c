"""Exact coefficients in Q(q) and truncated power series in X_1..X_g.

``QRat`` is a reduced fraction of rational polynomials in ``q`` (optionally
with extra parameters such as a closed-string variable ``Q``).  ``XSeries`` is
a power series in commuting variables X_i, truncated at a total degree, with
``QRat`` coefficients.

Plethystic operations use the Adams operation on the variable ``-q`` (the
square root ``t^{1/2} = -q`` of ``t = q^2``): it sends ``q`` to ``-(-q)^n``.
With that choice the dilogarithm ``Phi(x)`` has an integral plethystic
logarithm; the naive substitution ``q -> q^n`` does not.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Iterable, Iterator, Mapping, Sequence

import flint

__all__ = [
    "QRat",
    "XSeries",
    "QLaurentPoly",
    "field",
    "series_arith",
    "pochhammer_inf",
    "q_pochhammer",
    "adams_substitute",
    "plethystic_exp",
    "plethystic_log",
    "log_series",
    "exp_series",
    "reduce_to_laurent",
    "mobius",
    "exponents_upto",
]

Exp = tuple[int, ...]


@lru_cache(maxsize=None)
def field(names: tuple[str, ...] = ("q",)) -> flint.fmpq_mpoly_ctx:
    """Polynomial context whose fraction field holds the coefficients.

    The first variable is always the quantum parameter ``q``.
    """
    if not names or names[0] != "q":
        raise ValueError("the first field variable must be 'q'")
    return flint.fmpq_mpoly_ctx.get(tuple(names), "lex")


DEFAULT = field()


def _coerce_scalar(x) -> flint.fmpq:
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq(x)


class QRat:
    """Reduced rational function; the denominator is monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        if den is None:
            den = num.context().constant(1)
        if not _reduced:
            if den.is_zero():
                raise ZeroDivisionError("zero denominator")
            if num.is_zero():
                den = den.context().constant(1)
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num = num / g
                    den = den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c, ctx: flint.fmpq_mpoly_ctx = DEFAULT) -> "QRat":
        return cls(ctx.constant(_coerce_scalar(c)), ctx.constant(1), _reduced=True)

    @classmethod
    def qpow(cls, k: int, ctx: flint.fmpq_mpoly_ctx = DEFAULT, coeff=1) -> "QRat":
        """``coeff * q^k`` for any integer k."""
        q = ctx.gens()[0]
        c = _coerce_scalar(coeff)
        if k >= 0:
            return cls(c * q**k, ctx.constant(1), _reduced=True)
        return cls(ctx.constant(c), q ** (-k), _reduced=True)

    @classmethod
    def gen(cls, name: str, ctx: flint.fmpq_mpoly_ctx) -> "QRat":
        i = ctx.names().index(name)
        return cls(ctx.gens()[i], ctx.constant(1), _reduced=True)

    @property
    def ctx(self) -> flint.fmpq_mpoly_ctx:
        return self.num.context()

    # arithmetic -------------------------------------------------------
    def _wrap(self, other) -> "QRat":
        if isinstance(other, QRat):
            if other.ctx is not self.ctx:
                raise ValueError("coefficients live in different fields")
            return other
        return QRat.const(other, self.ctx)

    def __add__(self, other) -> "QRat":
        o = self._wrap(other)
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return QRat(self.num + o.num, self.den)
        return QRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "QRat":
        return QRat(-self.num, self.den, _reduced=True)

    def __sub__(self, other) -> "QRat":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "QRat":
        return self._wrap(other) - self

    def __mul__(self, other) -> "QRat":
        o = self._wrap(other)
        if self.num.is_zero() or o.num.is_zero():
            return QRat(self.ctx.constant(0), self.ctx.constant(1), _reduced=True)
        return QRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QRat":
        o = self._wrap(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return QRat(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "QRat":
        return self._wrap(other) / self

    def __pow__(self, k: int) -> "QRat":
        if k >= 0:
            return QRat(self.num**k, self.den**k, _reduced=True) if self.den.is_one() else QRat(self.num**k, self.den**k)
        return (1 / self) ** (-k)

    def inverse(self) -> "QRat":
        return 1 / self

    def mul_qpow(self, k: int, sign: int = 1) -> "QRat":
        """``sign * q^k * self``."""
        if k == 0:
            return self if sign == 1 else -self
        return self * QRat.qpow(k, self.ctx, sign)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QRat):
            try:
                other = self._wrap(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    # substitutions ----------------------------------------------------
    def substitute_q(self, poly) -> "QRat":
        """Replace ``q`` by the polynomial ``poly`` (other variables fixed)."""
        ctx = self.ctx
        gens = list(ctx.gens())
        gens[0] = poly
        return QRat(self.num.compose(*gens), self.den.compose(*gens))

    def invert_q(self) -> "QRat":
        """Replace ``q`` by ``1/q``."""
        ctx = self.ctx
        q = ctx.gens()[0]
        n = self.num.degrees()[0]
        d = self.den.degrees()[0]
        N = max(n, d)
        # multiply numerator and denominator by q^N so both stay polynomial
        rn = _reverse_q(self.num, N)
        rd = _reverse_q(self.den, N)
        return QRat(rn, rd)

    def specialize(self, **values) -> "QRat":
        """Substitute numbers for named variables (e.g. ``Q=1``)."""
        ctx = self.ctx
        names = ctx.names()
        args = []
        for i, nm in enumerate(names):
            if nm in values:
                args.append(ctx.constant(_coerce_scalar(values[nm])))
            else:
                args.append(ctx.gens()[i])
        den = self.den.compose(*args)
        if den.is_zero():
            raise ZeroDivisionError(f"denominator vanishes at {values}")
        return QRat(self.num.compose(*args), den)

    def evaluate(self, value) -> Fraction:
        """Numeric value at ``q = value`` for a one-variable coefficient."""
        r = self.specialize(q=value)
        if not (r.num.is_constant() and r.den.is_constant()):
            raise ValueError("coefficient depends on further variables")
        v = r.num.leading_coefficient() if not r.num.is_zero() else flint.fmpq(0)
        w = r.den.leading_coefficient()
        return Fraction(int(v.p), int(v.q)) / Fraction(int(w.p), int(w.q))

    # text -------------------------------------------------------------
    def to_strings(self) -> tuple[str, str]:
        return _poly_to_str(self.num), _poly_to_str(self.den)

    @classmethod
    def from_strings(cls, num: str, den: str, ctx: flint.fmpq_mpoly_ctx = DEFAULT) -> "QRat":
        return cls(_poly_from_str(num, ctx), _poly_from_str(den, ctx))

    def __repr__(self) -> str:
        n, d = self.to_strings()
        return n if d == "1" else f"({n})/({d})"


def _reverse_q(p, N: int):
    ctx = p.context()
    out = {}
    for mon, c in p.to_dict().items():
        out[(N - mon[0],) + tuple(mon[1:])] = c
    return ctx.from_dict(out) if out else ctx.constant(0)


def _poly_to_str(p) -> str:
    ctx = p.context()
    names = ctx.names()
    items = sorted(p.to_dict().items())
    if not items:
        return "0"
    parts = []
    for mon, c in items:
        fac = [str(c)]
        for nm, e in zip(names, mon):
            if e == 1:
                fac.append(nm)
            elif e:
                fac.append(f"{nm}^{e}")
        parts.append("*".join(fac))
    return " + ".join(parts)


_TERM = re.compile(r"^\s*(-?\d+(?:/\d+)?)((?:\*[A-Za-z]\w*(?:\^\d+)?)*)\s*$")


def _poly_from_str(s: str, ctx: flint.fmpq_mpoly_ctx):
    names = ctx.names()
    out: dict[tuple[int, ...], flint.fmpq] = {}
    for term in s.split(" + "):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse polynomial term {term!r}")
        num, den = (m.group(1).split("/") + ["1"])[:2]
        mon = [0] * len(names)
        for fac in filter(None, m.group(2).split("*")):
            nm, _, e = fac.partition("^")
            mon[names.index(nm)] += int(e) if e else 1
        key = tuple(mon)
        out[key] = out.get(key, flint.fmpq(0)) + flint.fmpq(int(num), int(den))
    return ctx.from_dict(out)


# ----------------------------------------------------------------------
# power series


def exponents_upto(g: int, D: int, lo: int = 0) -> Iterator[Exp]:
    """All exponent vectors in Z_{>=0}^g with lo <= |v| <= D, degree-major."""
    for d in range(lo, D + 1):
        for combo in combinations_with_replacement(range(g), d):
            v = [0] * g
            for i in combo:
                v[i] += 1
            yield tuple(v)


class XSeries:
    """Truncated power series sum_v C_v X^v with |v| <= order."""

    __slots__ = ("g", "order", "ctx", "terms")

    def __init__(
        self,
        g: int,
        order: int,
        terms: Mapping[Exp, QRat] | None = None,
        ctx: flint.fmpq_mpoly_ctx = DEFAULT,
    ):
        self.g = g
        self.order = order
        self.ctx = ctx
        clean: dict[Exp, QRat] = {}
        for v, c in (terms or {}).items():
            v = tuple(v)
            if len(v) != g:
                raise ValueError(f"exponent {v} does not have {g} entries")
            if min(v, default=0) < 0:
                raise ValueError(f"negative exponent {v}")
            if sum(v) > order:
                continue
            if not isinstance(c, QRat):
                c = QRat.const(c, ctx)
            if not c.is_zero():
                clean[v] = c
        self.terms = dict(sorted(clean.items(), key=lambda kv: (sum(kv[0]), kv[0])))

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, g: int, order: int, ctx=DEFAULT) -> "XSeries":
        return cls(g, order, {}, ctx)

    @classmethod
    def one(cls, g: int, order: int, ctx=DEFAULT) -> "XSeries":
        return cls(g, order, {(0,) * g: QRat.const(1, ctx)}, ctx)

    @classmethod
    def monomial(cls, v: Sequence[int], order: int, coeff=1, ctx=DEFAULT) -> "XSeries":
        c = coeff if isinstance(coeff, QRat) else QRat.const(coeff, ctx)
        return cls(len(v), order, {tuple(v): c}, ctx)

    @classmethod
    def from_function(cls, g: int, order: int, f: Callable[[Exp], QRat], ctx=DEFAULT) -> "XSeries":
        return cls(g, order, {v: f(v) for v in exponents_upto(g, order)}, ctx)

    def _like(self, terms: Mapping[Exp, QRat], order: int | None = None) -> "XSeries":
        return XSeries(self.g, self.order if order is None else order, terms, self.ctx)

    # access -----------------------------------------------------------
    def coefficient(self, v: Sequence[int]) -> QRat:
        return self.terms.get(tuple(v), QRat.const(0, self.ctx))

    def constant_term(self) -> QRat:
        return self.coefficient((0,) * self.g)

    def items(self):
        return self.terms.items()

    def truncate(self, order: int) -> "XSeries":
        return self._like(self.terms, order)

    def map_coefficients(self, f: Callable[[Exp, QRat], QRat]) -> "XSeries":
        return self._like({v: f(v, c) for v, c in self.terms.items()})

    def _check(self, other: "XSeries") -> None:
        if self.g != other.g:
            raise ValueError("series have different numbers of variables")
        if self.ctx is not other.ctx:
            raise ValueError("series have different coefficient fields")

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "XSeries":
        if not isinstance(other, XSeries):
            return self + XSeries.one(self.g, self.order, self.ctx).scale(other)
        self._check(other)
        out = dict(self.terms)
        for v, c in other.terms.items():
            out[v] = out[v] + c if v in out else c
        return self._like(out, min(self.order, other.order))

    __radd__ = __add__

    def __neg__(self) -> "XSeries":
        return self._like({v: -c for v, c in self.terms.items()})

    def __sub__(self, other) -> "XSeries":
        return self + (-other)

    def __rsub__(self, other) -> "XSeries":
        return (-self) + other

    def scale(self, c) -> "XSeries":
        if not isinstance(c, QRat):
            c = QRat.const(c, self.ctx)
        return self._like({v: a * c for v, a in self.terms.items()})

    def __mul__(self, other) -> "XSeries":
        if not isinstance(other, XSeries):
            return self.scale(other)
        self._check(other)
        D = min(self.order, other.order)
        acc: dict[Exp, list] = {}
        B = list(other.terms.items())
        for va, ca in self.terms.items():
            da = sum(va)
            if da > D:
                break
            for vb, cb in B:
                if da + sum(vb) > D:
                    break
                v = tuple(x + y for x, y in zip(va, vb))
                acc.setdefault(v, []).append(ca * cb)
        return self._like({v: _qsum(cs, self.ctx) for v, cs in acc.items()}, D)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "XSeries":
        if k < 0:
            return self.inverse() ** (-k)
        out = XSeries.one(self.g, self.order, self.ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> "XSeries":
        """Multiplicative inverse; needs a nonzero constant term."""
        c0 = self.constant_term()
        if c0.is_zero():
            raise ZeroDivisionError("series with zero constant term is not a unit")
        inv0 = 1 / c0
        out: dict[Exp, QRat] = {(0,) * self.g: inv0}
        nz = [(v, c) for v, c in self.terms.items() if any(v)]
        for v in exponents_upto(self.g, self.order, 1):
            s = []
            for w, c in nz:
                r = tuple(a - b for a, b in zip(v, w))
                if min(r) >= 0 and r in out:
                    s.append(c * out[r])
            if s:
                val = -_qsum(s, self.ctx) * inv0
                if not val.is_zero():
                    out[v] = val
        return self._like(out)

    def __truediv__(self, other) -> "XSeries":
        if isinstance(other, XSeries):
            return self * other.inverse()
        if not isinstance(other, QRat):
            other = QRat.const(other, self.ctx)
        return self.scale(1 / other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, XSeries):
            return NotImplemented
        return self.g == other.g and self.terms == other.terms

    def equal_upto(self, other: "XSeries", order: int) -> bool:
        return self.truncate(order).terms == other.truncate(order).terms

    def first_difference(self, other: "XSeries") -> Exp | None:
        for v in exponents_upto(self.g, min(self.order, other.order)):
            if self.coefficient(v) != other.coefficient(v):
                return v
        return None

    def __repr__(self) -> str:
        if not self.terms:
            return f"0 + O(X^{self.order + 1})"
        parts = []
        for v, c in self.terms.items():
            mon = "*".join(f"X{i + 1}^{e}" if e > 1 else f"X{i + 1}" for i, e in enumerate(v) if e)
            parts.append(f"({c!r})" + (f"*{mon}" if mon else ""))
        return " + ".join(parts) + f" + O(X^{self.order + 1})"

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for v, c in self.terms.items():
            n, d = c.to_strings()
            terms.append({"exp": list(v), "num": n, "den": d})
        out = {"g": self.g, "order": self.order, "terms": terms}
        if self.ctx.names() != ("q",):
            out["vars"] = list(self.ctx.names())
        return out

    @classmethod
    def from_json(cls, data: Mapping | str) -> "XSeries":
        if isinstance(data, str):
            data = json.loads(data)
        ctx = field(tuple(data.get("vars", ["q"])))
        terms = {tuple(t["exp"]): QRat.from_strings(t["num"], t["den"], ctx) for t in data["terms"]}
        return cls(int(data["g"]), int(data["order"]), terms, ctx)


def _qsum(cs: list[QRat], ctx) -> QRat:
    """Sum of rational functions over a common denominator (one reduction)."""
    if len(cs) == 1:
        return cs[0]
    den = ctx.constant(1)
    for c in cs:
        if not c.den.is_one():
            g = den.gcd(c.den)
            den = den * (c.den / g)
    num = ctx.constant(0)
    for c in cs:
        num += c.num * (den / c.den)
    return QRat(num, den)


def series_arith(a: XSeries, b: XSeries | None, op: str) -> XSeries:
    """Dispatch ``add``, ``mul`` or ``invert_unit``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "invert_unit":
        return a.inverse()
    raise ValueError(f"unknown series operation {op!r}")


# ----------------------------------------------------------------------
# q-Pochhammer and dilogarithm series


def q_pochhammer(n: int, base: QRat | None = None, ctx=DEFAULT) -> QRat:
    """Finite product (base; base)_n = prod_{i=1}^n (1 - base^i); default base q^2."""
    if base is None:
        base = QRat.qpow(2, ctx)
    out = QRat.const(1, base.ctx)
    b = base
    for _ in range(n):
        out = out * (1 - b)
        b = b * base
    return out


def pochhammer_inf(c: QRat | int, v: Sequence[int], D: int, ctx=DEFAULT) -> XSeries:
    """(c X^v; q^2)_infinity as the k-sum of (-1)^k q^{k(k-1)} (cX^v)^k / (q^2)_k."""
    v = tuple(v)
    if not any(v):
        raise ValueError("constant-argument Pochhammer symbol is out of scope")
    if not isinstance(c, QRat):
        c = QRat.const(c, ctx)
    ctx = c.ctx
    terms = {}
    ck = QRat.const(1, ctx)
    poch = QRat.const(1, ctx)
    k = 0
    while k * sum(v) <= D:
        coeff = ck * QRat.qpow(k * (k - 1), ctx, (-1) ** k) / poch
        terms[tuple(k * x for x in v)] = coeff
        k += 1
        ck = ck * c
        poch = poch * (1 - QRat.qpow(2 * k, ctx))
    return XSeries(len(v), D, terms, ctx)


# ----------------------------------------------------------------------
# Adams operations and plethystic Exp / Log


def adams_substitute(F: XSeries, n: int, twist: bool = False) -> XSeries:
    """Substitute X_i -> X_i^n and q -> q^n (or q -> -(-q)^n when ``twist``)."""
    if n < 1:
        raise ValueError("Adams index must be positive")
    if n == 1:
        return F
    q = F.ctx.gens()[0]
    image = (-1) ** (n + 1) * q**n if twist else q**n
    terms = {}
    for v, c in F.terms.items():
        w = tuple(n * x for x in v)
        if sum(w) <= F.order:
            terms[w] = c.substitute_q(image)
    return F._like(terms)


def log_series(F: XSeries) -> XSeries:
    """log F for F with constant term 1."""
    if not F.constant_term().is_one():
        raise ValueError("log needs constant term 1")
    G = F - 1
    out = XSeries.zero(F.g, F.order, F.ctx)
    P = XSeries.one(F.g, F.order, F.ctx)
    for k in range(1, F.order + 1):
        P = P * G
        if not P.terms:
            break
        out = out + P.scale(QRat.const(Fraction((-1) ** (k + 1), k), F.ctx))
    return out


def exp_series(f: XSeries) -> XSeries:
    """exp f for f without constant term."""
    if not f.constant_term().is_zero():
        raise ValueError("exp needs zero constant term")
    out = XSeries.one(f.g, f.order, f.ctx)
    P = XSeries.one(f.g, f.order, f.ctx)
    fact = 1
    for k in range(1, f.order + 1):
        P = P * f
        fact *= k
        if not P.terms:
            break
        out = out + P.scale(QRat.const(Fraction(1, fact), f.ctx))
    return out


def mobius(n: int) -> int:
    res, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    return -res if m > 1 else res


def plethystic_exp(f: XSeries, twist: bool = True) -> XSeries:
    """Exp(f) = exp(sum_{n>=1} psi_n(f)/n)."""
    if not f.constant_term().is_zero():
        raise ValueError("Exp needs zero constant term")
    s = XSeries.zero(f.g, f.order, f.ctx)
    for n in range(1, f.order + 1):
        s = s + adams_substitute(f, n, twist).scale(QRat.const(Fraction(1, n), f.ctx))
    return exp_series(s)


def plethystic_log(F: XSeries, twist: bool = True) -> XSeries:
    """Inverse of :func:`plethystic_exp`: sum_n mu(n)/n psi_n(log F)."""
    if not F.constant_term().is_one():
        raise ValueError("plethystic log needs constant term 1")
    L = log_series(F)
    out = XSeries.zero(F.g, F.order, F.ctx)
    for n in range(1, F.order + 1):
        mu = mobius(n)
        if mu:
            out = out + adams_substitute(L, n, twist).scale(QRat.const(Fraction(mu, n), F.ctx))
    return out


# ----------------------------------------------------------------------
# Laurent polynomials with integer coefficients


class QLaurentPoly(Mapping[int, int]):
    """Finitely supported map from q-exponent to integer."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        self._c = {int(k): int(v) for k, v in sorted(items) if v}

    def __getitem__(self, k: int) -> int:
        return self._c.get(k, 0)

    def __iter__(self):
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Mapping):
            return self._c == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def in_minus_q(self) -> "QLaurentPoly":
        """Re-express in powers of s = -q."""
        return QLaurentPoly({k: v * (-1) ** (k % 2) for k, v in self._c.items()})

    def evaluate(self, x) -> Fraction:
        return sum((Fraction(x) ** k * v for k, v in self._c.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"QLaurentPoly({self._c})"


def reduce_to_laurent(r: QRat) -> QLaurentPoly | None:
    """Return r as an integral Laurent polynomial in q, or None if it is not one."""
    if len(r.ctx.names()) != 1:
        raise ValueError("Laurent reduction is defined for one-variable coefficients")
    dd = r.den.to_dict()
    if len(dd) != 1:
        return None
    ((shift,), c), = dd.items()
    out = {}
    for (e,), a in r.num.to_dict().items():
        a = a / c
        if a.q != 1:
            return None
        out[e - shift] = int(a.p)
    return QLaurentPoly(out)
