"""Symmetric quivers: DT series, integer DT invariants, the classical
Y-system and disk invariants.

The DT series is written in t^{1/2}; internally t^{1/2} = -q, so it lives in
the same coefficient field as the wavefunctions and a framed canoe
wavefunction can be compared with it coefficient by coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .intlin import IntMatrix
from .qseries import DEFAULT, QRat, XSeries, exponents_upto, plethystic_log, q_pochhammer, reduce_to_laurent
from .wavefn import OVTable, canoe_wavefunction

__all__ = [
    "SymQuiver",
    "dt_series",
    "dt_series_matrix",
    "coefficient_change",
    "dt_integer_invariants",
    "classical_y_system",
    "disk_invariants",
    "verify_framing_duality",
]


def _as_rows(A) -> list[list[int]]:
    rows = A.tolist() if isinstance(A, IntMatrix) else [[int(x) for x in r] for r in A]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
        raise ValueError("matrix must be symmetric")
    return rows


@dataclass(frozen=True)
class SymQuiver:
    """Symmetric quiver given by its adjacency matrix."""

    A: tuple[tuple[int, ...], ...]

    def __init__(self, A):
        rows = _as_rows(A)
        if any(x < 0 for r in rows for x in r):
            raise ValueError("quiver adjacency entries must be nonnegative")
        object.__setattr__(self, "A", tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.A)

    def chi(self, v: Sequence[int], w: Sequence[int]) -> int:
        """Euler form v^T (I - A) w."""
        return sum(v[i] * ((i == j) - self.A[i][j]) * w[j] for i in range(self.n) for j in range(self.n))


def _chi(A: list[list[int]], v) -> int:
    n = len(A)
    return sum(v[i] * ((i == j) - A[i][j]) * v[j] for i in range(n) for j in range(n))


def dt_series_matrix(A, D: int, ctx=DEFAULT) -> XSeries:
    """sum_v (-t^{1/2})^{chi(v,v)} / (t)_v X^v for any symmetric integer A, with t^{1/2} = -q."""
    rows = _as_rows(A)
    n = len(rows)

    def coeff(v):
        c = QRat.qpow(_chi(rows, v), ctx)
        for x in v:
            c = c / q_pochhammer(x, ctx=ctx)
        return c

    return XSeries.from_function(n, D, coeff, ctx)


def dt_series(Q: SymQuiver, D: int) -> XSeries:
    return dt_series_matrix(Q.A, D)


def coefficient_change(F: XSeries) -> XSeries:
    """F(t^{-1/2}, t^{-1/2} X): invert q, then scale X^v by (-q^{-1})^{|v|}."""
    return F.map_coefficients(lambda v, c: c.invert_q().mul_qpow(-sum(v), (-1) ** (sum(v) % 2)))


def dt_integer_invariants(Q: SymQuiver | Sequence[Sequence[int]], D: int) -> OVTable:
    """N_{v,k} with (t - 1) Log DT = sum N_{v,k} t^{k/2} X^v; k indexes powers of t^{1/2}."""
    A = Q.A if isinstance(Q, SymQuiver) else Q
    F = dt_series_matrix(A, D)
    L = plethystic_log(F)
    factor = QRat.qpow(2, F.ctx) - 1
    table = OVTable(F.g, D)
    for v, c in L.terms.items():
        lp = reduce_to_laurent(c * factor)
        if lp is None:
            table.admissible = False
            if table.witness is None:
                table.witness = (v, repr(c * factor))
            continue
        for k, N in lp.in_minus_q().items():
            table.entries[(v, k)] = N
    return table


# ----------------------------------------------------------------------
# classical limit


def classical_y_system(A, D: int) -> list[XSeries]:
    """Solve X_i (-Y_i)^{1-a_ii} prod_{j != i} Y_j^{-a_ij} + Y_i = 1 with Y_i in 1 + m."""
    rows = _as_rows(A)
    g = len(rows)
    ys = [XSeries.one(g, D) for _ in range(g)]
    X = [XSeries.monomial(tuple(int(i == j) for j in range(g)), D) for i in range(g)]
    # each sweep fixes one more degree
    for _ in range(D + 1):
        new = []
        for i in range(g):
            e = 1 - rows[i][i]
            term = X[i] * (ys[i] ** e).scale((-1) ** (e % 2))
            for j in range(g):
                if j != i and rows[i][j]:
                    term = term * ys[j] ** (-rows[i][j])
            new.append(1 - term)
        ys = new
    for i in range(g):
        e = 1 - rows[i][i]
        res = X[i] * (ys[i] ** e).scale((-1) ** (e % 2))
        for j in range(g):
            if j != i and rows[i][j]:
                res = res * ys[j] ** (-rows[i][j])
        if (res + ys[i] - 1).terms:
            raise ArithmeticError("Y-system iteration did not converge to the truncation order")
    return ys


def _log_rational(F: XSeries) -> dict[tuple[int, ...], Fraction]:
    from .qseries import log_series

    return {v: c.evaluate(1) for v, c in log_series(F).terms.items()}


def disk_invariants(A, D: int) -> dict[tuple[int, ...], int]:
    """Integers n_d with Y_i = prod_d (1 - X^d)^{-d_i n_d}, for 0 < |d| <= D.

    log Y_i has X^v coefficient sum_{k | v} (v_i / k^2) n_{v/k}; this is
    inverted degree by degree.  Every index i with v_i > 0 has to give the same
    integer.
    """
    ys = classical_y_system(A, D)
    g = len(ys)
    logs = [_log_rational(Y) for Y in ys]
    n: dict[tuple[int, ...], int] = {}
    for v in exponents_upto(g, D, 1):
        val = None
        for i in range(g):
            if v[i] == 0:
                continue
            rest = logs[i].get(v, Fraction(0))
            for k in range(2, max(v) + 1):
                if all(x % k == 0 for x in v):
                    w = tuple(x // k for x in v)
                    rest -= Fraction(v[i], k * k) * n.get(w, 0)
            cand = rest / v[i]
            if cand.denominator != 1:
                raise ArithmeticError(f"non-integral disk invariant at {v}: {cand}")
            if val is not None and cand != val:
                raise ArithmeticError(f"inconsistent disk invariant at {v}: {val} vs {cand}")
            val = cand
        if val:
            n[v] = int(val)
    return n


def verify_framing_duality(A, g: int, D: int) -> dict:
    """Compare the canoe wavefunction in framing A with DT_A(-q, X)."""
    rows = _as_rows(A)
    if len(rows) != g:
        raise ValueError(f"framing matrix must be {g}x{g}")
    SymQuiver(rows)
    psi = canoe_wavefunction(g, rows, D, convention="dual")
    dt = dt_series_matrix(rows, D)
    diff = psi.first_difference(dt)
    out = {"A": rows, "g": g, "order": D, "ok": diff is None}
    if diff is not None:
        out["first_difference"] = {"exp": list(diff), "wavefunction": repr(psi.coefficient(diff)), "dt": repr(dt.coefficient(diff))}
    return out
