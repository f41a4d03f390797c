"""Wavefunctions of framed seeds.

Two independent routes are provided.  ``evaluate_path`` starts from the
necklace wavefunction 1 and applies the dilogarithm, framing and rescaling
operators along a path in the seed groupoid.  ``solve_face_relations`` solves
the face q-difference equations of a single seed degree by degree.  The
Ooguri-Vafa factorization turns a wavefunction into integer exponents of
quantum dilogarithms.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .qseries import (
    DEFAULT,
    QRat,
    XSeries,
    exponents_upto,
    field as coefficient_field,
    plethystic_log,
    reduce_to_laurent,
)
from .qtorus import OperatorPoly, TorusMonomial, apply_phi, framing_shift, phi_coefficient, rescale_sigma
from .seeds import (
    FramedSeed,
    FramingShift,
    Mutate,
    Rescale,
    SeedPath,
    standard_necklace_seed,
)

__all__ = [
    "InadmissiblePath",
    "SolveFailure",
    "OVTable",
    "evaluate_path",
    "run_path",
    "solve_face_relations",
    "solve_q_difference",
    "ov_factorize",
    "ov_reconstruct",
    "check_framing_preserves_integrality",
    "canoe_path",
    "canoe_seed",
    "canoe_wavefunction",
    "loop_path_g1",
    "aenv_operator",
]


class InadmissiblePath(ValueError):
    """A mutation step of a path is not admissible."""

    def __init__(self, index: int, step, monomial):
        super().__init__(f"step {index} ({step}) mutates along {monomial}, which is not admissible")
        self.index = index
        self.step = step


# ----------------------------------------------------------------------
# path evaluation


def run_path(path: SeedPath, D: int, start: FramedSeed | None = None, psi: XSeries | None = None, g: int | None = None):
    """Return (final seed, wavefunction) after following ``path`` from ``start``."""
    if start is None:
        if g is None:
            raise ValueError("give a start seed or a genus")
        start = standard_necklace_seed(g)
    seed = start
    if psi is None:
        psi = XSeries.one(seed.g, D)
    for i, step in enumerate(path):
        if isinstance(step, Mutate):
            if not seed.is_admissible(step.edge, step.sign):
                raise InadmissiblePath(i, step, seed.mutation_monomial(step.edge, step.sign))
            seed, dil = seed.mutate(step.edge, step.sign)
            psi = apply_phi(dil.monomial, -dil.sign, psi)
        else:
            seed, _ = seed.apply(step)
            if isinstance(step, FramingShift):
                psi = framing_shift(step.omega, psi)
            elif isinstance(step, Rescale):
                psi = rescale_sigma(step.d, psi)
    return seed, psi


def evaluate_path(start: FramedSeed | None, path: SeedPath, D: int, g: int | None = None) -> XSeries:
    """Wavefunction at the end of ``path``; the start seed carries wavefunction 1."""
    return run_path(path, D, start, g=g)[1]


# ----------------------------------------------------------------------
# canoe seeds


def _matrix(A, g: int) -> list[list[int]]:
    if A is None:
        return [[0] * g for _ in range(g)]
    A = [[int(x) for x in r] for r in A]
    if len(A) != g or any(len(r) != g for r in A):
        raise ValueError(f"framing matrix must be {g}x{g}")
    return A


def canoe_path(g: int, A=None, convention: str = "shift") -> SeedPath:
    """Path from the necklace to the canoe in framing A.

    ``shift``: wavefunction coefficient q^{v^T A v}/(q^2)_v.
    ``dual``: wavefunction coefficient q^{v^T v - v^T A v}/(q^2)_v, the
    convention that matches the DT series of the quiver A.
    ``bare``: the canoe reached by the strand mutations alone.
    """
    A = _matrix(A, g)
    path: SeedPath = [Mutate(f"s{k}", 1) for k in range(1, g + 1)]
    if convention == "bare":
        return path
    if convention == "shift":
        omega = [[A[i][j] - (i == j) for j in range(g)] for i in range(g)]
    elif convention == "dual":
        omega = [[-A[i][j] for j in range(g)] for i in range(g)]
    else:
        raise ValueError(f"unknown canoe convention {convention!r}")
    return path + [FramingShift(omega), Rescale((1,) * g)]


def canoe_seed(g: int, A=None, convention: str = "shift") -> FramedSeed:
    seed = standard_necklace_seed(g)
    for st in canoe_path(g, A, convention):
        seed, _ = seed.apply(st)
    return seed


def canoe_wavefunction(g: int, A=None, D: int = 6, convention: str = "shift") -> XSeries:
    return evaluate_path(None, canoe_path(g, A, convention), D, g=g)


def loop_path_g1() -> SeedPath:
    """Strand mutation, reframing by T_{-1} with the rescaling, then the mutation back."""
    return [Mutate("s1", 1), FramingShift([[-1]]), Rescale([1]), Mutate("a2", 1)]


# ----------------------------------------------------------------------
# direct solving


@dataclass
class SolveFailure:
    reason: str
    degree: int
    detail: str = ""

    def __bool__(self) -> bool:
        return False

    def __str__(self) -> str:
        return f"{self.reason} at degree {self.degree}" + (f": {self.detail}" if self.detail else "")


def _normalize(R: OperatorPoly) -> OperatorPoly:
    """Left-multiply by U^{-min m} so that every U-exponent is nonnegative."""
    shift = tuple(-x for x in R.min_m())
    if not any(shift):
        return R
    # U^s U^m V^n = U^{s+m} V^n, no q-factor
    terms = {(tuple(a + b for a, b in zip(m, shift)), n): c for (m, n), c in R.terms.items()}
    return OperatorPoly(R.g, terms, R.ctx)


def solve_q_difference(relations: Sequence[OperatorPoly], g: int, D: int, ctx=DEFAULT) -> XSeries | SolveFailure:
    """Unique F in 1 + m with R F = 0 (up to degree D) for every relation R.

    The coefficient of X^u in R F is sum_j a_j q^{2 n_j.(u - m_j)} c_{u - m_j}.
    That equation is imposed at the largest degree |u - m_j| among its terms,
    where it is linear in the unknowns of that degree.
    """
    rels = [_normalize(R) for R in relations]
    for R in rels:
        if R.g != g:
            raise ValueError("relation rank differs from g")
    one = QRat.const(1, ctx)
    coeff: dict[tuple[int, ...], QRat] = {(0,) * g: one}
    for k in range(0, D + 1):
        unknowns = list(exponents_upto(g, k, k)) if k else []
        index = {v: i for i, v in enumerate(unknowns)}
        pivots: dict[int, tuple[dict[int, QRat], QRat]] = {}
        seen = set()
        for ri, R in enumerate(rels):
            terms = list(R.terms.items())
            for v in exponents_upto(g, k, k):
                for (m, _), _c in terms:
                    u = tuple(a + b for a, b in zip(v, m))
                    if (ri, u) in seen:
                        continue
                    seen.add((ri, u))
                    row: dict[int, QRat] = {}
                    const = QRat.const(0, ctx)
                    level = -1
                    for (mj, nj), a in terms:
                        w = tuple(x - y for x, y in zip(u, mj))
                        if min(w) < 0:
                            continue
                        level = max(level, sum(w))
                    if level != k:
                        continue
                    for (mj, nj), a in terms:
                        w = tuple(x - y for x, y in zip(u, mj))
                        if min(w) < 0:
                            continue
                        val = a.mul_qpow(2 * sum(x * y for x, y in zip(nj, w)))
                        if sum(w) == k and k > 0:
                            i = index[w]
                            row[i] = row[i] + val if i in row else val
                        else:
                            const = const + val * coeff.get(w, QRat.const(0, ctx))
                    row = {i: c for i, c in row.items() if not c.is_zero()}
                    # reduce against existing pivots
                    for p in sorted(row):
                        if p in pivots and p in row:
                            f = row.pop(p)
                            prow, pconst = pivots[p]
                            for i, c in prow.items():
                                nv = row[i] - f * c if i in row else -f * c
                                if nv.is_zero():
                                    row.pop(i, None)
                                else:
                                    row[i] = nv
                            const = const - f * pconst
                    if not row:
                        if not const.is_zero():
                            return SolveFailure("inconsistent", k, f"relation {ri} at X^{u} leaves {const!r}")
                        continue
                    p = min(row)
                    inv = 1 / row[p]
                    prow = {i: c * inv for i, c in row.items() if i != p}
                    pconst = const * inv
                    # keep the pivot set fully reduced
                    for q_, (orow, oconst) in list(pivots.items()):
                        if p in orow:
                            f = orow.pop(p)
                            for i, c in prow.items():
                                nv = orow[i] - f * c if i in orow else -f * c
                                if nv.is_zero():
                                    orow.pop(i, None)
                                else:
                                    orow[i] = nv
                            pivots[q_] = (orow, oconst - f * pconst)
                    pivots[p] = (prow, pconst)
        if len(pivots) < len(unknowns):
            free = [unknowns[i] for i in range(len(unknowns)) if i not in pivots]
            return SolveFailure("underdetermined", k, f"free coefficients {free}")
        for p, (prow, pconst) in pivots.items():
            if prow:
                raise AssertionError("pivot rows should be fully reduced")
            val = -pconst
            if not val.is_zero():
                coeff[unknowns[p]] = val
    return XSeries(g, D, coeff, ctx)


def solve_face_relations(s: FramedSeed, D: int) -> XSeries | SolveFailure:
    return solve_q_difference(s.face_relations(), s.g, D)


def aenv_operator():
    """1 - U - V + Q U V over Q(q, Q)."""
    ctx = coefficient_field(("q", "Q"))
    one = QRat.const(1, ctx)
    Q = QRat.gen("Q", ctx)
    terms = {((0,), (0,)): one, ((1,), (0,)): -one, ((0,), (1,)): -one, ((1,), (1,)): Q}
    return OperatorPoly(1, terms, ctx), ctx


# ----------------------------------------------------------------------
# Ooguri-Vafa factorization


@dataclass
class OVTable:
    """Exponents n_{d,k} with F = prod Phi((-q)^k X^d)^{n_{d,k}} up to X-degree ``order``."""

    g: int
    order: int
    entries: dict[tuple[tuple[int, ...], int], int] = field(default_factory=dict)
    admissible: bool = True
    witness: tuple[tuple[int, ...], str] | None = None

    def __getitem__(self, key) -> int:
        d, k = key
        return self.entries.get((tuple(d), int(k)), 0)

    def support(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.entries, key=lambda t: (sum(t[0]), t[0], t[1]))

    def classical(self) -> dict[tuple[int, ...], int]:
        """sum over k of n_{d,k}."""
        out: dict[tuple[int, ...], int] = {}
        for (d, _), n in self.entries.items():
            out[d] = out.get(d, 0) + n
        return {d: n for d, n in out.items() if n}

    def rows(self) -> list[tuple[tuple[int, ...], int, int]]:
        return [(d, k, self.entries[(d, k)]) for d, k in self.support()]

    def to_json(self) -> dict:
        out = {
            "g": self.g,
            "order": self.order,
            "admissible": self.admissible,
            "rows": [{"d": list(d), "k": k, "n": n} for d, k, n in self.rows()],
        }
        if self.witness is not None:
            out["witness"] = {"d": list(self.witness[0]), "value": self.witness[1]}
        return out

    @classmethod
    def from_json(cls, data: Mapping | str) -> "OVTable":
        if isinstance(data, str):
            data = json.loads(data)
        entries = {(tuple(r["d"]), int(r["k"])): int(r["n"]) for r in data["rows"]}
        w = data.get("witness")
        witness = (tuple(w["d"]), w["value"]) if w else None
        return cls(int(data["g"]), int(data["order"]), entries, bool(data.get("admissible", True)), witness)

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["d", "k", "n"])
        for d, k, n in self.rows():
            wr.writerow([" ".join(map(str, d)), k, n])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, g: int, order: int) -> "OVTable":
        rd = csv.DictReader(io.StringIO(text))
        entries = {(tuple(int(x) for x in r["d"].split()), int(r["k"])): int(r["n"]) for r in rd}
        return cls(g, order, entries)


def ov_factorize(F: XSeries) -> OVTable:
    """Read off n_{d,k} from G = (1 - q^2) Log F = sum n_{d,k} (-q)^{k+1} X^d."""
    if not F.constant_term().is_one():
        raise ValueError("OV factorization needs constant term 1")
    L = plethystic_log(F)
    factor = 1 - QRat.qpow(2, F.ctx)
    table = OVTable(F.g, F.order)
    for d, c in L.terms.items():
        G = c * factor
        lp = reduce_to_laurent(G)
        if lp is None:
            table.admissible = False
            if table.witness is None:
                table.witness = (d, repr(G))
            continue
        for e, n in lp.in_minus_q().items():
            table.entries[(d, e - 1)] = n
    return table


def ov_reconstruct(table: OVTable, ctx=DEFAULT) -> XSeries:
    """Expand prod Phi((-q)^k X^d)^{n_{d,k}} directly from the dilogarithm series."""
    D = table.order
    out = XSeries.one(table.g, D, ctx)
    for (d, k), n in table.entries.items():
        if n == 0:
            continue
        sign = 1 if n > 0 else -1
        factor = {}
        j = 0
        while j * sum(d) <= D:
            arg = QRat.qpow(k * j, ctx, (-1) ** ((k * j) % 2))
            factor[tuple(j * x for x in d)] = phi_coefficient(j, sign, ctx) * arg
            j += 1
        out = out * (XSeries(table.g, D, factor, ctx) ** abs(n))
    return out


def check_framing_preserves_integrality(F: XSeries, omegas: Sequence) -> dict:
    """Factorize T_Omega F for each Omega and report the ones that fail."""
    results = []
    for om in omegas:
        t = ov_factorize(framing_shift(om, F))
        results.append({"omega": [list(r) for r in om], "admissible": t.admissible, "witness": t.witness})
    return {"ok": all(r["admissible"] for r in results), "results": results}
