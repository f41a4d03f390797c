"""Exact integer linear algebra.

Smith normal form, saturated kernels, lattice quotients and a couple of
skew-form helpers.  Everything works on Python ints, so there is no overflow
no matter how large the intermediate entries get.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "LatticePresentation",
    "smith_normal_form",
    "hermite_rows",
    "kernel_basis",
    "rank",
    "quotient_rank_and_torsion",
    "quotient_coordinates",
    "is_isotropic",
    "unimodular_inverse",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major."""

    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("entry count does not match rows x cols")

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        oc = other.T.data
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in oc) for r in self.data),
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def is_antisymmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.data[i][j] == -self.data[j][i] for i in range(self.rows) for j in range(self.cols)
        )

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.data[i][j] == self.data[j][i] for i in range(self.rows) for j in range(self.cols)
        )


@dataclass(frozen=True)
class LatticePresentation:
    """Z^ambient_rank modulo the row span of ``relations``."""

    ambient_rank: int
    relations: IntMatrix

    def __post_init__(self) -> None:
        if self.relations.rows and self.relations.cols != self.ambient_rank:
            raise ValueError("relation width must equal ambient rank")


def _as_lists(M: IntMatrix | Sequence[Sequence[int]]) -> tuple[list[list[int]], int, int]:
    if isinstance(M, IntMatrix):
        return M.tolist(), M.rows, M.cols
    rows = [list(map(int, r)) for r in M]
    return rows, len(rows), (len(rows[0]) if rows else 0)


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D`` in Smith normal form.

    Pivots are the smallest nonzero absolute value in the remaining block,
    ties broken by (row, col), so the factors are reproducible.
    """
    A, m, n = _as_lists(M)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(src: int, dst: int, k: int) -> None:  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src: int, dst: int, k: int) -> None:
        for r in A:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                a = A[i][j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        dirty = True
            if not dirty:
                # block is cleared; enforce divisibility of the rest
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                add_row(bad[0], t, 1)
                continue
            # move the new smallest entry of row/col t into the pivot slot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, i, j = min(cand)
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return IntMatrix.of(U, m), IntMatrix.of(A, n), IntMatrix.of(V, n)


def rank(M: IntMatrix) -> int:
    _, D, _ = smith_normal_form(M)
    return sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])


def hermite_rows(rows: Sequence[Sequence[int]], width: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Pivots are positive and entries above each pivot are reduced into
    ``[0, pivot)``.  Zero rows are dropped.
    """
    A = [list(map(int, r)) for r in rows]
    if width is None:
        width = len(A[0]) if A else 0
    out: list[list[int]] = []
    col = 0
    while A and col < width:
        nz = [r for r in A if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                k = r[col] // piv[col]
                r2 = [a - k * b for a, b in zip(r, piv)]
                if r2[col]:
                    nxt.append(r2)
                else:
                    A.append(r2)
            A = [r for r in A if r[col] == 0]
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        A = [r for r in A if r[col] == 0 and any(r)]
        out.append(piv)
        col += 1
    for k, r in enumerate(out):
        c = next(i for i, a in enumerate(r) if a)
        for j in range(k):
            q = out[j][c] // r[c]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], r)]
    return out


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (raises if not unimodular)."""
    n = M.rows
    if M.cols != n:
        raise ValueError("square matrix required")
    A = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M.data)]
    H = hermite_rows(A, 2 * n)
    if len(H) != n or any(H[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.of([r[n:] for r in H], n)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Saturated basis of {x : M x = 0}, Hermite-reduced, one vector per row."""
    _, D, V = smith_normal_form(M)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    cols = [[V[i, j] for i in range(V.rows)] for j in range(r, M.cols)]
    return IntMatrix.of(hermite_rows(cols, M.cols), M.cols)


def quotient_rank_and_torsion(P: LatticePresentation) -> tuple[int, list[int]]:
    """Free rank and torsion coefficients of Z^n / span(relations)."""
    if P.relations.rows == 0:
        return P.ambient_rank, []
    _, D, _ = smith_normal_form(P.relations)
    diag = [D[i, i] for i in range(min(D.rows, D.cols))]
    r = sum(1 for d in diag if d)
    return P.ambient_rank - r, [d for d in diag if d > 1]


def quotient_coordinates(P: LatticePresentation) -> tuple[IntMatrix, IntMatrix]:
    """Coordinates on the free part of a quotient lattice.

    Returns ``(proj, lift)``: ``proj`` (k x n) sends a vector of Z^n to the
    coordinates of its class modulo torsion, ``lift`` (n x k) has columns
    representing the corresponding basis classes, so ``proj @ lift = I``.
    """
    n = P.ambient_rank
    if P.relations.rows == 0:
        return IntMatrix.identity(n), IntMatrix.identity(n)
    _, D, V = smith_normal_form(P.relations)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    Vinv = unimodular_inverse(V)
    # row vectors: x lies in the relation span iff (x V)_i is a multiple of d_i
    proj = IntMatrix.of([[V[i, j] for i in range(n)] for j in range(r, n)], n)
    lift = IntMatrix.of([[Vinv[j, i] for j in range(r, n)] for i in range(n)], n - r)
    return proj, lift


def is_isotropic(vectors: IntMatrix, skew: IntMatrix) -> bool:
    """True iff v^T S w == 0 for every pair of rows v, w."""
    if skew.rows != skew.cols or (vectors.rows and vectors.cols != skew.rows):
        raise ValueError("dimension mismatch between vectors and skew form")
    for i in range(vectors.rows):
        Sv = skew.T.apply(vectors.data[i])
        for j in range(i + 1, vectors.rows):
            if sum(a * b for a, b in zip(Sv, vectors.data[j])):
                return False
    return True


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
