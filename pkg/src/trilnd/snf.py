"""Smith normal form of integer matrices with unimodular transforms.

Everything is exact Python ``int``.  Matrices are lists of row lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

Matrix = list[list[int]]
Pivoting = Literal["smallest", "first"]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def transpose(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


@dataclass
class SmithForm:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal.

    ``U_inv`` is the exact inverse of ``U``; it is what maps quotient
    coordinates back to lifts in the source lattice.
    """

    U: Matrix
    D: Matrix
    V: Matrix
    U_inv: Matrix

    @property
    def diagonal(self) -> list[int]:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d != 0]


def smith_normal_form(M: Sequence[Sequence[int]], pivoting: Pivoting = "smallest",
                      ncols: int | None = None) -> SmithForm:
    """Compute the Smith normal form of ``M``.

    ``pivoting="smallest"`` picks the nonzero entry of least absolute value
    in the remaining submatrix; ``"first"`` takes the first nonzero entry in
    row-major order.  The invariant factors do not depend on the choice.
    ``ncols`` is only needed for matrices with zero rows.
    """
    D = [[int(x) for x in row] for row in M]
    R = len(D)
    C = len(D[0]) if R else (ncols or 0)
    U = identity(R)
    U_inv = identity(R)
    V = identity(C)

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            for row in U_inv:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        if i != j:
            for mat in (D, V):
                for row in mat:
                    row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            for mat in (D, U):
                s, d = mat[src], mat[dst]
                for k in range(len(d)):
                    d[k] += q * s[k]
            for row in U_inv:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        if q:
            for mat in (D, V):
                for row in mat:
                    row[dst] += q * row[src]

    for t in range(min(R, C)):
        entries = [(i, j) for i in range(t, R) for j in range(t, C) if D[i][j]]
        if not entries:
            break
        if pivoting == "smallest":
            pi, pj = min(entries, key=lambda ij: (abs(D[ij[0]][ij[1]]), ij))
        else:
            pi, pj = entries[0]
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = D[t][t]
            for i in range(t + 1, R):
                add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, C):
                add_col(j, t, -(D[t][j] // p))
            rest = [(i, t) for i in range(t + 1, R) if D[i][t]] + [(t, j) for j in range(t + 1, C) if D[t][j]]
            if rest:
                # remainders are strictly smaller than the pivot; promote the least one
                i, j = min(rest, key=lambda ij: abs(D[ij[0]][ij[1]]))
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, R) for j in range(t + 1, C) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
            for row in U_inv:
                row[t] = -row[t]
    return SmithForm(U, D, V, U_inv)
