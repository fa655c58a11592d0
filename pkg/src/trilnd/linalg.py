"""Exact linear algebra over Q on sparse rows (dict column -> Fraction)."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Optional, Sequence

Row = dict


class Echelon:
    """Incremental row echelon form; rows are kept reduced on their pivots."""

    def __init__(self):
        self.rows: dict[Hashable, Row] = {}  # pivot column -> row with coefficient 1 there
        self.order: list[Hashable] = []

    def reduce(self, row: Mapping) -> Row:
        r = {k: Fraction(v) for k, v in row.items() if v}
        for piv in self.order:
            c = r.get(piv)
            if c:
                for k, v in self.rows[piv].items():
                    w = r.get(k, 0) - c * v
                    if w:
                        r[k] = w
                    else:
                        r.pop(k, None)
        return r

    def add(self, row: Mapping) -> bool:
        """Insert a row; returns False if it was already in the span."""
        r = self.reduce(row)
        if not r:
            return False
        piv = min(r, key=_sort_key)
        c = r[piv]
        r = {k: v / c for k, v in r.items()}
        for other in self.rows.values():
            d = other.get(piv)
            if d:
                for k, v in r.items():
                    w = other.get(k, 0) - d * v
                    if w:
                        other[k] = w
                    else:
                        other.pop(k, None)
        self.rows[piv] = r
        self.order.append(piv)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _sort_key(k):
    return (str(type(k)), k)


def rank(rows: Iterable[Mapping]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(columns: Sequence[Mapping]) -> list[list[Fraction]]:
    """Basis of ``{x : sum_j x_j * columns[j] = 0}``.

    Columns are sparse vectors (dict row-key -> value).
    """
    n = len(columns)
    keys = sorted({k for c in columns for k in c}, key=_sort_key)
    # Gauss-Jordan on the matrix whose rows are indexed by keys
    mat = [[Fraction(c.get(k, 0)) for c in columns] for k in keys]
    pivots: list[int] = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = 1 / mat[r][col]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        x = [Fraction(0)] * n
        x[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            x[pcol] = -mat[i][fcol]
        basis.append(x)
    return basis


def solve(columns: Sequence[Mapping], target: Mapping) -> Optional[list[Fraction]]:
    """Some ``x`` with ``sum_j x_j * columns[j] = target``, or ``None``."""
    aug = list(columns) + [{k: -Fraction(v) for k, v in target.items()}]
    for vec in nullspace(aug):
        if vec[-1]:
            return [v / vec[-1] for v in vec[:-1]]
    return None
