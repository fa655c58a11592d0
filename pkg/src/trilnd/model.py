"""Defining data of a trinomial algebra and its validation."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union


class Kind(enum.Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"


@dataclass(frozen=True, order=True)
class T:
    """The variable ``T[i][j]`` (block ``i``, position ``j``, 1-based)."""

    i: int
    j: int

    def __str__(self) -> str:
        return f"T[{self.i}][{self.j}]"


@dataclass(frozen=True, order=True)
class S:
    """The free variable ``S[k]`` (1-based)."""

    k: int

    def __str__(self) -> str:
        return f"S[{self.k}]"


GeneratorId = Union[T, S]


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    """One failed hypothesis of the construction."""

    code: str  # DuplicateScalar | DependentColumns | BadExponent | BadShape
    indices: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        args = ", ".join(map(str, self.indices))
        return f"{self.code}({args}): {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def codes(self) -> list[str]:
        return [v.code for v in self.violations]

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(str(v) for v in self.violations)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ModelError(f"refusing inexact scalar {x!r}")
    return Fraction(x)


def det2(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """Determinant of the 2x2 matrix with columns ``u`` and ``v``."""
    return u[0] * v[1] - v[0] * u[1]


@dataclass(frozen=True)
class TrinomialData:
    """Defining data ``(A, P0)`` of a trinomial algebra ``R(A, P0)``.

    ``blocks[t]`` is the exponent tuple of block ``iota + t``.  For type 1,
    ``a`` holds the scalars ``a_1..a_r``; for type 2 it holds the columns
    ``a_0..a_r`` as pairs.
    """

    kind: Kind
    r: int
    m: int
    blocks: tuple[tuple[int, ...], ...]
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(int(e) for e in b) for b in self.blocks))
        if self.kind is Kind.TYPE1:
            a = tuple(_frac(x) for x in self.a)
        else:
            a = tuple((_frac(c[0]), _frac(c[1])) for c in self.a)
        object.__setattr__(self, "a", a)

    @classmethod
    def type1(cls, blocks, a, m: int = 0) -> "TrinomialData":
        return cls(Kind.TYPE1, len(blocks), m, tuple(blocks), tuple(a))

    @classmethod
    def type2(cls, blocks, a_rows=None, *, columns=None, m: int = 0) -> "TrinomialData":
        """Build type-2 data from the 2 x (r+1) matrix rows (or its columns)."""
        if columns is None:
            if a_rows is None or len(a_rows) != 2:
                raise ModelError("type-2 matrix A must have exactly two rows")
            columns = list(zip(a_rows[0], a_rows[1]))
        return cls(Kind.TYPE2, len(blocks) - 1, m, tuple(blocks), tuple(columns))

    @property
    def iota(self) -> int:
        return 1 if self.kind is Kind.TYPE1 else 0

    @property
    def block_range(self) -> range:
        return range(self.iota, self.r + 1)

    @property
    def relation_range(self) -> range:
        """Indices ``I`` of the defining polynomials."""
        if self.kind is Kind.TYPE1:
            return range(1, self.r)
        return range(0, self.r - 1)

    def exponents(self, i: int) -> tuple[int, ...]:
        return self.blocks[i - self.iota]

    def n_i(self, i: int) -> int:
        return len(self.exponents(i))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def generators(self) -> tuple[GeneratorId, ...]:
        """All generators in the fixed order T[iota][1], ..., T[r][n_r], S[1], ..., S[m]."""
        gens: list[GeneratorId] = [T(i, j) for i in self.block_range for j in range(1, self.n_i(i) + 1)]
        gens.extend(S(k) for k in range(1, self.m + 1))
        return tuple(gens)

    def column(self, i: int) -> tuple[Fraction, Fraction]:
        """Column ``a_i`` of the type-2 matrix."""
        return self.a[i]

    def scalar(self, i: int) -> Fraction:
        """Scalar ``a_i`` of type-1 data (1-based)."""
        return self.a[i - 1]

    def non_unit_blocks(self) -> tuple[int, ...]:
        """Blocks with no exponent equal to 1."""
        return tuple(i for i in self.block_range if 1 not in self.exponents(i))

    def p0(self) -> list[list[int]]:
        """The r x (n+m) integer matrix P0."""
        n, m = self.n, self.m
        offsets = {}
        pos = 0
        for i in self.block_range:
            offsets[i] = pos
            pos += self.n_i(i)
        rows = []
        for i in range(1, self.r + 1):
            row = [0] * (n + m)
            if self.kind is Kind.TYPE2:
                for j, e in enumerate(self.exponents(0)):
                    row[offsets[0] + j] = -e
            for j, e in enumerate(self.exponents(i)):
                row[offsets[i] + j] = e
            rows.append(row)
        return rows


def validate(data: TrinomialData) -> ValidationReport:
    """Check the hypotheses of the construction; list every violation."""
    out: list[Violation] = []
    expected_blocks = data.r if data.kind is Kind.TYPE1 else data.r + 1
    if data.r < 2:
        out.append(Violation("BadShape", (data.r,), "at least one defining equation needs r >= 2"))
    if len(data.blocks) != expected_blocks:
        out.append(Violation("BadShape", (len(data.blocks),), f"expected {expected_blocks} blocks"))
    if data.m < 0:
        out.append(Violation("BadShape", (data.m,), "m must be non-negative"))
    for t, block in enumerate(data.blocks):
        i = t + data.iota
        if not block:
            out.append(Violation("BadShape", (i,), f"block {i} is empty"))
        for j, e in enumerate(block, start=1):
            if e < 1:
                out.append(Violation("BadExponent", (i, j), f"l[{i}][{j}] = {e} < 1"))
    if data.kind is Kind.TYPE1:
        if len(data.a) != data.r:
            out.append(Violation("BadShape", (len(data.a),), f"expected {data.r} scalars"))
        else:
            for i in range(1, data.r + 1):
                for k in range(i + 1, data.r + 1):
                    if data.scalar(i) == data.scalar(k):
                        out.append(Violation("DuplicateScalar", (i, k), f"a_{i} = a_{k} = {data.scalar(i)}"))
    else:
        if len(data.a) != data.r + 1:
            out.append(Violation("BadShape", (len(data.a),), f"expected {data.r + 1} columns"))
        else:
            for i in range(data.r + 1):
                for k in range(i + 1, data.r + 1):
                    if det2(data.column(i), data.column(k)) == 0:
                        out.append(Violation("DependentColumns", (i, k), f"columns a_{i}, a_{k} are proportional"))
    return ValidationReport(tuple(out))


def require_valid(data: TrinomialData) -> TrinomialData:
    report = validate(data)
    if not report.ok:
        raise ModelError(str(report))
    return data


def defining_polynomials(data: TrinomialData):
    """The polynomials g_i, i in I, as elements of the free polynomial ring."""
    from .polyring import ring_for

    return ring_for(data).defining_polynomials()
