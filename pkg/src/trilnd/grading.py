"""The finest grading group K0 = Z^(n+m) / im(P0^T) and degrees in it."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

from .errors import IndexOutOfRange
from .model import GeneratorId, Kind, S, T, TrinomialData
from .snf import Pivoting, smith_normal_form, transpose


class InternalInconsistency(RuntimeError):
    """A computed invariant that must hold does not; always a bug."""


class Incompatible(ValueError):
    def __init__(self, index: int):
        super().__init__(f"g_{index} is not homogeneous under the given assignment")
        self.index = index


@dataclass(frozen=True)
class GroupElement:
    """An element of ``Z^free_rank + Z/d_1 + ... + Z/d_s`` in canonical form."""

    free: tuple[int, ...]
    torsion: tuple[int, ...]
    moduli: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(t % d for t, d in zip(self.torsion, self.moduli)))

    def _check(self, other: "GroupElement"):
        if self.moduli != other.moduli or len(self.free) != len(other.free):
            raise ValueError("elements of different groups")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        return GroupElement(tuple(a + b for a, b in zip(self.free, other.free)),
                            tuple(a + b for a, b in zip(self.torsion, other.torsion)), self.moduli)

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-a for a in self.free), tuple(-a for a in self.torsion), self.moduli)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, n: int) -> "GroupElement":
        return GroupElement(tuple(n * a for a in self.free), tuple(n * a for a in self.torsion), self.moduli)

    def is_zero(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    def __str__(self) -> str:
        parts = [str(a) for a in self.free]
        parts += [f"[{t} mod {d}]" for t, d in zip(self.torsion, self.moduli)]
        return "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class GradingHomomorphism:
    """A homomorphism K0 -> Z^q, given by its matrix on the free coordinates."""

    matrix: tuple[tuple[int, ...], ...]

    def __call__(self, v: GroupElement) -> tuple[int, ...]:
        return tuple(sum(a * x for a, x in zip(row, v.free)) for row in self.matrix)


class GradingGroup:
    """K0 together with the degree map on generators.

    Coordinates come from the Smith form ``U @ P0^T @ V = D``: a vector
    ``x`` maps to ``U @ x``; entries with invariant factor 1 are dropped,
    entries with factor ``d > 1`` are read mod ``d``, and entries past the
    rank are free.
    """

    def __init__(self, data: TrinomialData, pivoting: Pivoting = "smallest"):
        self.data = data
        self.generators = data.generators
        self.index = {g: k for k, g in enumerate(self.generators)}
        N = len(self.generators)
        self._N = N
        snf = smith_normal_form(transpose(data.p0()), pivoting, ncols=data.r)
        self.snf = snf
        factors = snf.invariant_factors
        rank = len(factors)
        self.invariant_factors: tuple[int, ...] = tuple(factors)
        self.torsion: tuple[int, ...] = tuple(d for d in factors if d > 1)
        self.free_rank = N - rank
        self._torsion_rows = [snf.U[t] for t, d in enumerate(factors) if d > 1]
        self._torsion_slots = [t for t, d in enumerate(factors) if d > 1]
        self._free_rows = snf.U[rank:]
        self._rank = rank
        # e^k is the S_k-row of U^{-1}; it vanishes on all non-free coordinates
        self.s_section: tuple[tuple[int, ...], ...] = tuple(
            tuple(snf.U_inv[self.index[S(k)]][rank:]) for k in range(1, data.m + 1))
        for k in range(1, data.m + 1):
            row = snf.U_inv[self.index[S(k)]]
            if any(row[:rank]):
                raise InternalInconsistency(f"e^{k} does not vanish on torsion coordinates")

    @property
    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.free_rank, (0,) * len(self.torsion), self.torsion)

    def element(self, vec: Sequence[int]) -> GroupElement:
        """The class Q(vec) of an integer vector indexed by generators."""
        free = tuple(sum(a * x for a, x in zip(row, vec) if x) for row in self._free_rows)
        tors = tuple(sum(a * x for a, x in zip(row, vec) if x) for row in self._torsion_rows)
        return GroupElement(free, tors, self.torsion)

    def lift(self, v: GroupElement) -> list[int]:
        """Some integer vector whose class is ``v``."""
        y = [0] * self._N
        for slot, t in zip(self._torsion_slots, v.torsion):
            y[slot] = t
        for k, f in enumerate(v.free):
            y[self._rank + k] = f
        return [sum(a * b for a, b in zip(row, y)) for row in self.snf.U_inv]

    @cached_property
    def generator_degrees(self) -> dict[GeneratorId, GroupElement]:
        out = {}
        for g, k in self.index.items():
            vec = [0] * self._N
            vec[k] = 1
            out[g] = self.element(vec)
        return out

    def degree(self, gen: GeneratorId) -> GroupElement:
        return self.generator_degrees[gen]

    def degree_of_monomial(self, exponents: Sequence[int]) -> GroupElement:
        if len(exponents) != self._N:
            raise ValueError("exponent vector has the wrong length")
        return self.element(exponents)

    def block_degree(self, i: int) -> GroupElement:
        """Degree of the monomial T_i^{l_i}."""
        vec = [0] * self._N
        for j, e in enumerate(self.data.exponents(i), start=1):
            vec[self.index[T(i, j)]] = e
        return self.element(vec)

    @cached_property
    def mu(self) -> GroupElement:
        degs = {i: self.block_degree(i) for i in self.data.block_range}
        first = degs[self.data.iota]
        for i, d in degs.items():
            if d != first:
                raise InternalInconsistency(f"deg T_{i}^l_{i} = {d} differs from {first}")
        return first

    def e_coeff(self, k: int, v: GroupElement) -> int:
        """Coefficient of e_k = deg S_k in ``v``."""
        if not 1 <= k <= self.data.m:
            raise IndexOutOfRange(f"S[{k}] does not exist (m = {self.data.m})")
        return sum(a * x for a, x in zip(self.s_section[k - 1], v.free))

    def elementary_divisors(self) -> list[int]:
        """Prime-power decomposition of the torsion part."""
        from sympy import factorint

        out = []
        for d in self.torsion:
            out.extend(p ** e for p, e in factorint(d).items())
        return sorted(out)

    def describe(self) -> str:
        """E.g. ``K₀ ≅ ℤ² ⊕ ℤ/2``."""
        sup = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
        parts = []
        if self.free_rank == 1:
            parts.append("ℤ")
        elif self.free_rank > 1:
            parts.append("ℤ" + str(self.free_rank).translate(sup))
        parts += [f"ℤ/{d}" for d in self.torsion]
        return "K₀ ≅ " + (" ⊕ ".join(parts) if parts else "0")

    def factor_grading(self, assignment: Mapping[GeneratorId, Sequence[int]]) -> GradingHomomorphism:
        """Factor a grading by Z^q through K0.

        Raises ``Incompatible(i)`` for the first g_i that is not homogeneous
        under ``assignment``.
        """
        data = self.data
        missing = [g for g in self.generators if g not in assignment]
        if missing:
            raise ValueError(f"assignment misses {', '.join(map(str, missing))}")
        q = len(next(iter(assignment.values()), ()))
        W = [[int(assignment[g][row]) for g in self.generators] for row in range(q)]

        def wdeg(i):
            return tuple(sum(W[row][self.index[T(i, j)]] * e
                             for j, e in enumerate(data.exponents(i), start=1)) for row in range(q))

        zero = (0,) * q
        for i in data.relation_range:
            if data.kind is Kind.TYPE1:
                degs = {wdeg(i), wdeg(i + 1), zero}
            else:
                degs = {wdeg(i), wdeg(i + 1), wdeg(i + 2)}
            if len(degs) > 1:
                raise Incompatible(i)
        WU = [[sum(W[row][k] * self.snf.U_inv[k][c] for k in range(self._N)) for c in range(self._N)]
              for row in range(q)]
        if any(WU[row][c] for row in range(q) for c in range(self._rank)):
            raise InternalInconsistency("compatible assignment does not kill im(P0^T)")
        return GradingHomomorphism(tuple(tuple(r[self._rank:]) for r in WU))


@lru_cache(maxsize=256)
def build_grading(data: TrinomialData) -> GradingGroup:
    return GradingGroup(data)


def degree_of_monomial(g: GradingGroup, exponents: Sequence[int]) -> GroupElement:
    return g.degree_of_monomial(exponents)


def mu(g: GradingGroup, data: TrinomialData | None = None) -> GroupElement:
    if data is not None and data != g.data:
        raise ValueError("grading belongs to different data")
    return g.mu


def e_coeff(g: GradingGroup, k: int, v: GroupElement) -> int:
    return g.e_coeff(k, v)


def factor_grading(g: GradingGroup, assignment: Mapping[GeneratorId, Sequence[int]]) -> GradingHomomorphism:
    return g.factor_grading(assignment)
