"""Elementary derivation templates and the enumeration of their families.

Four templates exist:

* ``DS(p)``: the partial derivative in ``S_p``;
* ``DeltaC(C)`` (type 1): ``T_{i c_i} -> prod_{k != i} d(T_k^{l_k})/d(T_{k c_k})``;
* ``DeltaCBeta21(C, beta)`` (type 2, no zero in ``beta``):
  ``T_{i c_i} -> beta_i prod_{k != i} d(T_k^{l_k})/d(T_{k c_k})``;
* ``DeltaCBeta22(C, beta, i0)`` (type 2, ``beta_{i0} = 0``): as above with
  block ``i0`` left out of the product.

``beta`` always lies in the row space of ``A``.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence

from .derivation import Derivation
from .errors import IndexOutOfRange
from .grading import GradingGroup, GroupElement
from .model import Kind, S, T, TrinomialData, det2
from .polyring import PolyRing, ring_for


class FamilyKind(enum.Enum):
    DS = "DS"
    DELTA_C = "DeltaC"
    DELTA_C_BETA_21 = "DeltaCBeta21"
    DELTA_C_BETA_22 = "DeltaCBeta22"


class InvalidTuple(ValueError):
    def __init__(self, blocks: Sequence[int], message: str = ""):
        super().__init__(message or f"blocks {list(blocks)} violate the exponent condition")
        self.blocks = tuple(blocks)


class BetaNotInRowSpace(ValueError):
    pass


class BetaZeroPattern(ValueError):
    pass


def primitive(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Primitive integer vector on the same ray, first nonzero entry positive."""
    vec = [Fraction(x) for x in vec]
    den = lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * den) for x in vec]
    g = gcd(*ints) if any(ints) else 1
    ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 1)
    return tuple(x if lead > 0 else -x for x in ints)


def row_space_basis(data: TrinomialData) -> tuple[tuple[int, ...], tuple[int, ...]]:
    rows = ([c[0] for c in data.a], [c[1] for c in data.a])
    return primitive(rows[0]), primitive(rows[1])


def in_row_space(data: TrinomialData, beta: Sequence[Fraction]) -> bool:
    a = data.column
    base = det2(a(0), a(1))
    b0, b1 = Fraction(beta[0]), Fraction(beta[1])
    w1 = (b0 * a(1)[1] - b1 * a(0)[1]) / base
    w2 = (a(0)[0] * b1 - a(1)[0] * b0) / base
    return all(w1 * a(i)[0] + w2 * a(i)[1] == Fraction(beta[i]) for i in range(data.r + 1))


def beta_line(data: TrinomialData, i0: int) -> tuple[int, ...]:
    """Primitive generator of the admissible betas vanishing at ``i0``: beta_i = det(a_i0, a_i)."""
    return primitive([det2(data.column(i0), data.column(i)) for i in range(data.r + 1)])


def _non_unit(data: TrinomialData, C: Sequence[int], skip: Optional[int] = None) -> list[int]:
    out = []
    for t, c in enumerate(C):
        i = t + data.iota
        if i != skip and data.exponents(i)[c - 1] != 1:
            out.append(i)
    return out


def _check_tuple(data: TrinomialData, C: Sequence[int]):
    if len(C) != len(data.blocks):
        raise InvalidTuple((), f"C needs {len(data.blocks)} entries, got {len(C)}")
    for t, c in enumerate(C):
        i = t + data.iota
        if not 1 <= c <= data.n_i(i):
            raise InvalidTuple((i,), f"c_{i} = {c} out of range 1..{data.n_i(i)}")


def _product_images(ring: PolyRing, C: Sequence[int], coeffs: dict[int, Fraction],
                    skip: Optional[int] = None) -> dict:
    data = ring.data
    derivs = {i: ring.block_derivative(i, C[i - data.iota]) for i in data.block_range}
    images = {}
    for i, beta_i in coeffs.items():
        if i == skip or not beta_i:
            continue
        img = ring.const(beta_i, quotient=False)
        for k in data.block_range:
            if k != i and k != skip:
                img = img * derivs[k]
        images[T(i, C[i - data.iota])] = img
    return images


def make_ds(data: TrinomialData, p: int, check: bool = True) -> Derivation:
    if not 1 <= p <= data.m:
        raise IndexOutOfRange(f"S[{p}] does not exist (m = {data.m})")
    return Derivation(ring_for(data), {S(p): 1}, check=check)


def make_delta_c(data: TrinomialData, C: Sequence[int], check: bool = True) -> Derivation:
    if data.kind is not Kind.TYPE1:
        raise ValueError("delta_C is defined for type-1 data")
    _check_tuple(data, C)
    bad = _non_unit(data, C)
    if len(bad) > 1:
        raise InvalidTuple(bad)
    ring = ring_for(data)
    return Derivation(ring, _product_images(ring, C, {i: Fraction(1) for i in data.block_range}), check=check)


def beta_case(data: TrinomialData, beta: Sequence[Fraction]) -> Optional[int]:
    """``None`` for case 2.1 (no zeros), else the unique zero index ``i0``."""
    if len(beta) != data.r + 1:
        raise BetaZeroPattern(f"beta needs {data.r + 1} entries")
    zeros = [i for i, b in enumerate(beta) if b == 0]
    if len(zeros) > 1:
        raise BetaZeroPattern(f"beta vanishes at {zeros}; at most one zero is allowed")
    if not in_row_space(data, beta):
        raise BetaNotInRowSpace(f"{tuple(str(b) for b in beta)} is not in the row space of A")
    return zeros[0] if zeros else None


def make_delta_c_beta(data: TrinomialData, C: Sequence[int], beta: Sequence, check: bool = True) -> Derivation:
    if data.kind is not Kind.TYPE2:
        raise ValueError("delta_{C,beta} is defined for type-2 data")
    _check_tuple(data, C)
    beta = [Fraction(b) for b in beta]
    i0 = beta_case(data, beta)
    bad = _non_unit(data, C, skip=i0)
    if len(bad) > 1:
        raise InvalidTuple(bad)
    ring = ring_for(data)
    return Derivation(ring, _product_images(ring, C, dict(enumerate(beta)), skip=i0), check=check)


@dataclass(frozen=True)
class ElementaryFamily:
    """One template family; ``beta_basis`` spans its beta parameters.

    For case 2.1 the two basis rows span the row space of ``A`` and the
    excluded betas are those with a zero entry; for case 2.2 the single row
    spans the admissible line.  ``C[i0]`` is pinned to 1 for case 2.2.
    """

    kind: FamilyKind
    data: TrinomialData
    degree: GroupElement
    p: Optional[int] = None
    C: Optional[tuple[int, ...]] = None
    i0: Optional[int] = None
    beta_basis: tuple[tuple[int, ...], ...] = ()

    @property
    def key(self) -> tuple:
        return (self.kind.value, self.p or 0, self.C or (), -1 if self.i0 is None else self.i0)

    def beta(self, rng: Optional[random.Random] = None) -> tuple[Fraction, ...]:
        """A point of the beta parameterization (deterministic unless ``rng`` is given)."""
        if self.kind is FamilyKind.DELTA_C_BETA_22:
            scale = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3)) if rng else Fraction(1)
            return tuple(scale * b for b in self.beta_basis[0])
        if self.kind is FamilyKind.DELTA_C_BETA_21:
            u, v = self.beta_basis
            for k in itertools.count(1):
                if rng:
                    w = (Fraction(rng.randint(-5, 5), rng.randint(1, 3)), Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
                else:
                    w = (Fraction(1), Fraction(k))
                beta = tuple(w[0] * x + w[1] * y for x, y in zip(u, v))
                if all(beta):
                    return beta
        raise ValueError(f"{self.kind.value} has no beta parameter")

    def instantiate(self, beta: Optional[Sequence] = None, rng: Optional[random.Random] = None,
                    check: bool = True) -> Derivation:
        if self.kind is FamilyKind.DS:
            return make_ds(self.data, self.p, check)
        if self.kind is FamilyKind.DELTA_C:
            return make_delta_c(self.data, self.C, check)
        if beta is None:
            beta = self.beta(rng)
        return make_delta_c_beta(self.data, self.C, beta, check)

    def instance(self, beta: Optional[Sequence] = None, rng: Optional[random.Random] = None,
                 check: bool = True) -> "ElementaryInstance":
        if beta is None and self.beta_basis:
            beta = self.beta(rng)
        beta = tuple(Fraction(b) for b in beta) if beta is not None else None
        return ElementaryInstance(self, beta, self.instantiate(beta, check=check))

    def non_kernel(self) -> list:
        """Generators with nonzero template image."""
        if self.kind is FamilyKind.DS:
            return [S(self.p)]
        data = self.data
        return [T(i, self.C[i - data.iota]) for i in data.block_range if i != self.i0]

    def describe(self) -> str:
        parts = [self.kind.value]
        if self.p is not None:
            parts.append(f"p={self.p}")
        if self.C is not None:
            parts.append("C=(" + ",".join(map(str, self.C)) + ")")
        if self.i0 is not None:
            parts.append(f"i0={self.i0}")
        if self.beta_basis:
            parts.append("beta-basis=" + "; ".join("(" + ",".join(map(str, b)) + ")" for b in self.beta_basis))
        parts.append(f"degree={self.degree}")
        return " ".join(parts)

    def record(self) -> dict:
        return {
            "kind": self.kind.value,
            "p": self.p,
            "C": list(self.C) if self.C is not None else None,
            "i0": self.i0,
            "beta_basis": [list(b) for b in self.beta_basis],
            "excluded": "beta_i = 0 for any i" if self.kind is FamilyKind.DELTA_C_BETA_21 else None,
            "degree": {"free": list(self.degree.free), "torsion": list(self.degree.torsion),
                       "moduli": list(self.degree.moduli)},
        }


@dataclass(frozen=True)
class ElementaryInstance:
    """A family at a concrete beta together with its derivation."""

    family: ElementaryFamily
    beta: Optional[tuple[Fraction, ...]]
    derivation: Derivation

    def kernel_generators(self) -> list:
        return [g for g in self.derivation.ring.gens if g not in self.derivation.images]


def instance_from_spec(data: TrinomialData, kind: FamilyKind, *, p: Optional[int] = None,
                       C: Optional[Sequence[int]] = None, beta: Optional[Sequence] = None) -> ElementaryInstance:
    """Build an instance from explicit parameters, validating them like the constructors do."""
    g = ring_for(data).grading
    if kind is FamilyKind.DS:
        delta = make_ds(data, p)
        return ElementaryInstance(ElementaryFamily(kind, data, family_degree(kind, data, g, p=p), p=p), None, delta)
    if kind is FamilyKind.DELTA_C:
        delta = make_delta_c(data, C)
        C = tuple(C)
        return ElementaryInstance(ElementaryFamily(kind, data, family_degree(kind, data, g, C=C), C=C), None, delta)
    delta = make_delta_c_beta(data, C, beta)
    beta = tuple(Fraction(b) for b in beta)
    i0 = beta_case(data, beta)
    C = tuple(C)
    if i0 is None:
        fam = ElementaryFamily(FamilyKind.DELTA_C_BETA_21, data,
                               family_degree(FamilyKind.DELTA_C_BETA_21, data, g, C=C),
                               C=C, beta_basis=row_space_basis(data))
    else:
        C = tuple(1 if i == i0 else c for i, c in enumerate(C))
        fam = ElementaryFamily(FamilyKind.DELTA_C_BETA_22, data,
                               family_degree(FamilyKind.DELTA_C_BETA_22, data, g, C=C, i0=i0),
                               C=C, i0=i0, beta_basis=(beta_line(data, i0),))
    return ElementaryInstance(fam, beta, delta)


def family_degree(kind: FamilyKind, data: TrinomialData, g: GradingGroup, *, p: Optional[int] = None,
                  C: Optional[Sequence[int]] = None, i0: Optional[int] = None) -> GroupElement:
    """Degree of a template, from the closed formulas."""
    if kind is FamilyKind.DS:
        return -g.degree(S(p))
    total = g.zero
    for i in data.block_range:
        if i != i0:
            total = total + g.degree(T(i, C[i - data.iota]))
    if kind is FamilyKind.DELTA_C:
        return -total
    if kind is FamilyKind.DELTA_C_BETA_21:
        return data.r * g.mu - total
    return (data.r - 1) * g.mu - total


def _tuples(data: TrinomialData, skip: Optional[int] = None):
    ranges = []
    for i in data.block_range:
        ranges.append([1] if i == skip else range(1, data.n_i(i) + 1))
    for C in itertools.product(*ranges):
        if len(_non_unit(data, C, skip)) <= 1:
            yield tuple(C)


def enumerate_families(data: TrinomialData, g: Optional[GradingGroup] = None) -> list[ElementaryFamily]:
    """All template families whose existence conditions hold, in a fixed order."""
    g = g or ring_for(data).grading
    out = []
    for p in range(1, data.m + 1):
        out.append(ElementaryFamily(FamilyKind.DS, data, family_degree(FamilyKind.DS, data, g, p=p), p=p))
    if data.kind is Kind.TYPE1:
        for C in _tuples(data):
            out.append(ElementaryFamily(FamilyKind.DELTA_C, data,
                                        family_degree(FamilyKind.DELTA_C, data, g, C=C), C=C))
        return out
    basis = row_space_basis(data)
    for C in _tuples(data):
        out.append(ElementaryFamily(FamilyKind.DELTA_C_BETA_21, data,
                                    family_degree(FamilyKind.DELTA_C_BETA_21, data, g, C=C),
                                    C=C, beta_basis=basis))
    for i0 in range(data.r + 1):
        line = beta_line(data, i0)
        for C in _tuples(data, skip=i0):
            out.append(ElementaryFamily(FamilyKind.DELTA_C_BETA_22, data,
                                        family_degree(FamilyKind.DELTA_C_BETA_22, data, g, C=C, i0=i0),
                                        C=C, i0=i0, beta_basis=(line,)))
    return out
