"""Small algebras used by the tests, the acceptance suite and the shipped descriptors."""

from __future__ import annotations

from .model import TrinomialData


def quartic() -> TrinomialData:
    """T01^2 + T11^2 T12 + T21^4 with A columns (1,0), (0,1), (-1,-1)."""
    return TrinomialData.type2([[2], [2, 1], [4]], columns=[(1, 0), (0, 1), (-1, -1)])


def sl2() -> TrinomialData:
    """T11 T12 - T21 T22 - 1, the coordinate ring of SL2."""
    return TrinomialData.type1([[1, 1], [1, 1]], [0, 1])


def rigid23(m: int = 0) -> TrinomialData:
    """T1^2 - T2^3 - 1, optionally with free variables S."""
    return TrinomialData.type1([[2], [3]], [0, 1], m=m)


def gap_case() -> TrinomialData:
    """Type 2 with three unit-free blocks: two even blocks containing 2 and one with all exponents > 1."""
    return TrinomialData.type2([[2, 2], [2], [3, 2]], columns=[(1, 0), (0, 1), (-1, -1)])


def linear_type2() -> TrinomialData:
    """T01 + T11 + T21 T22 (all unit exponents): every template kind is admissible."""
    return TrinomialData.type2([[1], [1], [1, 1]], columns=[(1, 0), (0, 1), (-1, -1)])


FIXTURES = {
    "quartic": quartic,
    "sl2": sl2,
    "rigid23": rigid23,
    "rigid23_m1": lambda: rigid23(1),
    "gap_case": gap_case,
    "linear_type2": linear_type2,
}


def all_fixtures() -> dict[str, TrinomialData]:
    return {name: make() for name, make in FIXTURES.items()}
