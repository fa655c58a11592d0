from fractions import Fraction

import pytest

from trilnd.model import Kind, ModelError, S, T, TrinomialData, require_valid, validate


def test_generators_are_ordered_blockwise_then_free_variables():
    d = TrinomialData.type1([[2], [1, 3]], [0, 1], m=2)
    assert d.generators == (T(1, 1), T(2, 1), T(2, 2), S(1), S(2))
    assert [str(g) for g in d.generators] == ["T[1][1]", "T[2][1]", "T[2][2]", "S[1]", "S[2]"]


def test_type2_rows_and_columns_agree(fixtures):
    ex1 = fixtures["quartic"]
    rows = TrinomialData.type2([[2], [2, 1], [4]], [[1, 0, -1], [0, 1, -1]])
    assert rows == ex1
    assert ex1.kind is Kind.TYPE2 and ex1.iota == 0 and ex1.r == 2
    assert list(ex1.relation_range) == [0]


def test_p0_rows(fixtures):
    assert fixtures["quartic"].p0() == [[-2, 2, 1, 0], [-2, 0, 0, 4]]
    assert fixtures["sl2"].p0() == [[1, 1, 0, 0], [0, 0, 1, 1]]
    assert TrinomialData.type1([[2], [3]], [0, 1], m=1).p0() == [[2, 0, 0], [0, 3, 0]]


def test_validation_codes():
    assert validate(TrinomialData.type1([[1], [1]], [1, 1])).codes() == ["DuplicateScalar"]
    assert "DependentColumns" in validate(
        TrinomialData.type2([[1], [1], [1]], columns=[(1, 0), (2, 0), (0, 1)])).codes()
    assert "BadExponent" in validate(TrinomialData.type1([[0], [1]], [0, 1])).codes()
    assert "BadShape" in validate(TrinomialData.type1([[1]], [0])).codes()
    assert "BadShape" in validate(TrinomialData.type1([[1], [1]], [0, 1, 2])).codes()
    assert validate(TrinomialData.type1([[1], [1]], [0, 1])).ok


def test_every_violation_is_listed():
    report = validate(TrinomialData.type1([[0], [1], [2]], [1, 1, 1]))
    assert report.codes().count("DuplicateScalar") == 3
    assert "BadExponent" in report.codes()
    with pytest.raises(ModelError):
        require_valid(TrinomialData.type1([[1], [1]], [1, 1]))


def test_scalars_are_exact():
    d = TrinomialData.type1([[1], [1]], ["1/2", 3])
    assert d.a == (Fraction(1, 2), Fraction(3))
    with pytest.raises(ModelError):
        TrinomialData.type1([[1], [1]], [0.5, 1])
