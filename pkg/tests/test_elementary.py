import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_data
from trilnd.classify import has_homogeneous_lnd
from trilnd.derivation import degree_of, is_locally_nilpotent_on_generators
from trilnd.elementary import (BetaNotInRowSpace, BetaZeroPattern, FamilyKind, InvalidTuple, beta_line,
                               enumerate_families, family_degree, in_row_space, instance_from_spec, make_delta_c,
                               make_delta_c_beta, make_ds, primitive)
from trilnd.errors import IndexOutOfRange
from trilnd.kernel import generate_kernel_elements
from trilnd.model import S, T
from trilnd.polyring import ring_for


def test_make_ds(fixtures):
    data = fixtures["rigid23_m1"]
    d = make_ds(data, 1)
    R = d.ring
    assert d.images == {S(1): R.one}
    assert degree_of(d) == -R.grading.degree(S(1))
    assert d(R.S(1) ** 2) == R.reduce(R.S(1) * 2)
    with pytest.raises(IndexOutOfRange):
        make_ds(data, 2)


def test_make_delta_c(fixtures):
    sl2 = fixtures["sl2"]
    R = ring_for(sl2)
    d = make_delta_c(sl2, (1, 1))
    assert d.images == {T(1, 1): R.reduce(R.T(2, 2)), T(2, 1): R.reduce(R.T(1, 2))}
    g = R.grading
    assert degree_of(d) == -g.degree(T(1, 1)) - g.degree(T(2, 1))
    d22 = make_delta_c(sl2, (2, 2))
    assert d22.images == {T(1, 2): R.reduce(R.T(2, 1)), T(2, 2): R.reduce(R.T(1, 1))}
    with pytest.raises(InvalidTuple) as err:
        make_delta_c(fixtures["rigid23"], (1, 1))
    assert err.value.blocks == (1, 2)
    with pytest.raises(InvalidTuple):
        make_delta_c(sl2, (3, 1))


def test_make_delta_c_beta_examples(fixtures):
    ex1 = fixtures["quartic"]
    R = ring_for(ex1)
    a = make_delta_c_beta(ex1, (1, 2, 1), (0, 1, -1))
    assert a.images == {T(1, 2): R.reduce(R.T(2, 1) ** 3 * 4), T(2, 1): R.reduce(-R.T(1, 1) ** 2)}
    b = make_delta_c_beta(ex1, (1, 2, 1), (1, -1, 0))
    assert b.images == {T(0, 1): R.reduce(R.T(1, 1) ** 2), T(1, 2): R.reduce(R.T(0, 1) * -2)}
    with pytest.raises(BetaNotInRowSpace):
        make_delta_c_beta(ex1, (1, 2, 1), (1, 1, 1))
    with pytest.raises(BetaZeroPattern):
        make_delta_c_beta(ex1, (1, 2, 1), (0, 0, 0))
    with pytest.raises(InvalidTuple):
        make_delta_c_beta(ex1, (1, 1, 1), (0, 1, -1))  # l_11 = 2 and l_21 = 4 both non-unit
    # c_{i0} does not influence the images
    assert make_delta_c_beta(ex1, (1, 2, 1), (1, -1, 0)) == b


def test_enumeration_examples(fixtures):
    fams = enumerate_families(fixtures["quartic"])
    assert [(f.kind, f.C, f.i0) for f in fams] == [
        (FamilyKind.DELTA_C_BETA_22, (1, 2, 1), 0), (FamilyKind.DELTA_C_BETA_22, (1, 2, 1), 2)]
    assert fams[0].beta_basis == ((0, 1, -1),) and fams[1].beta_basis == ((1, -1, 0),)
    sl2 = enumerate_families(fixtures["sl2"])
    assert sorted(f.C for f in sl2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert all(f.kind is FamilyKind.DELTA_C for f in sl2)
    m1 = enumerate_families(fixtures["rigid23_m1"])
    assert [(f.kind, f.p) for f in m1] == [(FamilyKind.DS, 1)]
    assert enumerate_families(fixtures["rigid23"]) == []
    assert enumerate_families(fixtures["gap_case"]) == []
    lin = enumerate_families(fixtures["linear_type2"])
    assert {f.kind for f in lin} == {FamilyKind.DELTA_C_BETA_21, FamilyKind.DELTA_C_BETA_22}


def test_family_degree_examples(fixtures):
    ex1 = fixtures["quartic"]
    g = ring_for(ex1).grading
    fam = enumerate_families(ex1)[1]
    assert fam.degree == (2 - 1) * g.mu - g.degree(T(0, 1)) - g.degree(T(1, 2))
    assert family_degree(fam.kind, ex1, g, C=fam.C, i0=fam.i0) == fam.degree


def test_beta_helpers(fixtures):
    ex1 = fixtures["quartic"]
    assert primitive([2, -4, 0]) == (1, -2, 0)
    assert primitive([0, "-1/2", 1]) == (0, 1, -2)
    assert beta_line(ex1, 1) == (1, 0, -1)
    assert in_row_space(ex1, (3, -1, -2)) and not in_row_space(ex1, (1, 1, 1))


def test_instance_from_spec_canonicalizes(fixtures):
    data = fixtures["linear_type2"]
    inst = instance_from_spec(data, FamilyKind.DELTA_C_BETA_21, C=(1, 1, 2), beta=beta_line(data, 2))
    assert inst.family.kind is FamilyKind.DELTA_C_BETA_22 and inst.family.C == (1, 1, 1)
    assert inst.family.i0 == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_every_family_is_a_homogeneous_lnd(seed):
    rng = random.Random(seed)
    data = random_data(rng)
    fams = enumerate_families(data)
    assert bool(fams) == has_homogeneous_lnd(data)[0]
    keys = [f.key for f in fams]
    assert len(keys) == len(set(keys))
    for f in fams:
        inst = f.instance(rng=rng)
        d = inst.derivation
        assert degree_of(d) == f.degree
        assert is_locally_nilpotent_on_generators(d) is True
        for h in list(generate_kernel_elements(inst, 1, 1))[:4]:
            assert is_locally_nilpotent_on_generators(d.multiply(h)) is True
