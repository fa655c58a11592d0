import random

import pytest

from oracles import random_data
from trilnd.classify import (SearchSpaceTooLarge, classify, cor1_gap, has_homogeneous_lnd, is_rigid,
                             match_elementary, search_homogeneous_lnds)
from trilnd.derivation import Derivation
from trilnd.elementary import enumerate_families
from trilnd.model import T, TrinomialData
from trilnd.polyring import ring_for


def test_classification_examples(fixtures):
    has, E = has_homogeneous_lnd(fixtures["quartic"])
    assert has and E == (0, 2)
    assert not has_homogeneous_lnd(fixtures["rigid23"])[0]
    assert has_homogeneous_lnd(fixtures["rigid23_m1"])[0]
    gap, witness = cor1_gap(fixtures["gap_case"])
    assert gap and sorted(witness[:2]) == [0, 1] and witness[2] == 2
    assert not cor1_gap(fixtures["quartic"])[0]
    assert not cor1_gap(fixtures["rigid23"])[0]
    assert is_rigid(fixtures["rigid23"]) and not is_rigid(fixtures["quartic"])
    assert not is_rigid(fixtures["gap_case"])


def test_gap_requires_an_exponent_two():
    d = TrinomialData.type2([[4, 4], [4], [3, 2]], columns=[(1, 0), (0, 1), (-1, -1)])
    assert not cor1_gap(d)[0] and is_rigid(d)
    d2 = TrinomialData.type2([[2, 2], [2], [3, 2]], columns=[(1, 0), (0, 1), (-1, -1)], m=1)
    assert not cor1_gap(d2)[0] and has_homogeneous_lnd(d2)[0]


def test_report_invariants_on_random_data():
    rng = random.Random(2)
    for _ in range(200):
        data = random_data(rng)
        rep = classify(data)
        assert rep.rigid == (not rep.has_homogeneous_lnd and not rep.cor1_gap)
        assert not (rep.cor1_gap and rep.has_homogeneous_lnd)
        fams = enumerate_families(data)
        assert bool(fams) == rep.has_homogeneous_lnd
        if rep.cor1_gap:
            assert not fams


def test_search_sl2(fixtures):
    rep = search_homogeneous_lnds(fixtures["sl2"], 2)
    assert rep.complete and len(rep.survivors) == 12
    for s in rep.survivors:
        assert s.structural_ok and s.match.kernel_certified


def test_search_rigid_is_empty(fixtures):
    assert search_homogeneous_lnds(fixtures["rigid23"], 3).survivors == []
    assert search_homogeneous_lnds(fixtures["gap_case"], 2).survivors == []


def test_search_finds_both_type2_strata(fixtures):
    rep = search_homogeneous_lnds(fixtures["linear_type2"], 2)
    assert rep.complete
    kinds = {s.match.family.kind.value for s in rep.survivors}
    assert kinds == {"DeltaCBeta21", "DeltaCBeta22"}


def test_search_with_free_variables(fixtures):
    rep = search_homogeneous_lnds(fixtures["rigid23_m1"], 2)
    assert rep.complete and rep.survivors
    assert all(s.match.family.kind.value == "DS" for s in rep.survivors)


def test_search_cap(fixtures):
    with pytest.raises(SearchSpaceTooLarge):
        search_homogeneous_lnds(fixtures["quartic"], 4, cap=10)


def test_matching_rejects_non_elementary(fixtures):
    R = ring_for(fixtures["sl2"])
    euler = Derivation(R, {T(1, 1): R.T(1, 1), T(1, 2): -R.T(1, 2)})
    assert match_elementary(euler) is None
