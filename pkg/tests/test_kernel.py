import itertools
import random
from fractions import Fraction

import pytest

from oracles import random_data
from trilnd.elementary import enumerate_families, make_delta_c
from trilnd.errors import NotHomogeneous
from trilnd.kernel import (NotInKernel, binomial_power, engine_a, engine_b, general_lnd_form,
                           generate_kernel_elements, kernel_membership, match_pattern, random_homogeneous)
from trilnd.model import T
from trilnd.polyring import ring_for


def case_a(fixtures):
    return enumerate_families(fixtures["quartic"])[0].instance(beta=(0, 1, -1))


def test_membership_examples(fixtures):
    inst = case_a(fixtures)
    R = inst.derivation.ring
    assert kernel_membership(inst, R.T(1, 1))
    h = -R.T(1, 1) ** 2 * R.T(1, 2) - R.T(2, 1) ** 4
    assert R.reduce(h) == R.reduce(R.T(0, 1) ** 2)
    assert kernel_membership(inst, h)
    assert match_pattern(inst, h).power == 1
    assert not kernel_membership(inst, R.T(1, 2))
    with pytest.raises(NotHomogeneous):
        kernel_membership(inst, R.T(1, 1) + 1)


def test_binomial_power():
    L = {(1, 0): Fraction(2), (0, 1): Fraction(-3)}
    F = {(2, 0): Fraction(4), (1, 1): Fraction(-12), (0, 2): Fraction(9)}
    assert binomial_power(F, L) == (1, 2)
    assert binomial_power({(1, 1): Fraction(1)}, L) is None
    assert binomial_power({(0, 0): Fraction(5)}, L) == (5, 0)
    v_only = {(0, 1): Fraction(1)}
    assert binomial_power({(0, 3): Fraction(2)}, v_only) == (2, 3)
    assert binomial_power({(1, 2): Fraction(2)}, v_only) is None


def test_generation_examples(fixtures):
    sl2 = enumerate_families(fixtures["sl2"])[0].instance()
    R = sl2.derivation.ring
    elems = set(generate_kernel_elements(sl2, 0, 2))
    for h in [R.one, R.reduce(R.T(1, 2)), R.reduce(R.T(2, 2)), R.reduce(R.T(1, 2) * R.T(2, 2))]:
        assert h in elems
    ds = enumerate_families(fixtures["rigid23_m1"])[0].instance()
    R3 = ds.derivation.ring
    elems = set(generate_kernel_elements(ds, 2, 1))
    assert R3.reduce(R3.T(1, 1) ** 2) in elems and R3.reduce(R3.T(1, 1) ** 4) in elems
    assert all(R3.S(1) not in [h] and all(e[-1] == 0 for e in h.terms) for h in elems)


def test_general_lnd_form(fixtures):
    fam = enumerate_families(fixtures["sl2"])[0]
    assert fam.C == (1, 1)
    R = ring_for(fixtures["sl2"])
    d = general_lnd_form(fam, R.T(2, 2))
    assert d.images == {T(1, 1): R.reduce(R.T(2, 2) ** 2), T(2, 1): R.reduce(R.T(1, 2) * R.T(2, 2))}
    assert general_lnd_form(fam, R.one) == make_delta_c(fixtures["sl2"], (1, 1))
    with pytest.raises(NotInKernel):
        general_lnd_form(fam, R.T(1, 1))


def test_exceptional_block_is_in_the_kernel(fixtures):
    for name in ["quartic", "linear_type2"]:
        for fam in enumerate_families(fixtures[name]):
            if fam.i0 is None:
                continue
            inst = fam.instance()
            data = fixtures[name]
            for j in range(1, data.n_i(fam.i0) + 1):
                assert kernel_membership(inst, inst.derivation.ring.T(fam.i0, j))


def test_engines_agree_on_random_algebras():
    rng = random.Random(11)
    for _ in range(25):
        data = random_data(rng, max_r=3, max_n=2, max_l=3, max_m=1)
        R = ring_for(data)
        for fam in enumerate_families(data):
            inst = fam.instance(rng=rng)
            for h in itertools.islice(generate_kernel_elements(inst, 2, 2), 30):
                assert engine_b(inst, h)
            for _ in range(15):
                h = random_homogeneous(R, rng)
                assert engine_a(inst, h) == engine_b(inst, h)


def test_factorial_closedness_spot_checks(fixtures):
    rng = random.Random(5)
    for data in fixtures.values():
        R = ring_for(data)
        for fam in enumerate_families(data):
            inst = fam.instance(rng=rng)
            for _ in range(20):
                h1, h2 = random_homogeneous(R, rng), random_homogeneous(R, rng)
                if kernel_membership(inst, h1 * h2):
                    assert kernel_membership(inst, h1) and kernel_membership(inst, h2)
                else:
                    assert not (kernel_membership(inst, h1) and kernel_membership(inst, h2))
