import random
from fractions import Fraction

import pytest

from blockdensity.posets import FinitePoset, PaddedFiniteOrder
from blockdensity.profiles import (
    combined_family,
    constant_family,
    gap_check,
    in_Z,
    oscillating_family,
    poset_family,
    two_adic_valuation,
)

ALPHA = Fraction(5, 4)
BETA = Fraction(7, 4)


def chain_order(n):
    return PaddedFiniteOrder(
        FinitePoset.from_matrix([[a <= b for b in range(n)] for a in range(n)])
    )


def test_in_Z_examples():
    assert in_Z(0, 5)
    assert in_Z(1, 6)
    assert not in_Z(1, 12)
    assert not in_Z(0, 0)


def test_valuation_classes_are_pairwise_disjoint():
    for k in range(1, 10_001):
        hits = [n for n in range(15) if in_Z(n, k)]
        assert len(hits) == 1
        assert hits[0] == two_adic_valuation(k)


def test_constant_family_examples():
    family, cert = constant_family(6)
    assert family.value(0, 17) == Fraction(3, 2)
    assert cert.in_D(0, 1)
    assert cert.delta(0, 3) == Fraction(1, 4)
    assert cert.s(0, 1, 7) == 7


def test_constant_family_is_constant_in_k():
    family, _ = constant_family(4)
    for i in range(8):
        base = family.value(i, 0)
        assert all(family.value(i, k) == base for k in range(65))


def test_oscillating_family_examples():
    family, cert = oscillating_family(ALPHA, BETA)
    assert family.value(1, 6) == BETA
    assert family.value(1, 5) == ALPHA
    assert cert.s(0, 1, 2) == 5
    assert cert.delta(2, 5) == BETA - ALPHA


def test_oscillating_family_rejects_bad_band():
    for alpha, beta in [(Fraction(7, 4), Fraction(5, 4)), (Fraction(1), Fraction(3, 2)),
                        (Fraction(3, 2), Fraction(2))]:
        with pytest.raises(ValueError):
            oscillating_family(alpha, beta)


def test_combined_family_examples():
    family, cert = combined_family(6, ALPHA, BETA)
    assert family.value(0, 9) == Fraction(3, 2)
    assert family.value(3, 6) == BETA
    assert not cert.in_D(0, 3)
    assert not cert.in_D(3, 0)
    assert cert.in_D(0, 2)
    assert cert.in_D(1, 3) and cert.in_D(3, 1)
    assert cert.s(1, 3, 0) == 1 and cert.s(3, 1, 0) == 2


def test_poset_family_examples():
    family, cert = poset_family(chain_order(2), ALPHA, BETA)
    assert family.value(1, 2) == BETA
    assert family.value(0, 2) == ALPHA
    assert cert.in_D(1, 0)
    assert not cert.in_D(0, 1)


def test_poset_family_rejects_non_poset():
    class Bogus:
        pass

    with pytest.raises(ValueError):
        poset_family(Bogus(), ALPHA, BETA)
    with pytest.raises(ValueError):
        FinitePoset.from_matrix([[1, 1], [1, 1]])


def test_poset_family_monotone_under_the_order():
    rng = random.Random(7)
    from _oracles import random_poset_matrix

    for _ in range(5):
        matrix = random_poset_matrix(5, rng)
        order = PaddedFiniteOrder(FinitePoset.from_matrix(matrix))
        family, _ = poset_family(order, ALPHA, BETA)
        for i in range(5):
            for j in range(5):
                if order.leq(i, j):
                    for k in range(1001):
                        assert family.value(i, k) <= family.value(j, k)


def test_all_families_stay_in_band():
    fams = [
        constant_family(4)[0],
        oscillating_family(ALPHA, BETA)[0],
        combined_family(4, ALPHA, BETA)[0],
        poset_family(chain_order(3), ALPHA, BETA)[0],
    ]
    for family in fams:
        for i in range(65):
            for k in range(65):
                assert Fraction(1) < family.value(i, k) < Fraction(2)


def test_gap_check_examples():
    family, cert = constant_family(4)
    assert gap_check(family, cert, 0, 1, 50)
    osc_family, osc_cert = oscillating_family(ALPHA, BETA)
    assert gap_check(osc_family, osc_cert, 0, 1, 50)
    pos_family, pos_cert = poset_family(chain_order(2), ALPHA, BETA)
    with pytest.raises(ValueError):
        gap_check(pos_family, pos_cert, 0, 1, 10)


def test_gap_check_random_pairs_all_families():
    rng = random.Random(20260808)
    family, cert = constant_family(8)
    for _ in range(50):
        i, j = rng.randint(0, 40), rng.randint(0, 40)
        if cert.in_D(i, j):
            assert gap_check(family, cert, i, j, 200)
    osc = oscillating_family(ALPHA, BETA)
    comb = combined_family(8, ALPHA, BETA)
    pos = poset_family(chain_order(4), ALPHA, BETA)
    for family, cert in (osc, comb, pos):
        checked = 0
        while checked < 50:
            i, j = rng.randint(0, 12), rng.randint(0, 12)
            if cert.in_D(i, j):
                assert gap_check(family, cert, i, j, 200)
                checked += 1
