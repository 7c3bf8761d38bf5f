from fractions import Fraction

import pytest

from epsverify.errors import InvalidParameters, LevelUnsupported
from epsverify.gauss import (
    LocalMultChar,
    ResolventData,
    artin_conductor_from_filtration,
    conductor_exponent,
    cyclotomic_automorphism,
    epsilon_abelian,
    gauss_sum,
    gauss_sum_cosets,
    quadratic_character,
)
from epsverify.gauss.resolvents import e_twist_scalar, frobenius_circulant, subfield_trace
from epsverify.group_ring import det_scalar, is_unit_in_integral_groupring
from epsverify.cli.suites import DET_GRID, sweep_units
from epsverify.tower import make_tower

PRIMES = [3, 5, 7]


@pytest.fixture(scope="module", params=PRIMES, ids=lambda p: f"p{p}")
def level_one(request):
    return make_tower(request.param, 1, 1, 12)


def test_tame_product_identity(level_one):
    p = level_one.p
    for k in range(1, p - 1):
        eta = LocalMultChar(level_one, 1, k)
        assert gauss_sum(eta) * gauss_sum(eta.inverse()) == eta.value(-1) * p


def test_quadratic_square(level_one):
    p = level_one.p
    tau = gauss_sum(quadratic_character(level_one))
    assert tau * tau == (-1) ** ((p - 1) // 2) * p


def test_stickelberger_valuations(level_one):
    # independent of the product identity: the valuations of the p - 2 tame sums
    # are exactly k/(p - 1) for k = 1..p-2, and conjugate pairs sum to 1
    p = level_one.p
    vals = sorted(gauss_sum(LocalMultChar(level_one, 1, k)).valuation() for k in range(1, p - 1))
    assert vals == [Fraction(k, p - 1) for k in range(1, p - 1)]
    for k in range(1, p - 1):
        eta = LocalMultChar(level_one, 1, k)
        assert gauss_sum(eta).valuation() + gauss_sum(eta.inverse()).valuation() == 1


def test_trivial_character_epsilon_is_one(level_one):
    assert epsilon_abelian(LocalMultChar(level_one, 1, 0)) == 1


@pytest.mark.parametrize("level", [1, 2])
def test_direct_and_coset_sums_agree(level):
    ring = make_tower(3, 1, 2, 12)
    for k in range((3 - 1) * 3 ** (level - 1)):
        eta = LocalMultChar(ring, level, k)
        assert gauss_sum(eta).agrees_with(gauss_sum_cosets(eta))


def test_level_two_conductors():
    ring = make_tower(3, 1, 2, 12)
    assert LocalMultChar(ring, 2, 3).conductor() == 1
    assert LocalMultChar(ring, 2, 1).conductor() == 2
    assert LocalMultChar(ring, 2, 0).conductor() == 0


def test_level_three_unsupported():
    with pytest.raises(LevelUnsupported):
        LocalMultChar(make_tower(3, 1, 2, 8), 3, 1)


def test_character_is_multiplicative(level_one):
    p = level_one.p
    eta = LocalMultChar(level_one, 1, 1)
    for x in range(1, p):
        for y in range(1, p):
            assert eta.value(x * y) == eta.value(x) * eta.value(y)


def test_cyclotomic_automorphism_moves_zeta(level_one):
    p = level_one.p
    z = level_one.zeta_p()
    assert cyclotomic_automorphism(z, 2) == z**2
    with pytest.raises(InvalidParameters):
        cyclotomic_automorphism(z, p)


@pytest.mark.parametrize("p", PRIMES)
def test_conductor_from_filtration_matches_weak_ramification(p):
    assert artin_conductor_from_filtration(p, 0) == 0
    for i in range(1, p):
        assert artin_conductor_from_filtration(p, i) == conductor_exponent((i, 0)) == 2


GRID_PARAMS = [params for p, m, d in DET_GRID for params in sweep_units(p, m, d, N=20)]


@pytest.mark.parametrize("params", GRID_PARAMS, ids=lambda q: q.describe())
def test_resolvent_data_on_grid(params):
    data = ResolventData(params)
    d, m = params.d, params.m
    theta, A = data.theta2, data.A
    assert subfield_trace(theta, d) == 1
    assert det_scalar(frobenius_circulant(theta, d)).is_unit()
    assert subfield_trace(A, m) == 1
    assert data.disc_root * data.disc_root == data.disc
    E = data.E()
    assert E.is_unit()
    assert E.frobenius().congruent(E * e_twist_scalar(params), 1)
    assert is_unit_in_integral_groupring(data.W()).is_unit
