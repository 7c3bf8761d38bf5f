import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsverify.errors import InvalidParameters, ResidueEquationUnsolvable
from epsverify.params import UnitSpec
from epsverify.tower import TowerRing, first_irreducible, is_irreducible, make_tower, vp
from epsverify.tower.equations import frobenius_solve, log_principal, exp_small, solve_epsilon, sqrt_unit
from epsverify.tower.linalg import matmul_vec, padic_solve

P, N = 5, 12
MOD = P**N


@pytest.fixture(scope="module")
def unramified():
    return TowerRing(P, 3, 0, N)


@given(st.integers(-(10**9), 10**9), st.integers(-(10**9), 10**9))
def test_integer_arithmetic_matches_python_ints(a, b):
    ring = TowerRing(P, 1, 0, N)
    assert (ring.from_int(a) * ring.from_int(b)) == ring.from_int(a * b)
    assert (ring.from_int(a) + ring.from_int(b)) == ring.from_int(a + b)


@given(st.integers(1, 10**6).filter(lambda n: n % P))
def test_inverse_of_integer_unit(n):
    ring = TowerRing(P, 1, 0, N)
    inv = ring.from_int(n).inverse()
    assert inv == ring.from_int(pow(n, -1, MOD))


@pytest.mark.parametrize("n,expected", [(10, 1), (250, 3), (7, 0), (Fraction(1, 25), -2)])
def test_valuation_of_rationals(n, expected):
    ring = TowerRing(P, 2, 0, N)
    assert ring.coerce(n).valuation() == expected


def test_vp_helper():
    assert vp(3**5 * 7, 3) == 5
    assert vp(1, 3) == 0


@pytest.mark.parametrize("seed", range(5))
def test_frobenius_is_a_ring_automorphism_of_order_f(unramified, seed):
    rng = random.Random(seed)
    x, y = unramified.random_element(rng), unramified.random_element(rng)
    assert (x * y).frobenius() == x.frobenius() * y.frobenius()
    assert (x + y).frobenius() == x.frobenius() + y.frobenius()
    assert x.frobenius(unramified.f) == x


def test_frobenius_reduces_to_pth_power(unramified):
    rng = random.Random(3)
    x = unramified.random_unit(rng)
    assert unramified.residue.pow(x.residue(), P) == x.frobenius().residue()


def test_teichmuller_lift_is_a_root_of_unity(unramified):
    q = P**unramified.f
    t = unramified.teichmuller(unramified.residue.gen())
    assert t ** (q - 1) == 1
    assert t.frobenius() == t**P


@pytest.mark.parametrize("p,f", [(3, 1), (3, 2), (5, 2), (7, 1)])
def test_zeta_p_level(p, f):
    ring = make_tower(p, f, 1, 10)
    z = ring.zeta_p()
    assert ring.e == p - 1
    assert z**p == 1
    assert (z - 1).valuation() == Fraction(1, p - 1)
    assert (z - 1).is_unit() is False


def test_pi_power_and_p_agree_up_to_unit():
    ring = make_tower(3, 2, 1, 10)
    pi = ring.pi()
    assert (pi ** ring.e / 3).is_unit()


@pytest.mark.parametrize("p,f", [(3, 4), (5, 3), (7, 2)])
def test_first_irreducible(p, f):
    g = first_irreducible(p, f)
    assert len(g) == f + 1
    assert is_irreducible(g, p)


def test_reducible_polynomial_rejected():
    assert not is_irreducible((1, 0, 1), 5)  # x^2 + 1 = (x - 2)(x + 2) mod 5


@pytest.mark.parametrize("seed", range(4))
def test_unit_inverse(unramified, seed):
    x = unramified.random_unit(random.Random(seed))
    assert x * x.inverse() == 1


def test_log_exp_round_trip(unramified):
    x = 1 + unramified.random_element(random.Random(7)) * P
    assert exp_small(log_principal(x)) == x


def test_frobenius_solve_full_equation(unramified):
    z = unramified.random_unit(random.Random(11))
    c = z.frobenius() / z
    x, digits = frobenius_solve(c)
    assert digits == N
    assert x.frobenius() / x == c


def test_frobenius_solve_needs_norm_one_residue(unramified):
    with pytest.raises(ResidueEquationUnsolvable):
        frobenius_solve(unramified.from_int(2))


def test_solve_epsilon_teichmuller_exact():
    u = UnitSpec.parse("teich:2").approximant(P, N + 4)
    eps, digits = solve_epsilon(u, 4, N=N, p=P)
    assert digits == N
    assert eps.frobenius() / eps == u


def test_solve_epsilon_reports_honest_precision():
    # 7^4 - 1 = 2400 = 5^2 * 96, so only two digits are attainable in degree 4
    eps, digits = solve_epsilon(7, 4, N=N, p=P)
    assert digits == vp(7**4 - 1, P) == 2
    ratio = eps.frobenius() / eps
    assert ratio.congruent(7, 2)
    assert not ratio.congruent(7, 3)
    with pytest.raises(ResidueEquationUnsolvable):
        solve_epsilon(7, 4, N=N, p=P, min_precision=3)


def test_sqrt_unit(unramified):
    x = unramified.random_unit(random.Random(5))
    s = sqrt_unit(x * x)
    assert s * s == x * x


def test_sqrt_of_non_unit_rejected(unramified):
    with pytest.raises(InvalidParameters):
        sqrt_unit(unramified.from_int(P))


@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=2))
def test_padic_solve_round_trip(rhs):
    matrix = [[1, 2], [3, 4]]  # determinant -2, a 5-adic unit
    x = padic_solve(matrix, rhs, P, 8)
    assert matmul_vec(matrix, x, P**8) == [r % P**8 for r in rhs]
