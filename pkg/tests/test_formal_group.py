import pytest

from epsverify.errors import InvalidParameters
from epsverify.formal_group import (
    TruncatedSeries,
    formal_exp,
    formal_inverse,
    formal_log,
    law_from_log,
    lubin_tate_law,
    subtraction_expansion,
)
from epsverify.tower.scalar import PadicScalar

N = 20


@pytest.fixture(scope="module", params=[(3, 2), (3, 5), (5, 2)], ids=lambda t: f"p{t[0]}-u{t[1]}")
def group(request):
    p, u = request.param
    return lubin_tate_law(p, u, p + 5, N)


def _vars(law, n):
    return [TruncatedSeries.variable(law.p, law.N, n, law.D, i) for i in range(n)]


def test_default_degree_is_p_plus_five():
    assert lubin_tate_law(3, 2, N=12).D == 8


def test_identity_and_linear_terms(group):
    law = group.law
    one = PadicScalar.from_int(group.p, 1, law.N)
    assert law.coefficient(1, 0) == one and law.coefficient(0, 1) == one
    assert law.coefficient(0, 0).is_zero()


def test_commutative(group):
    X, Y = _vars(group.law, 2)
    assert group.law.compose([Y, X]).equals(group.law)


def test_associative(group):
    X, Y, Z = _vars(group.law, 3)
    F = group.law
    assert F.compose([F.compose([X, Y]), Z]).equals(F.compose([X, F.compose([Y, Z])]))


def test_integral(group):
    assert group.law.is_integral()


def test_endomorphism_commutes_with_law(group):
    X, Y = _vars(group.law, 2)
    F, endo = group.law, group.endomorphism
    assert endo.compose([F]).equals(F.compose([endo.compose([X]), endo.compose([Y])]))


def test_log_linearizes(group):
    X, Y = _vars(group.law, 2)
    log = group.log
    assert log.compose([group.law]).equals(log.compose([X]) + log.compose([Y]))


def test_degree_induction_matches_exp_of_log(group):
    assert law_from_log(group.log).equals(group.law)


def test_exp_log_round_trip(group):
    (X,) = _vars(group.law, 1)
    assert formal_exp(group.log).compose([group.log]).equals(X)
    assert group.log.compose([formal_exp(group.log)]).equals(X)


def test_formal_inverse(group):
    (X,) = _vars(group.law, 1)
    inv = formal_inverse(group.law)
    assert group.law.compose([X, inv]).equals(X - X)


def test_subtraction_pattern(group):
    # F(X, i(Y)) with i(Y) = -Y + a11 Y^2 + ... gives A = -a11
    a = subtraction_expansion(group)
    assert (a + group.law.coefficient(1, 1)).is_zero()


def test_equality_is_not_vacuous(group):
    X, Y = _vars(group.law, 2)
    assert not group.law.equals(X + Y)


def test_subtraction_of_multiplicative_law():
    # F = X + Y + XY gives X -_F Y = (X - Y)/(1 + Y), whose XY coefficient is -1
    p, D = 3, 6
    X, Y = (TruncatedSeries.variable(p, N, 2, D, i) for i in range(2))
    a = subtraction_expansion(X + Y + X * Y)
    assert a == PadicScalar.from_int(p, -1, N)


def test_polynomial_endomorphism_gives_a_group_law():
    group = lubin_tate_law(3, 2, 8, N, endomorphism="polynomial")
    X, Y, Z = _vars(group.law, 3)
    F = group.law
    assert F.is_integral()
    assert F.compose([F.compose([X, Y]), Z]).equals(F.compose([X, F.compose([Y, Z])]))


def test_low_degree_rejected():
    with pytest.raises(InvalidParameters):
        lubin_tate_law(5, 2, 4, N)


def test_formal_log_starts_with_x():
    log = formal_log(3, 2, 8, N)
    assert log.coefficient(1) == PadicScalar.from_int(3, 1, log.N)


def test_explicit_log_does_not_linearize_the_polynomial_law():
    # the two endomorphisms give isomorphic but different laws; only one has the explicit log
    poly = lubin_tate_law(3, 2, 8, N, endomorphism="polynomial")
    explicit = lubin_tate_law(3, 2, 8, N)
    log = formal_log(3, 2, 8, N)
    X, Y = _vars(poly.law, 2)
    assert not log.compose([poly.law]).equals(log.compose([X]) + log.compose([Y]))
    assert not poly.law.equals(explicit.law)
