import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epsverify.errors import InvalidParameters, TwistTrivialOnN
from epsverify.serre import SerreModel


@pytest.fixture(scope="module", params=[2, 5], ids=lambda d: f"d{d}")
def model(request):
    return SerreModel(3, request.param, 2)


def test_default_level_is_omega_plus_three(model):
    assert model.level == model.omega + 3


def test_omega_values():
    assert SerreModel(3, 2, 2).omega == 1  # 2^2 - 1 = 3
    assert SerreModel(3, 5, 2).omega == 0  # 2^5 - 1 = 31
    assert SerreModel(5, 2, 7).omega == 0  # 48
    assert SerreModel(5, 4, 2).omega == 1  # 15


def test_group_law(model):
    rng = random.Random(0)
    x, y = model.random_tuple(rng), model.random_tuple(rng)
    assert model.equal(model.mul(x, model.inv(x)), model.identity())
    assert model.equal(model.mul(x, y), model.mul(y, x))
    assert model.equal(model.div(model.mul(x, y), y), x)


@pytest.mark.parametrize("seed", range(3))
def test_actions_are_homomorphisms(model, seed):
    rng = random.Random(seed)
    x, y = model.random_tuple(rng), model.random_tuple(rng)
    for gen in ("F", "Finv_b", "b"):
        assert model.equal(model.act(gen, model.mul(x, y)), model.mul(model.act(gen, x), model.act(gen, y)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_b_equals_F_power_after_Finv_b(model, n):
    # (F x 1)^n o (F^-n x b^n) = 1 x b^n
    x = model.random_tuple(random.Random(n))
    y = model.act("Finv_b", x, n)
    for _ in range(n):
        y = model.act("F", y)
    assert model.equal(y, model.act("b", x, n))


def test_b_has_order_d(model):
    x = model.random_tuple(random.Random(9))
    assert model.equal(model.act("b", x, model.d), x)


def test_identity_action(model):
    x = model.random_tuple(random.Random(1))
    assert model.act("identity", x) is x


def test_unknown_generator(model):
    with pytest.raises(InvalidParameters):
        model.act("G", model.identity())


@pytest.mark.parametrize("seed", range(10))
def test_coboundary_round_trip(model, seed):
    c = model.random_cocycle(random.Random(seed))
    x = model.solve_coboundary(c)
    assert model.equal(model.differential(x), c)


@given(st.integers(0, 10**6))
def test_w_after_differential_vanishes(seed):
    model = SerreModel(3, 2, 2)
    x = model.random_tuple(random.Random(seed))
    assert model.w_map(model.differential(x)) == 0


def test_w_map_detects_non_cocycles():
    model = SerreModel(3, 2, 2)
    assert model.omega == 1
    c = model.make([(1, 1), (0, 1)])
    assert model.w_map(c) == 1
    with pytest.raises(InvalidParameters):
        model.solve_coboundary(c)


def test_reduce_lowers_level(model):
    x = model.random_tuple(random.Random(2))
    low = model.reduce(x, 1)
    assert low.level == 1 and all(v < 3 for v in low.valuations)
    with pytest.raises(InvalidParameters):
        model.reduce(low, 2)


def test_invalid_models():
    with pytest.raises(InvalidParameters):
        SerreModel(3, 2, 3)
    with pytest.raises(TwistTrivialOnN):
        SerreModel(3, 2, 1)
    with pytest.raises(InvalidParameters):
        SerreModel(3, 2, 2, level=1)
