import random

import pytest

from epsverify.errors import RingTooSmall
from epsverify.group_ring import (
    NOT_UNIT,
    PRECISION_EXHAUSTED,
    UNIT,
    GroupRing,
    det_over_groupring,
    evaluate_matrix,
    is_unit_in_integral_groupring,
    multiplicative_order,
)
from epsverify.tower import make_tower

from oracles import cofactor_det, naive_convolution


@pytest.fixture(scope="module", params=[(3, 2, 2), (3, 5, 8), (5, 3, 2)], ids=lambda t: f"p{t[0]}-d{t[1]}")
def gr(request):
    p, d, f = request.param
    return GroupRing(p, d, make_tower(p, f, 1, 12))


@pytest.mark.parametrize("p,d,order", [(3, 2, 1), (3, 5, 4), (5, 3, 2), (5, 2, 1), (7, 3, 1), (2, 7, 3)])
def test_multiplicative_order(p, d, order):
    assert multiplicative_order(p, d) == order


def test_ring_without_zeta_d_rejected():
    gr = GroupRing(3, 5, make_tower(3, 2, 1, 8))
    with pytest.raises(RingTooSmall):
        gr.zeta_d()


def test_characters_are_the_dual_group(gr):
    assert len(gr.characters()) == gr.p * gr.d
    assert gr.zeta_p() ** gr.p == 1
    assert gr.zeta_d() ** gr.d == 1
    assert all(not gr.zeta_d() ** k == 1 for k in range(1, gr.d))


@pytest.mark.parametrize("seed", range(3))
def test_product_matches_convolution_oracle(gr, seed):
    rng = random.Random(seed)
    x, y = gr.random_element(rng), gr.random_element(rng)
    assert (x * y).equals(naive_convolution(x, y))


@pytest.mark.parametrize("seed", range(3))
def test_transform_is_multiplicative(gr, seed):
    rng = random.Random(seed)
    x, y = gr.random_element(rng), gr.random_element(rng)
    assert (x * y).transform().equals(x.transform() * y.transform())


@pytest.mark.parametrize("seed", range(3))
def test_inverse_transform_round_trip(gr, seed):
    x = gr.random_element(random.Random(seed))
    assert gr.inverse_transform(x.transform()).equals(x)


def test_group_element_characters(gr):
    a, b = gr.a(), gr.b()
    for i, j in gr.characters():
        assert a.evaluate((i, j)) == gr.chi_a(i)
        assert b.evaluate((i, j)) == gr.phi_b(j)


def test_trace_idempotent(gr):
    e = gr.e_a()
    assert (e * e).equals(e)
    for i, j in gr.characters():
        assert e.evaluate((i, j)) == (1 if i == 0 else 0)


def test_u_tilde_off_trivial_character_is_a_unit(gr):
    ut = gr.u_tilde()
    for (i, j), value in ut.items():
        assert value.is_unit()


@pytest.mark.parametrize(
    "make,expected",
    [
        (lambda g: g.one(), UNIT),
        (lambda g: g.a() * g.b(), UNIT),
        (lambda g: g.one() + g.one(), UNIT),
        (lambda g: g.scalar(g.p), NOT_UNIT),
        # a component that vanishes at finite precision is undecidable, never NOT_UNIT
        (lambda g: g.one() - g.a(), PRECISION_EXHAUSTED),
        (lambda g: g.trace_a(), PRECISION_EXHAUSTED),
    ],
    ids=["one", "group-element", "two", "p", "augmentation", "trace"],
)
def test_unit_verdicts(gr, make, expected):
    x = make(gr)
    verdict = is_unit_in_integral_groupring(x.transform())
    assert verdict.verdict == expected


def test_rational_idempotent_is_not_integral(gr):
    # e_a has unit character values 0/1 but is not in Z_p[G]; 1 + e_a has values 1, 2
    x = gr.one() + gr.e_a()
    verdict = is_unit_in_integral_groupring(x.transform())
    assert verdict.verdict == NOT_UNIT
    assert verdict.components_are_units is True
    assert verdict.forward_integral is False


def test_precision_exhausted_when_component_vanishes_at_precision(gr):
    ring = gr.ring
    v = gr.one().transform()
    values = dict(v.items())
    values[(0, 0)] = ring.zero(prec=4)
    from epsverify.group_ring import CenterVector

    verdict = is_unit_in_integral_groupring(CenterVector(gr, values))
    assert verdict.verdict == PRECISION_EXHAUSTED


@pytest.mark.parametrize("size", [1, 2, 3])
def test_det_matches_cofactor_oracle(gr, size):
    rng = random.Random(size)
    matrix = [[gr.random_element(rng) for _ in range(size)] for _ in range(size)]
    got = det_over_groupring(matrix)
    oracle = cofactor_det(matrix, gr.zero(), gr.one())
    assert got.equals(oracle.transform())
    for chi in gr.characters():
        scalar = cofactor_det(evaluate_matrix(matrix, chi), gr.ring.zero(), gr.ring.one())
        assert got[chi] == scalar


def test_det_with_singular_character():
    gr = GroupRing(3, 2, make_tower(3, 2, 1, 12))
    one, a = gr.one(), gr.a()
    det = det_over_groupring([[one, a], [one, a]])
    assert all(v.is_zero() for _, v in det.items())
