import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import padic_height
from ratpoints.heights import (HeightError, HeightModel, HeightValue, ProjectivePoint,
                               TorusPoint, WeightedPoint, adelic_max, cubic_embedding,
                               standard_height, toric_height, toric_model,
                               weighted_anticanonical_model, weighted_height,
                               weighted_to_torus)
from ratpoints.toric import (PLFunction, anticanonical_pl, cubic_surface_fan,
                             projective_space_fan, weighted_projective_fan)

nonzero_q = st.fractions(min_value=-50, max_value=50, max_denominator=50).filter(lambda x: x != 0)


@pytest.fixture(scope="module")
def cubic_phi():
    return anticanonical_pl(cubic_surface_fan())


def test_standard_height_examples():
    assert standard_height(ProjectivePoint((1, 0))) == 1
    assert standard_height(ProjectivePoint((3, -7))) == 7
    p = ProjectivePoint((2, 4))
    assert p.coords == (1, 2)
    assert standard_height(p) == 2


def test_projective_point_sign_normalized():
    assert ProjectivePoint((0, -3, 6)).coords == (0, 1, -2)
    with pytest.raises(HeightError):
        ProjectivePoint((0, 0))


@settings(max_examples=200)
@given(st.lists(nonzero_q, min_size=2, max_size=4))
def test_adelic_max_matches_place_by_place(vals):
    assert adelic_max(vals) == padic_height(vals)


def test_toric_height_trivial_point(cubic_phi):
    assert toric_height(TorusPoint((1, 1)), cubic_phi) == 1
    assert toric_height(TorusPoint((-1, 1)), cubic_phi) == 1


def test_cubic_heights_match_embedding(cubic_phi):
    t = TorusPoint((2, 3))
    assert toric_height(t, cubic_phi) == 18
    assert cubic_embedding(t) == (12, 18, 1, 6)
    half = TorusPoint((Fraction(1, 2), Fraction(1, 2)))
    assert toric_height(half, cubic_phi) == 8
    assert cubic_embedding(half) == (1, 1, 8, 2)


@settings(max_examples=200, deadline=None)
@given(nonzero_q, nonzero_q)
def test_cubic_cross_model_equality(cubic_phi, a, b):
    t = TorusPoint((a, b))
    x, y, z, u = cubic_embedding(t)
    assert x * y * z == u ** 3
    assert toric_height(t, cubic_phi) == standard_height((x, y, z, u))


@settings(max_examples=100, deadline=None)
@given(nonzero_q, nonzero_q, st.integers(2, 9))
def test_unreduced_representation_irrelevant(cubic_phi, a, b, k):
    # Fractions canonicalise; the height only sees the values
    t1 = TorusPoint((Fraction(a.numerator * k, a.denominator * k), b))
    assert toric_height(t1, cubic_phi) == toric_height(TorusPoint((a, b)), cubic_phi)


@settings(max_examples=100, deadline=None)
@given(nonzero_q, nonzero_q)
def test_cubic_swap_symmetry(cubic_phi, a, b):
    assert toric_height(TorusPoint((a, b)), cubic_phi) == toric_height(TorusPoint((b, a)), cubic_phi)


@settings(max_examples=100, deadline=None)
@given(nonzero_q, nonzero_q)
def test_height_at_least_one(cubic_phi, a, b):
    assert toric_height(TorusPoint((a, b)), cubic_phi) >= 1
    p2 = anticanonical_pl(projective_space_fan(2))
    assert toric_height(TorusPoint((a, b)), p2) >= 1


def test_projective_toric_height_is_standard():
    fan = projective_space_fan(2)
    phi = PLFunction(fan, (0, 0, 1))
    rng = random.Random(5)
    for _ in range(100):
        t = (Fraction(rng.randint(1, 40), rng.randint(1, 40)), Fraction(-rng.randint(1, 40), rng.randint(1, 40)))
        # (1 : 1/t1 : 1/t2) is the matching projective point
        assert toric_height(TorusPoint(t), phi) == adelic_max([1, 1 / t[0], 1 / t[1]])


def test_nonconvex_rejected():
    phi = PLFunction(projective_space_fan(2), (1, 1, -5))
    with pytest.raises(HeightError, match="convex"):
        toric_height(TorusPoint((2, 3)), phi)


def test_weighted_point_normalization():
    assert WeightedPoint((1, 1, 2), (2, 4, 8)).coords == (1, 2, 2)
    # 2 divides every coordinate but 2^2 does not divide x2
    assert WeightedPoint((1, 1, 2), (2, 4, 6)).coords == (2, 4, 6)
    assert WeightedPoint((1, 1, 3), (-1, 2, 5)).coords == (1, -2, -5)


def test_weighted_height_examples():
    hm = weighted_anticanonical_model((1, 1, 2))
    assert weighted_height(WeightedPoint((1, 1, 2), (1, 0, 0)), hm) == 1
    assert weighted_height(WeightedPoint((1, 1, 2), (1, 1, 1)), hm) == 1
    h3 = weighted_height(WeightedPoint((1, 1, 3), (1, 2, 1)), weighted_anticanonical_model((1, 1, 3)))
    assert h3 == 32  # (max(1, 8, 1))^(5/3)


def test_weighted_monomial_degree_checked():
    with pytest.raises(HeightError, match="degree"):
        HeightModel("weighted-monomial", ((2, 0, 0), (0, 0, 2)), 1, (1, 1, 2))


@pytest.mark.parametrize("m", [2, 3, 4])
def test_weighted_matches_toric_model(m):
    w = (1, 1, m)
    fan = weighted_projective_fan(w)
    phi = anticanonical_pl(fan)
    full = weighted_anticanonical_model(w)
    rng = random.Random(m)
    for _ in range(100):
        x = [rng.choice((-1, 1)) * rng.randint(1, 40) for _ in range(3)]
        p = WeightedPoint(w, x)
        h = weighted_height(p, full)
        assert h == toric_height(weighted_to_torus(p, fan.rays), phi)


def test_height_value_ordering():
    a = HeightValue(Fraction(2), 3)   # 2^(1/3)
    b = HeightValue(Fraction(3), 5)   # 3^(1/5)
    assert b < a
    assert HeightValue(Fraction(8), 3).simplify() == 2
    assert float(a) == pytest.approx(2 ** (1 / 3))
    assert a <= Fraction(2) and a > 1
