import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratpoints.asymptotics import (AsymptoticPrediction, StageError, compare,
                                   fit_asymptotic, predict, product_prediction,
                                   tauberian_constant, trend_series, zeta_partial)
from ratpoints.densities import Interval
from ratpoints.enumeration import (CountCurve, count_curve, geometric_bounds,
                                   projective_heights)
from ratpoints.toric import Fan, projective_space_fan
from ratpoints.varieties import (cubic_surface_variety, projective_variety, toric_variety,
                                 weighted_variety)

pos_q = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=60)


def test_tauberian_examples():
    assert tauberian_constant(6, 1, 3) == 3
    assert tauberian_constant(Fraction(1, 2), 2, 1) == Fraction(1, 4)
    with pytest.raises(ValueError):
        tauberian_constant(1, 1, 0)
    with pytest.raises(ValueError):
        tauberian_constant(1, 0, 1)
    iv = tauberian_constant(Interval(2.0, 4.0), 2, 2)
    assert iv.lo <= 1 <= iv.hi and iv.contains(2.0)


@settings(max_examples=100)
@given(pos_q, pos_q, st.integers(1, 8))
def test_tauberian_recovers_theta(theta, a, b):
    c = tauberian_constant(theta, a, b)
    assert c * a * math.factorial(b - 1) == theta


def _pred(alpha, beta, theta, tau_inf=None, gamma=None):
    return AsymptoticPrediction(Fraction(alpha), beta, gamma, 1, None, tau_inf, theta,
                                tauberian_constant(theta, Fraction(alpha), beta))


def test_product_equal_index_projective_lines():
    p1 = _pred(2, 1, Fraction(3), tau_inf=4, gamma=Fraction(1, 2))
    pp = product_prediction(p1, p1)
    assert (pp.alpha, pp.beta, pp.tau_inf, pp.theta) == (2, 2, 16, 9)
    assert pp.gamma == Fraction(1, 4)
    assert pp.c == Fraction(9, 2)


@settings(max_examples=100)
@given(pos_q, st.integers(1, 4), st.integers(1, 4), pos_q, pos_q, pos_q)
def test_product_case_one_identities(a, b1, b2, t1, t2, t3):
    p1, p2, p3 = _pred(a, b1, t1), _pred(a, b2, t2), _pred(a, 1, t3)
    p12 = product_prediction(p1, p2)
    assert p12.theta == t1 * t2 and p12.beta == b1 + b2
    assert p12.c * a * math.factorial(b1 + b2 - 1) == p12.theta
    assert product_prediction(p2, p1).theta == p12.theta
    left = product_prediction(p12, p3)
    right = product_prediction(p1, product_prediction(p2, p3))
    assert left.theta == right.theta and left.c == right.c


def test_product_unequal_index():
    base = _pred(1, 1, Fraction(1))
    top = _pred(2, 1, Fraction(5))
    single = product_prediction(base, top, base_heights=[1])
    assert single.theta == 5 and single.alpha == 2
    more = product_prediction(top, base, base_heights=[1, 2, 2, 3])
    assert more.theta == 5 * (1 + Fraction(2, 4) + Fraction(1, 9))
    assert more.truncation["base_points"] == 4
    with pytest.raises(ValueError):
        product_prediction(base, top)
    irr = product_prediction(base, _pred(Fraction(3, 2), 1, Fraction(1)), base_heights=[1, 2])
    assert irr.theta == pytest.approx(1 + 2 ** -1.5)


def _dirichlet_p1(s):
    # P^1 with H = max(|a|, |b|): 4 points of height 1 and 4 phi(h) of
    # height h >= 2, so Z(s) = 4 zeta(s-1)/zeta(s)
    from scipy.special import zeta
    return 4 * zeta(s - 1) / zeta(s)


def test_zeta_partial_projective_line():
    hist = projective_heights(1, 4000)
    got = zeta_partial(hist, 3, 4000)
    assert got == pytest.approx(_dirichlet_p1(3), rel=0.01)
    assert zeta_partial(hist, 50, 4000) == pytest.approx(4, rel=1e-9)


def test_zeta_partial_monotone_and_input_forms():
    hist = projective_heights(1, 300)
    vals = [zeta_partial(hist, 3, b) for b in (10, 50, 300)]
    assert vals == sorted(vals)
    heights = [h for h, n in enumerate(hist) for _ in range(int(n))]
    mapping = {h: int(n) for h, n in enumerate(hist) if n}
    assert zeta_partial(heights, 3, 300) == pytest.approx(vals[-1])
    assert zeta_partial(mapping, 3, 300) == pytest.approx(vals[-1])
    with pytest.raises(ValueError):
        zeta_partial(heights, 0, 10)


def _synthetic(a, b, c, lo=10, hi=10 ** 8, count=20):
    bs = np.geomspace(lo, hi, count)
    return CountCurve(tuple((Fraction(float(x)), round(c * x ** a * math.log(x) ** (b - 1) * 1e6))
                            for x in bs))


def test_fit_recovers_synthetic_parameters():
    rng = random.Random(7)
    for _ in range(10):
        a, b, c = rng.uniform(0.5, 3), rng.randint(1, 7), rng.uniform(0.01, 10)
        # counts are scaled by 10^6 and rounded; undo the scale in log c
        fit = fit_asymptotic(_synthetic(a, b, c))
        assert abs(fit.a - a) < 1e-6 and abs(fit.b - b) < 1e-6
        assert abs(fit.log_c - math.log(c * 1e6)) < 1e-6


def test_fit_fixed_parameters():
    curve = _synthetic(1.5, 3, 2.0)
    fit = fit_asymptotic(curve, fix_a=1.5, fix_b=3)
    assert fit.c == pytest.approx(2e6, rel=1e-6)
    assert fit.fixed_mask == (True, True)
    assert fit.to_dict()["schema"] == "ratpoints.fit/1"


def test_fit_rejects_short_curves():
    with pytest.raises(ValueError):
        fit_asymptotic(CountCurve(((5, 1), (10, 2))))
    with pytest.raises(ValueError):
        fit_asymptotic(CountCurve(((1, 1), (2, 2), (5, 3), (9, 4))))


def test_fit_projective_line_exponent():
    curve = count_curve("projective", geometric_bounds(100, 5000, 12), n=1)
    fit = fit_asymptotic(curve, fix_b=1)
    assert abs(fit.a - 2) < 0.05


@pytest.mark.slow
def test_fit_weighted_exponent():
    curve = count_curve("weighted", geometric_bounds(50, 1000, 10), m=3)
    fit = fit_asymptotic(curve, fix_b=1)
    assert abs(fit.a - 1.2) < 0.15


def test_predict_projective_line():
    pred = predict(projective_variety(1), big_p=10_000)
    assert pred.alpha == 2 and pred.beta == 1
    assert pred.c.contains(12 / math.pi ** 2)
    assert pred.gamma == Fraction(1, 2) and pred.tau_inf == 4


def test_predict_projective_plane():
    pred = predict(projective_variety(2), big_p=10_000)
    zeta3 = 1.2020569031595942
    assert pred.alpha == 3 and pred.c.contains(4 / zeta3)


def test_predict_cubic_surface():
    pred = predict(cubic_surface_variety(), big_p=10_000)
    assert (pred.alpha, pred.beta, pred.gamma, pred.tau_inf) == (1, 7, Fraction(1, 36), 36)
    assert 0 < pred.c.lo < pred.c.hi < 1e-5
    again = AsymptoticPrediction.from_dict(pred.to_dict())
    assert again.alpha == pred.alpha and again.c.lo == pred.c.lo


def test_predict_weighted_family():
    p2 = predict(weighted_variety((1, 1, 2)), big_p=1000)
    assert p2.alpha == 1 and p2.c is not None
    p3 = predict(weighted_variety((1, 1, 3)), big_p=1000)
    assert p3.alpha == Fraction(6, 5) and p3.beta == 1
    assert p3.c is None and p3.notes


def test_predict_reports_failing_stage():
    # not complete: only two cones of P^2
    fan = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2)))
    with pytest.raises(StageError) as e:
        predict(toric_variety(fan))
    assert e.value.stage == "picard"


def _synthetic_prediction(a, b, c):
    return AsymptoticPrediction(Fraction(a), b, c=Interval(c * 0.999, c * 1.001))


def test_compare_synthetic_passes():
    curve = _synthetic(2, 1, 1.0)
    rep = compare(_synthetic_prediction(2, 1, 1e6), curve)
    assert [v.status for v in rep.verdicts] == ["pass", "pass", "pass"]
    assert rep.to_dict()["schema"] == "ratpoints.report/1"
    assert "exponent" in rep.table()


def test_compare_projective_line():
    pred = predict(projective_variety(1), big_p=10_000)
    curve = count_curve("projective", geometric_bounds(100, 5000, 10), n=1)
    rep = compare(pred, curve, constant_slack=1.02)
    status = {v.name: v.status for v in rep.verdicts}
    assert status["exponent"] == "pass" and status["constant"] == "pass"


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 1.5))
def test_compare_never_passes_wrong_exponent(shift):
    curve = _synthetic(2, 1, 1.0)
    rep = compare(_synthetic_prediction(2 + shift, 1, 1e6), curve)
    assert rep.verdicts[0].status == "fail"


def test_compare_inconclusive_without_data():
    pred = AsymptoticPrediction(Fraction(1), 1)
    rep = compare(pred, CountCurve(((1, 1), (2, 2))))
    assert {v.status for v in rep.verdicts} == {"inconclusive"}


def test_trend_series_skips_unit_bound():
    curve = CountCurve(((1, 1), (10, 20)))
    assert trend_series(curve, 1, 1) == [(10.0, 2.0)]
