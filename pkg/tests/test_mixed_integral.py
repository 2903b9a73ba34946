import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixint import convex_body as cb
from mixint import layercake as lc
from mixint import mixed_integral as mi
from mixint.sampling import random_cake, trial_rng


def pair(seed):
    rng = trial_rng(seed, 0)
    return random_cake(rng), random_cake(rng)


def test_indicators_give_mixed_volumes():
    a, b = cb.box([0, 0], [1, 3]), cb.box([0, 0], [2, 0.5])
    # (1*0.5 + 3*2) / 2 for axis boxes
    assert mi.mixed_integral([lc.indicator(a), lc.indicator(b)]).value == pytest.approx(3.25)


def test_two_layer_closed_form():
    f = lc.LayerCake(2, (1.0, 0.5), (cb.box([0, 0], [1, 1]), cb.box([0, 0], [2, 2])))
    g = lc.indicator(cb.box([0, 0], [1, 2]))
    # levels (0.5, 1]: V(unit, 1x2) = 1.5; (0, 0.5]: V(2x2, 1x2) = 3
    assert mi.mixed_integral([f, g]).value == pytest.approx(0.5 * 1.5 + 0.5 * 3.0)


@given(st.integers(0, 10**6))
def test_methods_agree(seed):
    f, g = pair(seed)
    ref = mi.mixed_integral([f, g]).value
    for method in ("polarization", "polynomial_fit"):
        assert mi.mixed_integral([f, g], method=method).value == pytest.approx(ref, rel=1e-8)


@given(st.integers(0, 10**6))
def test_diagonal_symmetry_and_linearity(seed):
    rng = trial_rng(seed, 1)
    f, g, h = random_cake(rng), random_cake(rng), random_cake(rng)
    v = lambda *fs: mi.mixed_integral(list(fs)).value
    assert v(f, f) == pytest.approx(lc.integral(f), rel=1e-10)
    assert v(f, g) == pytest.approx(v(g, f), rel=1e-12)
    assert v(lc.quasi_sum(f, g), h) == pytest.approx(v(f, h) + v(g, h), rel=1e-9)
    assert v(lc.dilate(2.0, f), h) == pytest.approx(2.0 * v(f, h), rel=1e-10)


def test_three_dimensional_indicators():
    sides = [(1, 2, 3), (2, 1, 1), (3, 3, 1)]
    fs = [lc.indicator(cb.box([0, 0, 0], s)) for s in sides]
    exp = mi.mixed_integral(fs).value
    assert exp == pytest.approx(cb.mixed_volume([f.support for f in fs]), rel=1e-10)
    assert mi.mixed_integral(fs, method="polarization").value == pytest.approx(exp, rel=1e-9)


def test_fit_and_errors():
    f, g = pair(3)
    fit = mi.minkowski_fit([f, g], [(a, b) for a in (0.5, 1, 1.5) for b in (0.5, 1, 1.5)])
    assert list(fit.exponents) == [(2, 0), (1, 1), (0, 2)]
    assert fit.coefficient((2, 0)) == pytest.approx(lc.integral(f), rel=1e-9)
    assert fit.mixed_integral((1, 1)) == pytest.approx(mi.mixed_integral([f, g]).value, rel=1e-9)
    with pytest.raises(ValueError):
        mi.minkowski_fit([f, g], [(1, 1), (2, 2)])
    with pytest.raises(ValueError):
        mi.mixed_integral([f])
    with pytest.raises(ValueError):
        mi.mixed_integral([f, g], method="nope")


def test_steiner_anchor():
    res = mi.steiner_expand(lc.indicator(cb.box([0, 0], [1, 1])), m_facets=64)
    area64 = 32 * math.sin(2 * math.pi / 64)
    assert res.coefficients[0] == pytest.approx(1.0, abs=1e-9)
    assert 2 * res.coefficients[1] == pytest.approx(4.0, abs=1e-9)
    assert res.coefficients[2] == pytest.approx(area64, abs=1e-9)
    assert res.discrepancy < 1e-9 and res.residual < 1e-12


def test_quermassintegrals():
    f, _ = pair(5)
    d = cb.ball_approx(2, 64)
    assert mi.quermassintegral(f, 0, 64) == pytest.approx(lc.integral(f))
    assert mi.quermassintegral(f, 2, 64) == pytest.approx(d.volume)
    assert mi.surface_area(lc.indicator(cb.box([0, 0], [1, 2])), 64) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        mi.steiner_expand(f, [1.0, 2.0])


def test_campaigns():
    rep = mi.verify_polynomiality(seed=1, trials=5)
    assert rep.passed and rep.details["residual"] < 1e-9 and rep.details["min_coefficient"] > -1e-12
    rep = mi.verify_v_properties(seed=1, trials=5)
    assert rep.passed, rep.details
