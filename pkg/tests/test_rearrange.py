import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixint import convex_body as cb
from mixint import layercake as lc
from mixint import rearrange as ra
from mixint.mixed_integral import surface_area
from mixint.sampling import random_cake, shrink_cake, trial_rng


def test_square_anchor():
    sq = lc.indicator(cb.box([0, 0], [1, 1]))
    margin = surface_area(sq, 64) - surface_area(ra.rearrange(sq, 64), 64)
    # a 64-gon of area 1 has perimeter 2 sqrt(area(D_64))
    assert margin == pytest.approx(4 - 2 * math.sqrt(cb.ball_approx(2, 64).volume), abs=1e-12)
    assert abs(margin - (4 - 2 * math.sqrt(math.pi))) < 0.02


@given(st.integers(0, 10**6))
def test_rearrangement_preserves_level_volumes(seed):
    f = random_cake(trial_rng(seed, 0))
    fs = ra.rearrange(f)
    assert fs.thresholds == f.thresholds
    for a, b in zip(f.bodies, fs.bodies):
        assert b.volume == pytest.approx(a.volume, rel=1e-12)
        assert np.allclose(b.vertices.mean(axis=0), 0.0, atol=1e-12)
    assert lc.integral(fs) == pytest.approx(lc.integral(f), rel=1e-12)
    assert surface_area(f) >= surface_area(fs) - 1e-9


def test_degenerate_body_becomes_point():
    seg = cb.hull([[0, 0], [1, 1]], 2)
    p = ra.rearrange_body(seg)
    assert p.affine_rank == 0 and np.allclose(p.vertices, 0)


def test_bm_homothetic_equality():
    f = random_cake(trial_rng(9, 0))
    g = lc.dilate(1.7, f)
    assert max(abs(x) for x in ra.bm_margins(f, g)) < 1e-9


def test_bm_nested_pair():
    rng = trial_rng(2, 2)
    f = random_cake(rng)
    margins = ra.bm_margins(f, shrink_cake(rng, f))
    assert min(margins) >= -1e-9


def test_campaigns_small():
    assert ra.verify_isoperimetric(seed=4, trials=10).passed
    assert ra.verify_bm(seed=4, trials=10).passed
    rep = ra.verify_af_corollary(seed=4, trials=5)
    assert rep.passed and rep.details["worst_urysohn_margin"] >= 0


def test_campaign_in_3d():
    assert ra.verify_isoperimetric(seed=0, trials=2, dim=3).passed


def test_shrinking_surface_sequence():
    seq = ra.shrinking_surface_sequence(10)
    assert all(abs(i - 1) < 1e-9 for i, _ in seq)
    s = [x for _, x in seq]
    assert all(a > b for a, b in zip(s, s[1:]))
    assert s[-1] < 0.2 * s[0]
    with pytest.raises(ValueError):
        ra.shrinking_surface_sequence(0)
