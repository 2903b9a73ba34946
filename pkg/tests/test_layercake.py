import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixint import convex_body as cb
from mixint import layercake as lc
from mixint import oracle
from mixint.sampling import random_cake, trial_rng

SQ = cb.box([0, 0], [1, 1])


def two_layer():
    return lc.LayerCake(2, (1.0, 0.25), (SQ, cb.box([-1, -1], [2, 2])))


def test_validation():
    with pytest.raises(ValueError, match="nested"):
        lc.LayerCake(2, (1.0, 0.5), (cb.box([0, 0], [2, 2]), SQ))
    with pytest.raises(ValueError, match="decreasing"):
        lc.LayerCake(2, (0.5, 1.0), (SQ, SQ))
    with pytest.raises(lc.NotNormalizedError):
        lc.LayerCake(2, (0.5,), (SQ,))
    assert lc.LayerCake(2, (0.5,), (SQ,), normalized=False).thresholds == (0.5,)
    with pytest.raises(ValueError):
        lc.LayerCake(2, (1.0,), (cb.empty(2),))


def test_evaluate_and_level_sets():
    f = two_layer()
    assert list(f(np.array([[0.5, 0.5], [1.5, 1.5], [3, 3]]))) == [1.0, 0.25, 0.0]
    assert cb.hausdorff_distance(lc.level_set(f, 0.2), cb.box([-1, -1], [2, 2])) == 0
    assert cb.hausdorff_distance(lc.level_set(f, 1.0), SQ) == 0
    with pytest.raises(ValueError):
        lc.level_set(f, 0.0)


def test_integral_by_hand():
    assert lc.integral(lc.indicator(SQ)) == pytest.approx(1.0)
    # (1 - 0.25) * 1 + 0.25 * 9
    assert lc.integral(two_layer()) == pytest.approx(0.75 + 2.25)


def test_point_mass_is_neutral():
    f = two_layer()
    assert lc.layer_hausdorff(lc.quasi_sum(f, lc.point_mass(2)), f) < 1e-12


def test_quasi_sum_matches_grid_oracle_on_lattice_polygons():
    f = lc.LayerCake(2, (1.0, 0.5), (SQ, cb.box([-1, -1], [1, 2])))
    g = lc.LayerCake(2, (1.0, 0.3), (cb.hull([[0, 0], [1, 0], [0, 1]], 2), cb.box([-1, 0], [1, 1])))
    axis, grid = oracle.grid_quasi_sum(f, g, 4.0, 0.5)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    exact = lc.quasi_sum(f, g)(np.stack([x.ravel(), y.ravel()], 1)).reshape(grid.shape)
    assert np.array_equal(exact, grid)


@given(st.integers(0, 10**6), st.sampled_from([0.5, 1.0, 2.0]))
def test_level_set_identity(seed, lam):
    rng = trial_rng(seed, 0)
    f, g = random_cake(rng), random_cake(rng)
    h = lc.quasi_sum(lc.dilate(lam, f), g)
    for t in lc.merge_thresholds(f, g):
        expect = cb.minkowski_sum(cb.scale(lc.level_set(f, t), lam), lc.level_set(g, t))
        assert cb.hausdorff_distance(lc.level_set(h, t), expect) < 1e-9


@given(st.integers(0, 10**6))
def test_functional_brunn_minkowski(seed):
    # per-level BM integrated with Minkowski's integral inequality
    rng = trial_rng(seed, 0)
    f, g = random_cake(rng), random_cake(rng)
    lhs = lc.integral(lc.quasi_sum(f, g)) ** 0.5
    assert lhs >= lc.integral(f) ** 0.5 + lc.integral(g) ** 0.5 - 1e-9


@given(st.integers(0, 10**6), st.floats(0.1, 3.0))
def test_dilation_and_affine_scaling(seed, lam):
    f = random_cake(trial_rng(seed, 0))
    assert lc.integral(lc.dilate(lam, f)) == pytest.approx(lam**2 * lc.integral(f), rel=1e-10)
    u = np.array([[1.5, 0.3], [-0.2, 0.7]])
    assert lc.integral(lc.transform(f, u, [1, 2])) == pytest.approx(abs(np.linalg.det(u)) * lc.integral(f), rel=1e-10)


def test_lattice_operations():
    a = lc.indicator(cb.box([0, 0], [2, 1]))
    b = lc.indicator(cb.box([1, 0], [3, 1]))
    res = lc.lattice_max(a, b)
    assert res.ok and lc.integral(res.cake) == pytest.approx(3.0)
    far = lc.indicator(cb.box([5, 5], [6, 6]))
    res = lc.lattice_max(a, far)
    assert res.status is lc.LatticeStatus.NOT_QC and res.failed_level == 1.0
    m = lc.lattice_min(a, b)
    assert lc.integral(m) == pytest.approx(1.0)
    low = lc.LayerCake(2, (0.5,), (cb.box([0, 0], [3, 3]),), normalized=False)
    m = lc.lattice_min(a, low)
    assert not m.normalized and m.thresholds == (0.5,)


def test_json_roundtrip():
    f = random_cake(trial_rng(4, 4))
    g = lc.LayerCake.from_dict(f.to_dict())
    assert g.thresholds == f.thresholds
    assert all(np.array_equal(a.vertices, b.vertices) for a, b in zip(f.bodies, g.bodies))
