import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixint import convex_body as cb
from conftest import polygons


def shoelace(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def boxes_mixed_volume(sides):
    # mixed volume of axis-parallel boxes is the permanent of the side matrix over n!
    n = len(sides)
    perm = sum(math.prod(sides[i][s[i]] for i in range(n)) for s in itertools.permutations(range(n)))
    return perm / math.factorial(n)


def test_hull_drops_interior_points():
    p = cb.hull([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.5, 0]], 2)
    assert len(p.vertices) == 4
    assert p.volume == pytest.approx(1.0, abs=1e-15)


def test_hull_errors():
    with pytest.raises(ValueError):
        cb.hull(np.empty((0, 2)), 2)
    with pytest.raises(cb.DimensionError):
        cb.hull([[0, 0, 0]], 2)


def test_volumes_against_closed_forms():
    assert cb.box([0, 0, 0], [1, 2, 3]).volume == pytest.approx(6.0, abs=1e-12)
    tet = cb.hull([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert tet.volume == pytest.approx(1 / 6, abs=1e-14)
    seg = cb.hull([[0, 0], [1, 1]], 2)
    assert seg.volume == 0.0 and seg.affine_rank == 1


def test_degenerate_3d_bodies():
    flat = cb.hull([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], 3)
    assert flat.affine_rank == 2 and flat.volume == 0.0
    assert flat.contains([0.5, 0.5, 0.0]) and not flat.contains([0.5, 0.5, 0.1])


@given(polygons())
def test_polygon_area_matches_shoelace(p):
    assert p.volume == pytest.approx(shoelace(p.vertices), rel=1e-12, abs=1e-12)


def test_mixed_volume_closed_forms():
    sq, sq2 = cb.box([0, 0], [1, 1]), cb.box([0, 0], [2, 2])
    assert cb.mixed_volume([sq, sq2]) == pytest.approx(2.0, abs=1e-12)
    a, b = cb.box([0, 0], [1, 3]), cb.box([0, 0], [2, 0.5])
    assert cb.mixed_volume([a, b]) == pytest.approx(boxes_mixed_volume([[1, 3], [2, 0.5]]), abs=1e-12)
    sides = [[1, 2, 3], [2, 1, 1], [0.5, 1, 2]]
    bx = [cb.box([0, 0, 0], s) for s in sides]
    assert cb.mixed_volume(bx) == pytest.approx(boxes_mixed_volume(sides), rel=1e-10)
    cube = cb.box([0, 0, 0], [1, 1, 1])
    assert cb.mixed_volume([cube] * 3) == pytest.approx(1.0, abs=1e-12)


@given(polygons(), polygons())
def test_mixed_volume_symmetric_and_minkowski_inequality(k, l):
    v = cb.mixed_volume([k, l])
    assert v == pytest.approx(cb.mixed_volume([l, k]), rel=1e-9, abs=1e-12)
    assert v**2 >= k.volume * l.volume * (1 - 1e-9)
    assert cb.mixed_volume([k, k]) == pytest.approx(k.volume, rel=1e-9)


@given(polygons(), polygons())
def test_brunn_minkowski_for_polygons(k, l):
    s = cb.minkowski_sum(k, l)
    assert math.sqrt(s.volume) >= math.sqrt(k.volume) + math.sqrt(l.volume) - 1e-9


def test_minkowski_sum_of_segments_is_parallelogram():
    s = cb.minkowski_sum(cb.hull([[0, 0], [2, 1]], 2), cb.hull([[0, 0], [-1, 3]], 2))
    assert s.volume == pytest.approx(abs(2 * 3 - 1 * -1), abs=1e-12)


def test_scale_and_affine_map():
    p = cb.hull([[0, 0], [2, 0], [1, 3]], 2)
    assert cb.scale(p, 2.5).volume == pytest.approx(6.25 * p.volume)
    assert cb.scale(p, 0).volume == 0.0
    with pytest.raises(ValueError):
        cb.scale(p, -1)
    u = np.array([[2.0, 1.0], [0.0, 0.5]])
    assert cb.affine_map(p, u, [3, 4]).volume == pytest.approx(abs(np.linalg.det(u)) * p.volume)
    with pytest.raises(ValueError):
        cb.affine_map(p, np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_intersect_and_hausdorff():
    i = cb.intersect(cb.box([0, 0], [2, 2]), cb.box([1, 1], [3, 3]))
    assert i.volume == pytest.approx(1.0)
    assert cb.hausdorff_distance(i, cb.box([1, 1], [2, 2])) < 1e-12
    assert cb.intersect(cb.box([0, 0], [1, 1]), cb.box([2, 2], [3, 3])).is_empty
    a = cb.box([0, 0], [1, 1])
    assert cb.hausdorff_distance(a, a.translate([0.3, 0.4])) == pytest.approx(0.5)


def test_ball_approximations():
    for m in (8, 64, 128):
        d = cb.ball_approx(2, m)
        assert d.volume == pytest.approx(m / 2 * math.sin(2 * math.pi / m), abs=1e-13)
        assert np.allclose(np.linalg.norm(d.polytope.vertices, axis=1), 1.0)
    d3 = cb.ball_approx(3)
    assert d3.m == 320
    assert np.allclose(np.linalg.norm(d3.polytope.vertices, axis=1), 1.0)
    assert 4.0 < d3.volume < 4 * math.pi / 3
    with pytest.raises(ValueError):
        cb.ball_approx(2, 7)
    with pytest.raises(ValueError):
        cb.ball_approx(3, 100)


def test_contains_and_support():
    sq = cb.box([0, 0], [1, 1])
    assert sq.contains([0.5, 0.5]) and sq.contains([1.0, 1.0]) and not sq.contains([1.1, 0.5])
    assert np.allclose(sq.support(np.array([[1.0, 1.0], [-1.0, 0.0]])), [2.0, 0.0])


@given(st.integers(0, 10**6))
def test_json_roundtrip(seed):
    r = np.random.default_rng(seed)
    p = cb.hull(r.normal(size=(7, 3)), 3)
    q = cb.Polytope.from_dict(p.to_dict())
    assert np.array_equal(p.vertices, q.vertices) and q.volume == p.volume
