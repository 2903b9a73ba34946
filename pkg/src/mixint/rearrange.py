"""Symmetric decreasing rearrangement of layer cakes and rearrangement inequalities.

All comparisons use one fixed inscribed ball approximation D_m on both
sides, so the polygonal bias of D_m enters the two sides identically.
"""
from __future__ import annotations

import math

import numpy as np

from . import convex_body as cb
from . import layercake as lc
from .layercake import LayerCake
from .mixed_integral import mixed_integral, quermassintegral, surface_area
from .reports import VerifyReport, digest
from .sampling import random_cake, trial_rng


def rearrange_body(k: cb.Polytope, m_facets: int | None = None) -> cb.Polytope:
    """The copy of D_m, centred at the origin, with the same volume as ``k``."""
    ball = cb.ball_approx(k.dim, m_facets)
    if k.is_empty:
        return k
    if k.volume == 0.0:
        return cb.point(np.zeros(k.dim))
    return cb.scale(ball.polytope, equivalent_radius(k, ball.m))


def equivalent_radius(k: cb.Polytope, m_facets: int | None = None) -> float:
    """rho(K) = (Vol(K) / Vol(D_m))^(1/n)."""
    ball = cb.ball_approx(k.dim, m_facets)
    return (k.volume / ball.volume) ** (1.0 / k.dim)


def rearrange(f: LayerCake, m_facets: int | None = None) -> LayerCake:
    """f*, whose level sets are the volume-matched balls of the level sets of f."""
    bodies = tuple(rearrange_body(b, m_facets) for b in f.bodies)
    return LayerCake(f.dim, f.thresholds, bodies, normalized=f.normalized)


def concentric_cake(radii, thresholds, dim: int = 2, m_facets: int | None = None) -> LayerCake:
    """Rotation-invariant cake with D_m balls of the given (nondecreasing) radii."""
    ball = cb.ball_approx(dim, m_facets).polytope
    return LayerCake(dim, tuple(thresholds), tuple(cb.scale(ball, r) for r in radii))


def bm_margins(f: LayerCake, g: LayerCake, m_facets: int | None = None) -> list[float]:
    """rho(K_t(f) + K_t(g)) - rho(K_t(f)) - rho(K_t(g)) at every merged level.

    For layer cakes this is the level-set form of (f (+) g)* >= f* (+) g*.
    """
    out = []
    for t in lc.merge_thresholds(f, g):
        a, b = lc.level_set(f, t), lc.level_set(g, t)
        if a.is_empty or b.is_empty:
            continue
        s = cb.minkowski_sum(a, b)
        out.append(
            equivalent_radius(s, m_facets) - equivalent_radius(a, m_facets) - equivalent_radius(b, m_facets)
        )
    return out


def verify_isoperimetric(seed=0, trials=200, m_facets=None, tolerance=1e-6, dim=2) -> VerifyReport:
    """S(f) - S(f*) over random cakes, with S = n W_1 against D_m."""
    m = cb.ball_approx(dim, m_facets).m
    report = VerifyReport("isoperimetric", trials, seed, tolerance)
    report.details["ball_facets"] = m
    for trial in range(trials):
        f = random_cake(trial_rng(seed, trial), dim)
        margin = surface_area(f, m) - surface_area(rearrange(f, m), m)
        report.add(trial, margin, digest(f))
    return report


def verify_bm(seed=0, trials=200, m_facets=None, tolerance=1e-9, dim=2) -> VerifyReport:
    m = cb.ball_approx(dim, m_facets).m
    report = VerifyReport("brunn_minkowski", trials, seed, tolerance)
    report.details["ball_facets"] = m
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        f, g = random_cake(rng, dim), random_cake(rng, dim)
        margins = bm_margins(f, g, m)
        scale = max(equivalent_radius(f.support, m), equivalent_radius(g.support, m), 1.0)
        report.add(trial, min(margins) / scale, digest(f, g))
    return report


def verify_af_corollary(seed=0, trials=100, m_facets=None, tolerance=1e-6, dim=2) -> VerifyReport:
    """V(f_1..f_n) - V(f_1*..f_n*), plus the W_{n-1}(f) >= W_{n-1}(f*) consequence."""
    m = cb.ball_approx(dim, m_facets).m
    report = VerifyReport("af_corollary", trials, seed, tolerance)
    report.details["ball_facets"] = m
    worst_urysohn = math.inf
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        fs = [random_cake(rng, dim) for _ in range(dim)]
        stars = [rearrange(f, m) for f in fs]
        margin = mixed_integral(fs).value - mixed_integral(stars).value
        urysohn = quermassintegral(fs[0], dim - 1, m) - quermassintegral(stars[0], dim - 1, m)
        worst_urysohn = min(worst_urysohn, urysohn)
        report.add(trial, min(margin, urysohn), digest(*fs))
    report.details["worst_urysohn_margin"] = worst_urysohn
    return report


def shrinking_surface_sequence(k_max: int, m_facets: int | None = None):
    """Cakes f_k in R^2 with integral 1 whose surface area tends to 0.

    f_k has a top ball of radius 2^-k at level 1 over a base ball of radius
    R_k = 2^k at level delta_k, with delta_k chosen so the integral is 1.
    Returns a list of (integral, surface_area) for k = 1..k_max.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    ball = cb.ball_approx(2, m_facets)
    out = []
    for k in range(1, k_max + 1):
        top = cb.scale(ball.polytope, 2.0**-k)
        base = cb.scale(ball.polytope, 2.0**k)
        delta = (1.0 - top.volume) / (base.volume - top.volume)
        f = LayerCake(2, (1.0, delta), (top, base))
        out.append((lc.integral(f), surface_area(f, ball.m)))
    return out
