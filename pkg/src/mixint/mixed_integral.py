"""Mixed integrals of layer cakes, quermassintegrals and the functional Steiner formula.

The mixed integral V(f_1, ..., f_n) is the polarization of the integral
with respect to the quasi-sum. Three independent routes are provided:

* ``representation_formula``: sum over merged levels of
  (t_j - t_{j+1}) * V(K_{t_j}(f_1), ..., K_{t_j}(f_n));
* ``polarization``: inclusion-exclusion over integrals of quasi-sums;
* ``polynomial_fit``: least-squares fit of the homogeneous polynomial
  eps -> integral((eps_1 . f_1) (+) ... (+) (eps_m . f_m)).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import convex_body as cb
from . import layercake as lc
from .layercake import LayerCake
from .reports import VerifyReport, digest
from .sampling import random_cake, random_rotation, shrink_cake, trial_rng

METHODS = ("representation_formula", "polynomial_fit", "polarization")
DEFAULT_EPS = tuple(0.25 * k for k in range(1, 9))


@dataclass(frozen=True)
class MixedResult:
    value: float
    method: str
    residual: float = 0.0
    inputs_digest: str = ""

    def __float__(self):
        return self.value


def _check_arity(fs) -> int:
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    n = lc._check_dims(*fs)
    if len(fs) != n:
        raise ValueError(f"mixed integral in R^{n} takes exactly {n} functions, got {len(fs)}")
    return n


def mixed_integral(fs, method: str = "representation_formula") -> MixedResult:
    """V(f_1, ..., f_n) for n layer cakes in R^n (n in {2, 3})."""
    fs = list(fs)
    n = _check_arity(fs)
    key = digest(*fs)
    if method == "representation_formula":
        levels = lc.merge_thresholds(*fs) + [0.0]
        value = 0.0
        for t, t_next in zip(levels, levels[1:]):
            value += (t - t_next) * cb.mixed_volume([lc.level_set(f, t) for f in fs])
        return MixedResult(value, method, 0.0, key)
    if method == "polarization":
        total = 0.0
        for size in range(1, n + 1):
            for subset in itertools.combinations(fs, size):
                total += (-1) ** (n - size) * lc.integral(reduce(lc.quasi_sum, subset))
        return MixedResult(max(total / math.factorial(n), 0.0), method, 0.0, key)
    if method == "polynomial_fit":
        values = DEFAULT_EPS if n == 2 else (0.5, 1.0, 1.5, 2.0)
        fit = minkowski_fit(fs, list(itertools.product(values, repeat=n)))
        return MixedResult(max(fit.mixed_integral((1,) * n), 0.0), method, fit.residual, key)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def minkowski_functional(fs, eps) -> float:
    """F(eps) = integral of (eps_1 . f_1) (+) ... (+) (eps_m . f_m)."""
    parts = [lc.dilate(e, f) for e, f in zip(eps, fs)]
    return lc.integral(reduce(lc.quasi_sum, parts))


def _multinomial(exps) -> int:
    out = math.factorial(sum(exps))
    for e in exps:
        out //= math.factorial(e)
    return out


@dataclass
class MinkowskiFit:
    """Homogeneous degree-n polynomial fitted to F on an eps grid."""

    n: int
    exponents: list
    coefficients: np.ndarray
    residual: float
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def predict(self, eps) -> np.ndarray:
        eps = np.atleast_2d(np.asarray(eps, dtype=float))
        return _design(eps, self.exponents) @ self.coefficients

    def coefficient(self, exps) -> float:
        return float(self.coefficients[self.exponents.index(tuple(exps))])

    def mixed_integral(self, exps) -> float:
        """V(f_1[exps_1], ..., f_m[exps_m]) = coefficient / multinomial(n; exps)."""
        return self.coefficient(exps) / _multinomial(exps)


def _monomials(m: int, n: int) -> list:
    out = []
    for combo in itertools.combinations_with_replacement(range(m), n):
        exps = [0] * m
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return sorted(out, reverse=True)


def _design(eps: np.ndarray, exponents) -> np.ndarray:
    return np.column_stack([np.prod(eps ** np.array(e), axis=1) for e in exponents])


def minkowski_fit(fs, grid) -> MinkowskiFit:
    """Least-squares fit of F against all degree-n monomials in m variables.

    ``residual`` is the largest relative misfit over the grid.
    """
    fs = list(fs)
    n = lc._check_dims(*fs)
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.shape[1] != len(fs):
        raise ValueError("each grid point needs one eps per function")
    if np.any(grid <= 0):
        raise ValueError("eps values must be positive")
    exponents = _monomials(len(fs), n)
    if len(grid) < len(exponents):
        raise ValueError(f"grid of {len(grid)} points cannot determine {len(exponents)} coefficients")
    values = np.array([minkowski_functional(fs, e) for e in grid])
    a = _design(grid, exponents)
    if np.linalg.matrix_rank(a) < len(exponents):
        raise ValueError("eps grid is degenerate for this polynomial degree")
    coef, *_ = np.linalg.lstsq(a, values, rcond=None)
    scale = np.maximum(np.abs(values), np.finfo(float).tiny)
    residual = float(np.max(np.abs(a @ coef - values) / scale))
    return MinkowskiFit(n, exponents, coef, residual, grid, values)


def quermassintegral(f: LayerCake, k: int, m_facets: int | None = None) -> float:
    """W_k(f) = V(f[n-k], 1_D[k]) with D the inscribed ball approximation."""
    n = f.dim
    if not 0 <= k <= n:
        raise ValueError(f"quermassintegral index must satisfy 0 <= k <= {n}, got {k}")
    ball = lc.indicator(cb.ball_approx(n, m_facets).polytope)
    return mixed_integral([f] * (n - k) + [ball] * k).value


def surface_area(f: LayerCake, m_facets: int | None = None) -> float:
    """S(f) = n W_1(f)."""
    return f.dim * quermassintegral(f, 1, m_facets)


@dataclass
class SteinerCoefficients:
    n: int
    coefficients: np.ndarray
    ball_facets: int
    residual: float = 0.0
    direct: np.ndarray | None = None
    discrepancy: float = 0.0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "W": [float(w) for w in self.coefficients],
            "ball_facets": self.ball_facets,
            "fit_residual": self.residual,
            "direct_W": None if self.direct is None else [float(w) for w in self.direct],
            "fit_vs_direct": self.discrepancy,
        }


def steiner_expand(f: LayerCake, eps_grid=DEFAULT_EPS, m_facets: int | None = None) -> SteinerCoefficients:
    """Fit integral(f (+) eps . 1_D) = sum_i binom(n, i) W_i eps^i and compare with direct W_i."""
    n = f.dim
    eps = np.asarray(sorted(set(float(e) for e in eps_grid)))
    if len(eps) < n + 1:
        raise ValueError(f"need at least {n + 1} distinct eps values, got {len(eps)}")
    if np.any(eps <= 0):
        raise ValueError("eps values must be positive")
    ball_body = cb.ball_approx(n, m_facets)
    ball = lc.indicator(ball_body.polytope)
    values = np.array([lc.integral(lc.quasi_sum(f, lc.dilate(e, ball))) for e in eps])
    a = np.vander(eps, n + 1, increasing=True)
    coef, *_ = np.linalg.lstsq(a, values, rcond=None)
    residual = float(np.max(np.abs(a @ coef - values) / np.abs(values)))
    w = coef / np.array([math.comb(n, i) for i in range(n + 1)])
    direct = np.array([quermassintegral(f, i, ball_body.m) for i in range(n + 1)])
    return SteinerCoefficients(n, w, ball_body.m, residual, direct, float(np.max(np.abs(w - direct))))


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def verify_polynomiality(seed: int = 0, trials: int = 50, tolerance: float = 1e-9, grid_values=None) -> VerifyReport:
    """Fit F(eps_1, eps_2) for random 2D pairs; margin is minus the worst defect."""
    grid_values = np.linspace(0.25, 2.0, 5) if grid_values is None else np.asarray(grid_values)
    grid = list(itertools.product(grid_values, repeat=2))
    report = VerifyReport("polynomiality", trials, seed, tolerance)
    worst = {"residual": 0.0, "off_grid": 0.0, "min_coefficient": math.inf, "symmetry": 0.0}
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        f = random_cake(rng, 2, n_layers=2)
        g = random_cake(rng, 2, n_layers=2)
        fit = minkowski_fit([f, g], grid)
        off = rng.uniform(0.3, 1.9, size=(5, 2))
        truth = np.array([minkowski_functional([f, g], e) for e in off])
        off_err = float(np.max(np.abs(fit.predict(off) - truth) / np.abs(truth)))
        swapped = minkowski_fit([g, f], grid)
        sym = float(np.max(np.abs(swapped.coefficients[::-1] - fit.coefficients)) / np.max(np.abs(fit.coefficients)))
        cmin = float(np.min(fit.coefficients))
        worst["residual"] = max(worst["residual"], fit.residual)
        worst["off_grid"] = max(worst["off_grid"], off_err)
        worst["min_coefficient"] = min(worst["min_coefficient"], cmin)
        worst["symmetry"] = max(worst["symmetry"], sym)
        report.add(trial, -max(fit.residual, off_err, sym, -cmin), digest(f, g))
    report.details.update(worst)
    return report


def _segment_cake(direction, lengths, thresholds) -> LayerCake:
    d = np.asarray(direction, dtype=float)
    bodies = tuple(cb.hull([-0.5 * s * d, 0.5 * s * d], 2) for s in lengths)
    return LayerCake(2, thresholds, bodies)


def _box_pair(rng):
    """Two cakes of axis boxes sharing y-ranges and thresholds, so that max(f, g) stays quasi-concave."""
    n_layers = int(rng.integers(1, 4))
    a, c, b, d = np.sort(rng.uniform(-2, 2, size=4))
    y0, y1 = np.sort(rng.uniform(-1, 1, size=2))
    grow = np.concatenate([[0.0], np.cumsum(rng.uniform(0.05, 0.5, size=n_layers - 1))])
    ts = (1.0, *np.sort(rng.uniform(0.05, 0.95, size=n_layers - 1))[::-1].tolist())
    fb = tuple(cb.box([a - s, y0 - s], [b + s, y1 + s]) for s in grow)
    gb = tuple(cb.box([c - s, y0 - s], [d + s, y1 + s]) for s in grow)
    return LayerCake(2, ts, fb), LayerCake(2, ts, gb)


def verify_v_properties(seed: int = 0, trials: int = 20, tolerance: float = 1e-9) -> VerifyReport:
    """Monotonicity, rigid/GL invariance, vanishing and valuation checks on random 2D cakes.

    Each per-property margin is a relative defect (negative means violated).
    """
    report = VerifyReport("v_properties", trials, seed, tolerance)
    worst = dict.fromkeys(["monotonicity", "rigid_invariance", "gl_scaling", "vanishing", "valuation"], math.inf)
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        f1, f2 = random_cake(rng), random_cake(rng)
        v = mixed_integral([f1, f2]).value
        margins = {}

        g1, g2 = shrink_cake(rng, f1), shrink_cake(rng, f2)
        margins["monotonicity"] = (v - mixed_integral([g1, g2]).value) / max(v, 1.0)

        rot = random_rotation(rng, 2)
        moved = [lc.transform(f, rot, rng.normal(size=2) * 3) for f in (f1, f2)]
        margins["rigid_invariance"] = -_relative(mixed_integral(moved).value, v)

        u = rng.normal(size=(2, 2))
        while abs(np.linalg.det(u)) < 0.1:
            u = rng.normal(size=(2, 2))
        mapped = [lc.transform(f, u) for f in (f1, f2)]
        margins["gl_scaling"] = -_relative(mixed_integral(mapped).value, abs(np.linalg.det(u)) * v)

        direction = rng.normal(size=2)
        direction /= np.linalg.norm(direction)
        ts = (1.0, 0.4)
        s1 = _segment_cake(direction, np.sort(rng.uniform(0.2, 2, 2)), ts)
        s2 = _segment_cake(direction, np.sort(rng.uniform(0.2, 2, 2)), (1.0, 0.7))
        turn = rng.uniform(0.3, math.pi - 0.3)
        other = [math.cos(turn) * direction[0] - math.sin(turn) * direction[1],
                 math.sin(turn) * direction[0] + math.cos(turn) * direction[1]]
        s3 = _segment_cake(other, np.sort(rng.uniform(0.2, 2, 2)), ts)
        zero = mixed_integral([s1, s2]).value
        positive = mixed_integral([s1, s3]).value
        margins["vanishing"] = min(-zero, 0.0 if positive > 1e-9 else -1.0)

        h = random_cake(rng)
        a, b = _box_pair(rng)
        rot2 = random_rotation(rng, 2)
        shift = rng.normal(size=2)
        a, b = lc.transform(a, rot2, shift), lc.transform(b, rot2, shift)
        join = lc.lattice_max(a, b)
        if not join.ok:
            margins["valuation"] = -1.0
        else:
            meet = lc.lattice_min(a, b)
            val = math.inf
            for phi in (lambda f: mixed_integral([f, h]).value, lambda f: lc.integral(f)):
                lhs = phi(join.cake) + phi(meet)
                rhs = phi(a) + phi(b)
                val = min(val, -_relative(lhs, rhs))
            margins["valuation"] = val

        for k, m in margins.items():
            worst[k] = min(worst[k], m)
        report.add(trial, min(margins.values()), digest(f1, f2, h, a, b))
    report.details.update(worst)
    return report
