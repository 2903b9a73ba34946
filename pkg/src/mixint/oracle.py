"""Brute-force references used to check the exact kernels.

Nothing here shares code paths with the kernels it checks: volumes come
from rejection sampling, sums and convolutions from exhaustive search over
grid decompositions y + z = x.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from . import convex_body as cb
from .reports import VerifyReport, digest
from .sampling import random_polytope, trial_rng


def mc_volume(p: cb.Polytope, samples: int = 10**6, seed: int = 0, batch: int = 200_000):
    """Rejection-sampling volume estimate and its binomial standard error."""
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    if p.is_empty or p.affine_rank < p.dim:
        return 0.0, 0.0
    rng = trial_rng(seed, 0)
    lo, hi = p.vertices.min(axis=0), p.vertices.max(axis=0)
    box = float(np.prod(hi - lo))
    hits = 0
    done = 0
    while done < samples:
        size = min(batch, samples - done)
        pts = lo + (hi - lo) * rng.uniform(size=(size, p.dim))
        hits += int(np.count_nonzero(p.contains(pts, tol=0.0)))
        done += size
    frac = hits / samples
    return box * frac, box * math.sqrt(frac * (1 - frac) / samples)


def grid_axis(extent: float, step: float) -> np.ndarray:
    """Symmetric grid -extent..extent containing 0."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    half = int(round(extent / step))
    return step * np.arange(-half, half + 1)


def sample_on_grid(f, extent: float, step: float, dim: int):
    axis = grid_axis(extent, step)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    vals = np.asarray(f(pts), dtype=float).reshape((len(axis),) * dim)
    return axis, vals


def sup_convolve_grid(fv: np.ndarray, gv: np.ndarray, combine) -> np.ndarray:
    """out[x] = max over grid y of combine(f[y], g[x - y]); g is zero off the grid."""
    n = fv.shape[0]
    dim = fv.ndim
    c = (n - 1) // 2
    padded = np.zeros(tuple(3 * n for _ in range(dim)))
    padded[tuple(slice(n, 2 * n) for _ in range(dim))] = gv
    out = np.zeros_like(fv)
    for idx in itertools.product(range(n), repeat=dim):
        u = fv[idx]
        if u <= 0:
            continue
        window = padded[tuple(slice(n + c - j, 2 * n + c - j) for j in idx)]
        np.maximum(out, combine(u, window), out=out)
    return out


def grid_quasi_sum(f, g, grid_extent: float, grid_step: float, dim: int = 2):
    """sup_{y+z=x} min(f(y), g(z)) over grid decompositions; returns (axis, values)."""
    axis, fv = sample_on_grid(f, grid_extent, grid_step, dim)
    _, gv = sample_on_grid(g, grid_extent, grid_step, dim)
    return axis, sup_convolve_grid(fv, gv, np.minimum)


def alpha_combine(alpha: float):
    """(u^alpha + v^alpha - 1)^(1/alpha) with its alpha = 0 and -inf limits; 0 if u or v is 0."""
    if alpha == -math.inf:
        return np.minimum
    if alpha == 0:
        return np.multiply

    def combine(u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        ok = (u > 0) & (v > 0)
        s = np.where(ok, u, 1.0) ** alpha + np.where(ok, v, 1.0) ** alpha - 1.0
        return np.where(ok, s ** (1.0 / alpha), 0.0)

    return combine


def grid_alpha_sum(f, g, alpha: float, grid_extent: float, grid_step: float, dim: int = 1):
    """sup_{y+z=x} of the alpha-power combination of f(y), g(z) over grid decompositions."""
    axis, fv = sample_on_grid(f, grid_extent, grid_step, dim)
    _, gv = sample_on_grid(g, grid_extent, grid_step, dim)
    return axis, sup_convolve_grid(fv, gv, alpha_combine(alpha))


def grid_inf_conv(phi, psi, r_max: float, step: float):
    """inf over grid y of phi(|y|) + psi(|x - y|), for x on the grid in [0, r_max]."""
    ys = grid_axis(r_max, step)
    xs = ys[ys >= -1e-15]
    pv = np.asarray(phi(np.abs(ys)), dtype=float)
    qv = np.asarray(psi(np.abs(xs[:, None] - ys[None, :])), dtype=float)
    return xs, np.min(pv[None, :] + qv, axis=1)


def verify_oracle(seed=0, trials=20, samples=10**6, tolerance=3.0) -> VerifyReport:
    """Exact volumes against Monte Carlo; margin = tolerance - |z-score| so pass means within 3 sigma."""
    report = VerifyReport("oracle", trials, seed, 0.0)
    report.details["sigma_bound"] = tolerance
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        dim = 2 + trial % 2
        p = random_polytope(rng, dim, n_points=int(rng.integers(4, 12)))
        est, se = mc_volume(p, samples, seed=seed * 100_003 + trial)
        z = abs(est - p.volume) / se if se > 0 else 0.0
        report.add(trial, tolerance - z, digest(p))
    return report
