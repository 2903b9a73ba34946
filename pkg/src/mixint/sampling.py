"""Seeded random inputs for verification campaigns.

Every trial draws from its own Philox stream keyed by (seed, trial index),
so campaign results do not depend on the order trials are run in.
"""
from __future__ import annotations

import numpy as np

from . import convex_body as cb
from .layercake import LayerCake


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Counter-based generator for one trial of a seeded campaign."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(ss))


def random_polytope(rng, dim=2, n_points=8, radius=1.0, center=None) -> cb.Polytope:
    """Hull of uniform points in a ball; redrawn until full-dimensional."""
    center = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    while True:
        d = rng.normal(size=(n_points, dim))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        r = radius * rng.uniform(0, 1, size=(n_points, 1)) ** (1 / dim)
        p = cb.hull(center + d * r, dim)
        if p.volume > 1e-3 * radius**dim:
            return p


def random_cake(rng, dim=2, n_layers=None, radius=1.0, n_points=6) -> LayerCake:
    """Random normalized cake; each layer is the hull of the previous one plus new points."""
    if n_layers is None:
        n_layers = int(rng.integers(1, 4))
    body = random_polytope(rng, dim, n_points, radius=0.5 * radius)
    bodies = [body]
    for _ in range(n_layers - 1):
        extra = random_polytope(rng, dim, n_points, radius=radius * rng.uniform(0.6, 1.2))
        body = cb.hull(np.vstack([body.vertices, extra.vertices]), dim)
        bodies.append(body)
    inner = np.sort(rng.uniform(0.05, 0.95, size=n_layers - 1))[::-1]
    while n_layers > 2 and np.min(-np.diff(inner)) < 1e-3:
        inner = np.sort(rng.uniform(0.05, 0.95, size=n_layers - 1))[::-1]
    return LayerCake(dim, (1.0, *inner.tolist()), tuple(bodies))


def shrink_cake(rng, f: LayerCake) -> LayerCake:
    """A cake g <= f: every layer contracted toward a point of the top layer."""
    top = f.bodies[0].vertices
    w = rng.dirichlet(np.ones(len(top)))
    c = w @ top
    s = rng.uniform(0.3, 0.95)
    bodies = [cb.Polytope(f.dim, c + s * (b.vertices - c)) for b in f.bodies]
    return LayerCake(f.dim, f.thresholds, tuple(bodies), normalized=f.normalized)


def random_rotation(rng, dim) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
