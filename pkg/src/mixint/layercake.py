"""Quasi-concave step functions ("layer cakes") and their calculus.

A layer cake with thresholds t_1 = 1 > t_2 > ... > t_N > 0 and nested
bodies B_1 in B_2 in ... in B_N is the function

    f(x) = max{t_i : x in B_i},   f(x) = 0 outside B_N,

so the upper level set {f >= t} is B_i for the largest i with t_i >= t.
Quasi-sum and dilation act on level sets by Minkowski addition and
scaling, which makes every identity below exact on this representation.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import convex_body as cb
from .convex_body import Polytope

THRESHOLD_TOL = 1e-15
NEST_TOL = 1e-10


class NotNormalizedError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LayerCake:
    dim: int
    thresholds: tuple
    bodies: tuple
    normalized: bool = True

    def __post_init__(self):
        t = tuple(float(x) for x in self.thresholds)
        bodies = tuple(self.bodies)
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "bodies", bodies)
        if len(t) != len(bodies):
            raise ValueError("thresholds and bodies must have the same length")
        if any(b.dim != self.dim for b in bodies):
            raise cb.DimensionError("all layers must share the cake's dimension")
        if any(not (0.0 < x <= 1.0) for x in t):
            raise ValueError(f"thresholds must lie in (0, 1], got {t}")
        if any(a <= b for a, b in zip(t, t[1:])):
            raise ValueError(f"thresholds must be strictly decreasing, got {t}")
        if any(b.is_empty for b in bodies):
            raise ValueError("layers must be nonempty")
        if self.normalized and (not t or t[0] != 1.0):
            raise NotNormalizedError("a normalized cake needs a top layer at t = 1")
        for inner, outer in zip(bodies, bodies[1:]):
            if not cb.contains_body(outer, inner, tol=NEST_TOL * max(1.0, _extent(outer))):
                raise ValueError("layers are not nested")

    @property
    def support(self) -> Polytope:
        return self.bodies[-1] if self.bodies else cb.empty(self.dim)

    @property
    def layers(self):
        return list(zip(self.thresholds, self.bodies))

    def __call__(self, x):
        return evaluate(self, x)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "layers": [{"t": t, "body": b.to_dict()} for t, b in self.layers],
        }

    @classmethod
    def from_dict(cls, data: dict) -> LayerCake:
        dim = int(data["dim"])
        layers = sorted(data["layers"], key=lambda layer: -float(layer["t"]))
        return cls(
            dim,
            tuple(float(layer["t"]) for layer in layers),
            tuple(Polytope.from_dict(layer["body"]) for layer in layers),
        )

    def __repr__(self):
        flag = "" if self.normalized else ", normalized=False"
        return f"LayerCake(dim={self.dim}, thresholds={self.thresholds}{flag})"


def _extent(p: Polytope) -> float:
    if p.is_empty:
        return 0.0
    return float(np.max(np.abs(p.vertices)))


def indicator(body: Polytope) -> LayerCake:
    """The indicator function 1_K as a one-layer cake."""
    return LayerCake(body.dim, (1.0,), (body,))


def point_mass(dim: int) -> LayerCake:
    """1_{0}, the neutral element of the quasi-sum."""
    return indicator(cb.point(np.zeros(dim)))


def merge_thresholds(*cakes: LayerCake) -> list[float]:
    """Sorted (decreasing) union of threshold lists, deduplicated at 1e-15."""
    values = sorted({t for f in cakes for t in f.thresholds}, reverse=True)
    out: list[float] = []
    for t in values:
        if not out or out[-1] - t > THRESHOLD_TOL:
            out.append(t)
    return out


def _check_dims(*cakes: LayerCake) -> int:
    dims = {f.dim for f in cakes}
    if len(dims) != 1:
        raise cb.DimensionError(f"cakes have different dimensions {sorted(dims)}")
    return dims.pop()


def evaluate(f: LayerCake, x):
    """f(x) for a single point or an (N, dim) array of points."""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    if pts.shape[-1] != f.dim:
        raise cb.DimensionError(f"points must have dimension {f.dim}")
    pts = pts.reshape(-1, f.dim)
    out = np.zeros(len(pts))
    for t, body in reversed(f.layers):
        out[body.contains(pts)] = t
    return float(out[0]) if single else out


def level_set(f: LayerCake, t: float) -> Polytope:
    """K_t(f) = {x : f(x) >= t} for 0 < t <= 1."""
    if not (0.0 < t <= 1.0):
        raise ValueError(f"level must lie in (0, 1], got {t}")
    idx = -1
    for i, ti in enumerate(f.thresholds):
        if ti >= t - THRESHOLD_TOL:
            idx = i
        else:
            break
    return f.bodies[idx] if idx >= 0 else cb.empty(f.dim)


def _build(dim: int, levels, bodies, normalized=True) -> LayerCake:
    keep = [(t, b) for t, b in zip(levels, bodies) if not b.is_empty]
    return LayerCake(dim, tuple(t for t, _ in keep), tuple(b for _, b in keep), normalized=normalized)


def quasi_sum(f: LayerCake, g: LayerCake) -> LayerCake:
    """f (+) g, whose level sets are K_t(f) + K_t(g)."""
    dim = _check_dims(f, g)
    levels = merge_thresholds(f, g)
    bodies = [cb.minkowski_sum(level_set(f, t), level_set(g, t)) for t in levels]
    return _build(dim, levels, bodies, normalized=f.normalized and g.normalized)


def dilate(lam: float, f: LayerCake) -> LayerCake:
    """lam (.) f, i.e. x -> f(x / lam); lam = 0 gives the indicator of {0}."""
    if lam < 0:
        raise ValueError(f"dilation factor must be non-negative, got {lam}")
    bodies = [cb.scale(b, lam) for b in f.bodies]
    return LayerCake(f.dim, f.thresholds, tuple(bodies), normalized=f.normalized)


def transform(f: LayerCake, u=None, shift=None) -> LayerCake:
    """(u f)(x) = f(u^{-1}(x - shift)): every layer mapped by x -> u x + shift."""
    u = np.eye(f.dim) if u is None else u
    bodies = [cb.affine_map(b, u, shift) for b in f.bodies]
    return LayerCake(f.dim, f.thresholds, tuple(bodies), normalized=f.normalized)


def integral(f: LayerCake) -> float:
    """Lebesgue integral: sum of (t_i - t_{i+1}) Vol(B_i), with t_{N+1} = 0."""
    t = list(f.thresholds) + [0.0]
    return float(sum((t[i] - t[i + 1]) * b.volume for i, b in enumerate(f.bodies)))


class LatticeStatus(enum.Enum):
    QC = "qc"
    NOT_QC = "not_qc"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class LatticeResult:
    status: LatticeStatus
    cake: LayerCake | None = None
    failed_level: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status is LatticeStatus.QC


def lattice_max(f: LayerCake, g: LayerCake, tol: float = 1e-9) -> LatticeResult:
    """max(f, g) when it is again quasi-concave.

    At each merged level the union K_t(f) u K_t(g) must be convex, which is
    tested as Vol(hull) = Vol(A) + Vol(B) - Vol(A n B).
    """
    dim = _check_dims(f, g)
    if dim != 2:
        raise cb.DimensionError("lattice_max supports 2D cakes only")
    levels = merge_thresholds(f, g)
    bodies = []
    for t in levels:
        a, b = level_set(f, t), level_set(g, t)
        if a.is_empty or b.is_empty:
            bodies.append(b if a.is_empty else a)
            continue
        union = cb.hull(np.vstack([a.vertices, b.vertices]), dim)
        if union.volume == 0.0:
            return LatticeResult(LatticeStatus.DEGENERATE, failed_level=t)
        expected = a.volume + b.volume - cb.intersect(a, b).volume
        if abs(union.volume - expected) > tol * max(1.0, union.volume):
            return LatticeResult(
                LatticeStatus.NOT_QC,
                failed_level=t,
                details={"hull_volume": union.volume, "union_volume": expected},
            )
        bodies.append(union)
    return LatticeResult(LatticeStatus.QC, _build(dim, levels, bodies, f.normalized or g.normalized))


def lattice_min(f: LayerCake, g: LayerCake) -> LayerCake:
    """min(f, g); empty top layers are dropped, so the result may have max < 1."""
    dim = _check_dims(f, g)
    if dim != 2:
        raise cb.DimensionError("lattice_min supports 2D cakes only")
    levels = merge_thresholds(f, g)
    bodies = [cb.intersect(level_set(f, t), level_set(g, t)) for t in levels]
    keep = [(t, b) for t, b in zip(levels, bodies) if not b.is_empty]
    normalized = bool(keep) and keep[0][0] == 1.0 and f.normalized and g.normalized
    return _build(dim, [t for t, _ in keep], [b for _, b in keep], normalized=normalized)


def layer_hausdorff(f: LayerCake, g: LayerCake) -> float:
    """Largest Hausdorff distance between K_t(f) and K_t(g) over merged levels."""
    return max(
        (cb.hausdorff_distance(level_set(f, t), level_set(g, t)) for t in merge_thresholds(f, g)),
        default=0.0,
    )
