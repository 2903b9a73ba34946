"""Polytope kernel in R^2 and R^3: hulls, Minkowski sums, volumes, mixed volumes.

Bodies are stored by their extreme vertices only. All tolerances are fixed
module constants so results are reproducible; comparisons between bodies
should go through :func:`hausdorff_distance`, since Minkowski sums permute
vertex orderings.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull

DEDUP_TOL = 1e-12
ORIENT_TOL = 1e-10
COPLANAR_TOL = 1e-10
CONTAIN_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when bodies of different ambient dimensions are combined."""


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(points: np.ndarray) -> np.ndarray:
    """Monotone chain; returns extreme points counter-clockwise."""
    pts = np.unique(points, axis=0)
    if len(pts) == 1:
        return pts
    spread = float(np.max(pts.max(axis=0) - pts.min(axis=0)))
    tol = ORIENT_TOL * spread * spread
    pts = [tuple(p) for p in pts]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) > 1 and _cross2(out[-2], out[-1], p) <= tol:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    ring = lower[:-1] + upper[:-1]
    if len(ring) == 0:
        ring = [pts[0]]
    out = np.array(ring, dtype=float)
    return _dedup_ring(out)


def _dedup_ring(v: np.ndarray) -> np.ndarray:
    if len(v) < 2:
        return v
    keep = [0]
    for i in range(1, len(v)):
        if np.linalg.norm(v[i] - v[keep[-1]]) > DEDUP_TOL:
            keep.append(i)
    if len(keep) > 1 and np.linalg.norm(v[keep[-1]] - v[keep[0]]) <= DEDUP_TOL:
        keep.pop()
    return v[keep]


def _affine_frame(points: np.ndarray, tol: float = COPLANAR_TOL):
    """Orthonormal frame of the affine hull: (origin, basis rows, rank)."""
    origin = points.mean(axis=0)
    centered = points - origin
    if len(points) == 1:
        return origin, np.zeros((0, points.shape[1])), 0
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(float(s[0]), 1e-300)
    # singular values are in length*sqrt(count) units; compare relative to the largest
    rank = int(np.sum(s > tol * scale)) if s[0] > DEDUP_TOL else 0
    return origin, vt[:rank], rank


def _hull_points(points: np.ndarray, dim: int) -> np.ndarray:
    if dim == 2:
        return _hull_2d(points)
    origin, basis, rank = _affine_frame(points)
    if rank == 3:
        hull = ConvexHull(points)
        return points[np.sort(hull.vertices)]
    if rank == 0:
        return origin[None, :]
    coords = (points - origin) @ basis.T
    if rank == 1:
        lo, hi = int(np.argmin(coords[:, 0])), int(np.argmax(coords[:, 0]))
        return points[[lo, hi]]
    ring = _hull_2d(coords)
    # map back to the original points so no lifting error is introduced
    idx = [int(np.argmin(np.linalg.norm(coords - c, axis=1))) for c in ring]
    return points[idx]


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of finitely many points in R^2 or R^3.

    ``vertices`` holds only extreme points; in 2D full-dimensional bodies
    they are ordered counter-clockwise. An empty vertex array denotes the
    distinguished empty body, which has volume 0.
    """

    dim: int
    vertices: np.ndarray

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise DimensionError(f"ambient dimension must be 2 or 3, got {self.dim}")
        v = np.asarray(self.vertices, dtype=float).reshape(-1, self.dim)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def ambient_dim(self) -> int:
        return self.dim

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    @cached_property
    def _frame(self):
        return _affine_frame(self.vertices)

    @property
    def affine_rank(self) -> int:
        if self.is_empty:
            return -1
        return self._frame[2]

    @cached_property
    def _qhull(self):
        return ConvexHull(self.vertices)

    @cached_property
    def _local(self) -> np.ndarray:
        """Vertices in the affine frame, counter-clockwise when rank is 2."""
        origin, basis, rank = self._frame
        coords = (self.vertices - origin) @ basis.T
        if rank == 2:
            coords = _hull_2d(coords)
        return coords

    @cached_property
    def volume(self) -> float:
        if self.is_empty or self.affine_rank < self.dim:
            return 0.0
        if self.dim == 2:
            x, y = self.vertices[:, 0], self.vertices[:, 1]
            return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
        c = self.vertices.mean(axis=0)
        tri = self.vertices[self._qhull.simplices] - c
        dets = np.einsum("ij,ij->i", tri[:, 0], np.cross(tri[:, 1], tri[:, 2]))
        return float(np.sum(np.abs(dets)) / 6.0)

    def contains(self, points, tol: float = CONTAIN_TOL):
        """Boolean membership for one point (scalar result) or an (N, dim) array."""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = pts.reshape(-1, self.dim)
        if self.is_empty:
            out = np.zeros(len(pts), dtype=bool)
        elif self.affine_rank == 3:
            eq = self._qhull.equations
            out = np.all(pts @ eq[:, :3].T + eq[:, 3] <= tol, axis=1)
        else:
            origin, basis, rank = self._frame
            rel = pts - origin
            coords = rel @ basis.T
            out = _contains_local(self._local, coords, rank, tol)
            if rank < self.dim:
                off = np.linalg.norm(rel - coords @ basis, axis=1)
                out &= off <= max(tol, DEDUP_TOL * (1.0 + float(np.abs(origin).max())))
        return bool(out[0]) if single else out

    def distance(self, points) -> np.ndarray:
        """Euclidean distance from each point to the body (0 inside)."""
        pts = np.asarray(points, dtype=float).reshape(-1, self.dim)
        if self.is_empty:
            return np.full(len(pts), np.inf)
        if self.affine_rank == 3:
            inside = self.contains(pts, tol=0.0)
            tris = self.vertices[self._qhull.simplices]
            d = np.min(np.stack([_point_triangle_distance(pts, t) for t in tris]), axis=0)
            return np.where(inside, 0.0, d)
        origin, basis, rank = self._frame
        rel = pts - origin
        coords = rel @ basis.T
        off = np.linalg.norm(rel - coords @ basis, axis=1)
        return np.hypot(off, _distance_local(self._local, coords, rank))

    def support(self, directions) -> np.ndarray:
        """Support function h(u) = max <v, u> over vertices."""
        u = np.asarray(directions, dtype=float).reshape(-1, self.dim)
        if self.is_empty:
            return np.full(len(u), -np.inf)
        return np.max(u @ self.vertices.T, axis=1)

    def translate(self, shift) -> Polytope:
        shift = np.asarray(shift, dtype=float)
        if self.is_empty:
            return self
        return Polytope(self.dim, self.vertices + shift)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> Polytope:
        return hull(data["vertices"], int(data["dim"]))

    def __repr__(self):
        return f"Polytope(dim={self.dim}, n_vertices={len(self.vertices)}, volume={self.volume:.6g})"


def _contains_local(local: np.ndarray, coords: np.ndarray, rank: int, tol: float) -> np.ndarray:
    if rank == 0:
        return np.ones(len(coords), dtype=bool)
    if rank == 1:
        lo, hi = local[:, 0].min(), local[:, 0].max()
        return (coords[:, 0] >= lo - tol) & (coords[:, 0] <= hi + tol)
    a = local
    b = np.roll(local, -1, axis=0)
    edge = b - a
    length = np.linalg.norm(edge, axis=1)
    cross = edge[None, :, 0] * (coords[:, None, 1] - a[None, :, 1]) - edge[None, :, 1] * (
        coords[:, None, 0] - a[None, :, 0]
    )
    return np.all(cross >= -tol * length[None, :], axis=1)


def _segment_distance(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.linalg.norm(pts - a, axis=1)
    s = np.clip((pts - a) @ ab / denom, 0.0, 1.0)
    return np.linalg.norm(pts - (a + s[:, None] * ab), axis=1)


def _distance_local(local, coords, rank) -> np.ndarray:
    if rank == 0:
        return np.zeros(len(coords))
    if rank == 1:
        lo, hi = local[:, 0].min(), local[:, 0].max()
        return np.maximum(0.0, np.maximum(lo - coords[:, 0], coords[:, 0] - hi))
    inside = _contains_local(local, coords, 2, 0.0)
    n = len(local)
    d = np.min(
        np.stack([_segment_distance(coords, local[i], local[(i + 1) % n]) for i in range(n)]), axis=0
    )
    return np.where(inside, 0.0, d)


def _point_triangle_distance(pts: np.ndarray, tri: np.ndarray) -> np.ndarray:
    a, b, c = tri
    n = np.cross(b - a, c - a)
    nn = float(n @ n)
    edges = np.min(
        np.stack([_segment_distance(pts, a, b), _segment_distance(pts, b, c), _segment_distance(pts, c, a)]),
        axis=0,
    )
    if nn == 0.0:
        return edges
    h = (pts - a) @ n / nn
    proj = pts - h[:, None] * n
    # barycentric sign test on the projected point
    s1 = np.cross(b - a, proj - a) @ n
    s2 = np.cross(c - b, proj - b) @ n
    s3 = np.cross(a - c, proj - c) @ n
    inside = ((s1 >= 0) & (s2 >= 0) & (s3 >= 0)) | ((s1 <= 0) & (s2 <= 0) & (s3 <= 0))
    return np.where(inside, np.abs(h) * math.sqrt(nn), edges)


def empty(dim: int) -> Polytope:
    """The distinguished empty body."""
    return Polytope(dim, np.zeros((0, dim)))


def point(x) -> Polytope:
    x = np.asarray(x, dtype=float)
    return Polytope(len(x), x[None, :])


def hull(points, dim: int) -> Polytope:
    """Hull-reduced polytope spanned by ``points``."""
    try:
        pts = np.asarray(points, dtype=float)
    except ValueError as exc:
        raise DimensionError("points have mixed dimensions") from exc
    if pts.size == 0:
        raise ValueError("hull of an empty point set")
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise DimensionError(f"expected points of dimension {dim}, got array of shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    return Polytope(dim, _hull_points(pts, dim))


def box(lo, hi) -> Polytope:
    """Axis-aligned box [lo_1, hi_1] x ... x [lo_n, hi_n]."""
    lo, hi = np.asarray(lo, dtype=float), np.asarray(hi, dtype=float)
    corners = [np.where(mask, hi, lo) for mask in itertools.product((False, True), repeat=len(lo))]
    return hull(corners, len(lo))


def _check_same_dim(*bodies: Polytope) -> int:
    dims = {b.dim for b in bodies}
    if len(dims) != 1:
        raise DimensionError(f"bodies have different ambient dimensions {sorted(dims)}")
    return dims.pop()


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    dim = _check_same_dim(p, q)
    if p.is_empty or q.is_empty:
        return empty(dim)
    sums = (p.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, dim)
    return hull(sums, dim)


def scale(p: Polytope, lam: float) -> Polytope:
    if lam < 0:
        raise ValueError(f"scale factor must be non-negative, got {lam}")
    if p.is_empty:
        return p
    if lam == 0:
        return point(np.zeros(p.dim))
    return hull(p.vertices * lam, p.dim)


def affine_map(p: Polytope, u, shift=None) -> Polytope:
    """Image of ``p`` under x -> u x + shift, for invertible u."""
    u = np.asarray(u, dtype=float)
    if u.shape != (p.dim, p.dim):
        raise DimensionError(f"map must be {p.dim}x{p.dim}, got {u.shape}")
    if abs(np.linalg.det(u)) <= 1e-12:
        raise ValueError("affine map is singular")
    shift = np.zeros(p.dim) if shift is None else np.asarray(shift, dtype=float)
    if p.is_empty:
        return p
    return hull(p.vertices @ u.T + shift, p.dim)


def volume(p: Polytope) -> float:
    return p.volume


def mixed_volume(bodies) -> float:
    """Mixed volume V(K_1, ..., K_n) by inclusion-exclusion polarization.

    n! V(K_1..K_n) = sum over nonempty subsets S of (-1)^(n-|S|) Vol(sum_{i in S} K_i).
    """
    bodies = list(bodies)
    if not bodies:
        raise ValueError("mixed_volume needs at least one body")
    n = _check_same_dim(*bodies)
    if len(bodies) != n:
        raise ValueError(f"mixed volume in R^{n} takes exactly {n} bodies, got {len(bodies)}")
    if any(b.is_empty for b in bodies):
        return 0.0
    sums: dict[int, Polytope] = {}
    total = 0.0
    for mask in range(1, 1 << n):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        body = bodies[i] if rest == 0 else minkowski_sum(sums[rest], bodies[i])
        sums[mask] = body
        size = bin(mask).count("1")
        total += (-1) ** (n - size) * body.volume
    return max(total / math.factorial(n), 0.0)


def _clip_halfplane(poly: list, a: np.ndarray, b: np.ndarray, tol: float) -> list:
    """Keep the part of ``poly`` left of the directed line a->b."""
    if not poly:
        return poly
    edge = b - a

    def side(p):
        return edge[0] * (p[1] - a[1]) - edge[1] * (p[0] - a[0])

    out = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        sc, sn = side(cur), side(nxt)
        if sc >= -tol:
            out.append(cur)
        if (sc > tol and sn < -tol) or (sc < -tol and sn > tol):
            s = sc / (sc - sn)
            out.append(cur + s * (nxt - cur))
    return out


def intersect(p: Polytope, q: Polytope) -> Polytope:
    """Intersection of two planar bodies by successive half-plane clipping."""
    dim = _check_same_dim(p, q)
    if dim != 2:
        raise DimensionError("intersect supports 2D bodies only")
    if p.is_empty or q.is_empty:
        return empty(2)
    if q.affine_rank < 2 and p.affine_rank == 2:
        p, q = q, p
    if q.affine_rank == 2:
        poly = [v for v in p.vertices]
        verts = q.vertices
        scale_ = max(1.0, float(np.max(np.abs(verts))))
        for i in range(len(verts)):
            a, b = verts[i], verts[(i + 1) % len(verts)]
            poly = _clip_halfplane(poly, a, b, ORIENT_TOL * scale_ * np.linalg.norm(b - a))
            if not poly:
                return empty(2)
        return hull(np.array(poly), 2)
    return _intersect_degenerate(p, q)


def _intersect_degenerate(p: Polytope, q: Polytope) -> Polytope:
    # both bodies are points or segments
    cands = [v for v in p.vertices if q.contains(v)] + [v for v in q.vertices if p.contains(v)]
    if p.affine_rank == 1 and q.affine_rank == 1:
        a, b = p.vertices
        c, d = q.vertices
        m = np.column_stack([b - a, c - d])
        if abs(np.linalg.det(m)) > 1e-14:
            s, t = np.linalg.solve(m, c - a)
            if -1e-12 <= s <= 1 + 1e-12 and -1e-12 <= t <= 1 + 1e-12:
                cands.append(a + s * (b - a))
    if not cands:
        return empty(2)
    return hull(np.array(cands), 2)


def hausdorff_distance(p: Polytope, q: Polytope) -> float:
    """Hausdorff distance of two bodies; the maximum is attained at vertices."""
    _check_same_dim(p, q)
    if p.is_empty and q.is_empty:
        return 0.0
    if p.is_empty or q.is_empty:
        return math.inf
    return float(max(q.distance(p.vertices).max(), p.distance(q.vertices).max()))


def contains_body(outer: Polytope, inner: Polytope, tol: float = CONTAIN_TOL) -> bool:
    if inner.is_empty:
        return True
    return bool(np.all(outer.contains(inner.vertices, tol=tol)))


@dataclass(frozen=True, eq=False)
class BallApprox:
    """Inscribed polytope approximation of the Euclidean unit ball.

    In 2D the facet parameter m is the number of sides of a regular m-gon
    (even, so the body is centrally symmetric). In 3D, m is the facet count
    of a subdivided icosahedron and must be 20 * 4^s.
    """

    dim: int
    m: int
    polytope: Polytope

    @property
    def volume(self) -> float:
        return self.polytope.volume

    def to_dict(self) -> dict:
        return {**self.polytope.to_dict(), "ball_facets": self.m}


def _icosphere_vertices(subdivisions: int) -> np.ndarray:
    phi = (1 + math.sqrt(5)) / 2
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.array(v, dtype=float) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                mid = verts[i] + verts[j]
                verts.append(mid / np.linalg.norm(mid))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.array(verts)


def default_ball_facets(dim: int) -> int:
    return 64 if dim == 2 else 320


@functools.lru_cache(maxsize=None)
def ball_approx(dim: int, m: int | None = None) -> BallApprox:
    """Inscribed approximation D_m of the unit ball (cached; bodies are immutable)."""
    m = default_ball_facets(dim) if m is None else int(m)
    if dim == 2:
        if m < 8 or m % 2:
            raise ValueError(f"2D ball approximation needs an even m >= 8, got {m}")
        theta = 2 * math.pi * np.arange(m) / m
        return BallApprox(2, m, hull(np.column_stack([np.cos(theta), np.sin(theta)]), 2))
    if dim == 3:
        s = 0
        while 20 * 4**s < m:
            s += 1
        if 20 * 4**s != m:
            raise ValueError(f"3D ball approximation needs m = 20 * 4^s facets, got {m}")
        return BallApprox(3, m, hull(_icosphere_vertices(s), 3))
    raise DimensionError(f"ball approximations exist for dim 2 and 3, got {dim}")


def unit_ball_volume(n: int) -> float:
    """Exact volume of the Euclidean unit ball in R^n."""
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)
