"""Rotation-invariant alpha-concave functions through piecewise-linear convex bases.

For -inf < alpha <= 0 (beta = -1/alpha) a radial alpha-concave function is
written f(r) = (1 + phi(r)/beta)^(-beta), or exp(-phi(r)) when alpha = 0,
where the base phi is convex, nondecreasing, phi(0) = 0. Bases are stored
as piecewise-linear profiles, on which inf-convolution is exact: it merges
the linear pieces of both bases in order of increasing slope.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .convex_body import unit_ball_volume
from .reports import VerifyReport, digest
from .sampling import trial_rng

SLOPE_TOL = 1e-12
EQUALITY_TOL = 1e-6


class DivergenceError(ValueError):
    """A moment or quermassintegral required by a check is infinite."""


@dataclass(frozen=True, eq=False)
class ConvexProfile:
    """Piecewise-linear convex nondecreasing profile phi on [0, inf) with phi(0) = 0.

    Beyond the last breakpoint phi continues with ``tail_slope``; when
    ``tail_slope`` is None the profile is +inf there (compact support).
    """

    breakpoints: np.ndarray
    values: np.ndarray
    tail_slope: float | None = None

    def __post_init__(self):
        r = np.asarray(self.breakpoints, dtype=float).ravel()
        v = np.asarray(self.values, dtype=float).ravel()
        r.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "breakpoints", r)
        object.__setattr__(self, "values", v)
        if len(r) == 0 or len(r) != len(v):
            raise ValueError("breakpoints and values must be nonempty and of equal length")
        if r[0] != 0.0 or v[0] != 0.0:
            raise ValueError("profile must start at phi(0) = 0")
        if np.any(np.diff(r) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        s = self.slopes
        if len(s) and s[0] < -SLOPE_TOL:
            raise ValueError("profile must be nondecreasing")
        if self.convexity_residual < -SLOPE_TOL * max(1.0, float(np.max(np.abs(s), initial=0.0))):
            raise ValueError("profile is not convex")
        if self.tail_slope is not None:
            if not self.tail_slope > 0:
                raise ValueError("tail slope must be positive so that phi -> inf")
            object.__setattr__(self, "tail_slope", float(self.tail_slope))

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.breakpoints)

    @property
    def compact(self) -> bool:
        return self.tail_slope is None

    @property
    def r_max(self) -> float:
        return math.inf if self.tail_slope is not None else float(self.breakpoints[-1])

    @property
    def convexity_residual(self) -> float:
        """Smallest increment between consecutive slopes (the tail included); >= 0 iff convex."""
        s = list(self.slopes)
        if self.tail_slope is not None:
            s.append(self.tail_slope)
        if len(s) < 2:
            return 0.0
        return float(np.min(np.diff(s)))

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        inside = np.interp(r, self.breakpoints, self.values)
        beyond = r > self.breakpoints[-1]
        if self.tail_slope is None:
            tail = np.full_like(r, np.inf)
        else:
            tail = self.values[-1] + self.tail_slope * (r - self.breakpoints[-1])
        out = np.where(beyond, tail, inside)
        return float(out) if out.ndim == 0 else out

    def segments(self):
        """(length, slope) pairs of the finite pieces."""
        return list(zip(np.diff(self.breakpoints), self.slopes))

    @classmethod
    def from_segments(cls, segments, tail_slope=None) -> ConvexProfile:
        segs = [(float(length), float(s)) for length, s in segments if length > 0]
        r = np.concatenate([[0.0], np.cumsum([length for length, _ in segs])])
        v = np.concatenate([[0.0], np.cumsum([length * s for length, s in segs])])
        return cls(r, v, tail_slope)

    @classmethod
    def linear(cls, slope: float = 1.0) -> ConvexProfile:
        return cls([0.0], [0.0], slope)

    @classmethod
    def indicator(cls, radius: float = 0.0) -> ConvexProfile:
        """Base of the indicator of the ball of given radius (0 inside, +inf outside)."""
        if radius == 0:
            return cls([0.0], [0.0], None)
        return cls([0.0, radius], [0.0, 0.0], None)

    @classmethod
    def from_function(cls, phi, r_max, tol=1e-9, error=None, compact=False, max_nodes=200_000) -> ConvexProfile:
        """Interpolate a convex phi at adaptively bisected nodes on [0, r_max].

        ``error(pl_value, exact_value, r)`` measures the midpoint defect;
        by default it is the absolute difference in phi. The tail continues
        with the slope of the last chord unless ``compact``.
        """
        if error is None:
            def error(a, b, r):
                return abs(a - b)
        nodes = list(np.linspace(0.0, r_max, 17))
        vals = [float(phi(x)) for x in nodes]
        vals[0] = 0.0
        out_r, out_v = [nodes[0]], [vals[0]]
        stack = list(zip(nodes[1:], vals[1:]))[::-1]
        while stack:
            r1, v1 = stack[-1]
            r0, v0 = out_r[-1], out_v[-1]
            rm = 0.5 * (r0 + r1)
            vm = float(phi(rm))
            if error(0.5 * (v0 + v1), vm, rm) > tol and (r1 - r0) > 1e-12 and len(out_r) + len(stack) < max_nodes:
                stack.append((rm, vm))
                continue
            stack.pop()
            out_r.append(r1)
            out_v.append(v1)
        r, v = np.array(out_r), np.array(out_v)
        # interpolating a convex function keeps chord slopes monotone; clean rounding noise
        s = np.maximum.accumulate(np.maximum(np.diff(v) / np.diff(r), 0.0))
        v = np.concatenate([[0.0], np.cumsum(s * np.diff(r))])
        tail = None if compact else float(max(s[-1], 1e-300))
        return cls(r, v, tail)

    def to_dict(self) -> dict:
        out = {"breakpoints": self.breakpoints.tolist(), "values": self.values.tolist()}
        if self.tail_slope is None:
            out["compact"] = float(self.breakpoints[-1])
        else:
            out["tail_slope"] = self.tail_slope
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ConvexProfile:
        r = list(data["breakpoints"])
        v = list(data["values"])
        if "tail_slope" in data:
            return cls(r, v, float(data["tail_slope"]))
        if "compact" not in data:
            raise KeyError("tail_slope")
        r_max = float(data["compact"])
        if r_max > r[-1]:
            raise ValueError("compact support radius must equal the last breakpoint")
        return cls(r, v, None)


def _beta(alpha: float) -> float:
    return -1.0 / alpha


def from_base_values(phi, alpha: float):
    """f = (1 + phi/beta)^(-beta), exp(-phi) at alpha = 0; phi = inf maps to 0."""
    phi = np.asarray(phi, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if alpha == 0:
            out = np.exp(-phi)
        else:
            b = _beta(alpha)
            out = np.where(np.isinf(phi), 0.0, (1.0 + phi / b) ** (-b))
    return float(out) if out.ndim == 0 else out


def base_values(f, alpha: float):
    """base_alpha of sampled values: (1 - f^alpha)/alpha, or -log f at alpha = 0."""
    f = np.asarray(f, dtype=float)
    with np.errstate(divide="ignore"):
        if alpha == 0:
            out = -np.log(f)
        else:
            out = np.where(f > 0, (1.0 - f**alpha) / alpha, np.inf)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class RadialAlphaProfile:
    """f(x) = f(|x|) in C_alpha(R^n), given by its convex base.

    For alpha = -inf there is no base; ``levels`` then stores a
    nonincreasing piecewise-linear profile (radii, values) with value 1 at
    r = 0 and 0 beyond the last radius.
    """

    alpha: float
    n: int
    base: ConvexProfile | None = None
    levels: tuple | None = None

    def __post_init__(self):
        if self.alpha > 0:
            raise ValueError("only -inf <= alpha <= 0 is supported")
        if self.alpha == -math.inf:
            if self.levels is None:
                raise ValueError("quasi-concave profiles need explicit levels")
            r, v = (np.asarray(x, dtype=float) for x in self.levels)
            if r[0] != 0 or v[0] != 1 or np.any(np.diff(r) <= 0) or np.any(np.diff(v) > 0):
                raise ValueError("levels must start at (0, 1) and be nonincreasing")
            object.__setattr__(self, "levels", (r, v))
        elif self.base is None:
            raise ValueError("alpha-concave profiles need a convex base")

    @property
    def beta(self) -> float:
        return math.inf if self.alpha == 0 else _beta(self.alpha)

    def __call__(self, r):
        if self.base is None:
            r = np.abs(np.asarray(r, dtype=float))
            radii, vals = self.levels
            out = np.where(r > radii[-1], 0.0, np.interp(r, radii, vals))
            return float(out) if out.ndim == 0 else out
        return from_base_values(self.base(r), self.alpha)

    def at_points(self, x):
        """Evaluate on an (N, n) array of points."""
        return self(np.linalg.norm(np.asarray(x, dtype=float), axis=-1))

    def to_dict(self) -> dict:
        alpha = "-inf" if self.alpha == -math.inf else self.alpha
        out = {"alpha": alpha, "n": self.n}
        if self.base is not None:
            out["base"] = self.base.to_dict()
        else:
            out["levels"] = {"radii": self.levels[0].tolist(), "values": self.levels[1].tolist()}
        return out

    @classmethod
    def from_dict(cls, data: dict) -> RadialAlphaProfile:
        alpha = float(data["alpha"])
        n = int(data["n"])
        if alpha == -math.inf:
            lv = data["levels"]
            return cls(alpha, n, None, (lv["radii"], lv["values"]))
        return cls(alpha, n, ConvexProfile.from_dict(data["base"]))


def from_base(alpha: float, n: int, base: ConvexProfile) -> RadialAlphaProfile:
    return RadialAlphaProfile(float(alpha), int(n), base)


def from_function(alpha: float, n: int, f, r_max=None, tol=1e-9, compact=False) -> RadialAlphaProfile:
    """Profile whose PL base interpolates base_alpha(f), refined until f is within ``tol``."""
    if alpha == -math.inf:
        raise ValueError("quasi-concave profiles have no base")
    if r_max is None:
        r_max = 1.0
        while f(r_max) > 1e-13 and r_max < 1e6:
            r_max *= 2.0

    def phi(r):
        return base_values(max(float(f(r)), 1e-300), alpha)

    def err(pl, exact, r):
        return abs(from_base_values(pl, alpha) - from_base_values(exact, alpha))

    return from_base(alpha, n, ConvexProfile.from_function(phi, r_max, tol, err, compact=compact))


def rebase(f: RadialAlphaProfile, alpha: float, tol: float = 1e-9) -> RadialAlphaProfile:
    """The same function viewed in C_alpha for alpha <= f.alpha (its base changes)."""
    if alpha > f.alpha:
        raise ValueError("a function can only be moved to a larger class (smaller alpha)")
    if alpha == f.alpha:
        return f
    r_max = f.base.r_max if f.base is not None and f.base.compact else None
    return from_function(alpha, f.n, f, r_max=r_max, tol=tol, compact=r_max is not None)


def base_of(f: RadialAlphaProfile) -> ConvexProfile:
    if f.base is None:
        raise ValueError("quasi-concave (alpha = -inf) functions have no convex base")
    return f.base


def inf_convolve(phi: ConvexProfile, psi: ConvexProfile) -> ConvexProfile:
    """Exact inf-convolution of PL radial bases: merge pieces by increasing slope."""
    tails = [p.tail_slope for p in (phi, psi) if p.tail_slope is not None]
    tail = min(tails) if tails else None
    segs = phi.segments() + psi.segments()
    segs.sort(key=lambda seg: seg[1])
    if tail is not None:
        segs = [seg for seg in segs if seg[1] < tail]
    return ConvexProfile.from_segments(segs, tail)


def scale_base(lam: float, phi: ConvexProfile) -> ConvexProfile:
    """(lam . phi)(r) = lam phi(r / lam)."""
    if not lam > 0:
        raise ValueError(f"dilation factor must be positive, got {lam}")
    return ConvexProfile(phi.breakpoints * lam, phi.values * lam, phi.tail_slope)


def _same_class(f: RadialAlphaProfile, g: RadialAlphaProfile) -> None:
    if f.alpha != g.alpha:
        raise ValueError(f"alpha mismatch: {f.alpha} vs {g.alpha}")
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")


def alpha_sum(f: RadialAlphaProfile, g: RadialAlphaProfile) -> RadialAlphaProfile:
    """f *_alpha g, defined by base(f *_alpha g) = base(f) [] base(g)."""
    _same_class(f, g)
    if f.alpha == -math.inf:
        return radial_quasi_sum(f, g)
    return from_base(f.alpha, f.n, inf_convolve(f.base, g.base))


def alpha_dilate(lam: float, f: RadialAlphaProfile) -> RadialAlphaProfile:
    """lam ._alpha f, with base lam phi(r / lam)."""
    return from_base(f.alpha, f.n, scale_base(lam, base_of(f)))


def radial_dilate(lam: float, f: RadialAlphaProfile) -> RadialAlphaProfile:
    """lam (.) f, i.e. r -> f(r / lam); lam = 0 gives the indicator of the origin."""
    if lam < 0:
        raise ValueError(f"dilation factor must be non-negative, got {lam}")
    if f.base is None:
        radii, vals = f.levels
        if lam == 0:
            return RadialAlphaProfile(f.alpha, f.n, None, ([0.0], [1.0]))
        return RadialAlphaProfile(f.alpha, f.n, None, (radii * lam, vals))
    if lam == 0:
        return from_base(f.alpha, f.n, ConvexProfile.indicator(0.0))
    b = f.base
    tail = None if b.tail_slope is None else b.tail_slope / lam
    return from_base(f.alpha, f.n, ConvexProfile(b.breakpoints * lam, b.values, tail))


def g_alpha(alpha: float, n: int = 1) -> RadialAlphaProfile:
    """(1 + r/beta)^(-beta), the profile whose base is |x|; exp(-r) at alpha = 0."""
    if alpha > 0 or alpha == -math.inf:
        raise ValueError(f"g_alpha needs -inf < alpha <= 0, got {alpha}")
    return from_base(alpha, n, ConvexProfile.linear(1.0))


def _level_radius(base: ConvexProfile, b: np.ndarray) -> np.ndarray:
    """sup{r : phi(r) <= b}, the radius of the level set at base value b."""
    r, v = base.breakpoints, base.values
    # the flat start phi = 0 on [0, r_flat] maps b = 0 to r_flat
    flat = int(np.searchsorted(v, 0.0, side="right")) - 1
    rr, vv = r[flat:], v[flat:]
    out = np.interp(b, vv, rr) if len(vv) > 1 else np.full_like(b, rr[0])
    above = b > vv[-1]
    if base.tail_slope is None:
        return np.where(above, rr[-1], out)
    return np.where(above, rr[-1] + (b - vv[-1]) / base.tail_slope, out)


def _slope_residual(r, v, tail) -> float:
    s = list(np.diff(v) / np.diff(r))
    if tail is not None:
        s.append(tail)
    return float(np.min(np.diff(s))) if len(s) > 1 else 0.0


def _quasi_sum_base(bf: ConvexProfile, bg: ConvexProfile):
    knots = np.unique(np.concatenate([bf.values, bg.values]))
    radii = _level_radius(bf, knots) + _level_radius(bg, knots)
    tails = [p.tail_slope for p in (bf, bg) if p.tail_slope is not None]
    tail = 1.0 / sum(1.0 / s for s in tails) if tails else None
    r_out, v_out = [0.0], [0.0]
    for rad, b in zip(radii, knots):
        # knots where both radii are frozen only repeat the final radius
        if rad > r_out[-1] + 1e-15:
            r_out.append(float(rad))
            v_out.append(float(b))
    return np.array(r_out), np.array(v_out), tail


def radial_quasi_sum(f: RadialAlphaProfile, g: RadialAlphaProfile) -> RadialAlphaProfile:
    """f (+) g for radial profiles: level-set radii add, r_h(t) = r_f(t) + r_g(t).

    Working in base values b = base_alpha(t) the radius functions are
    concave in b, so the inverse of their sum is again a convex PL base.
    """
    _same_class(f, g)
    if f.alpha == -math.inf:
        return _quasi_sum_levels(f, g)
    return from_base(f.alpha, f.n, ConvexProfile(*_quasi_sum_base(f.base, g.base)))


def _quasi_sum_levels(f, g):
    rf, vf = f.levels
    rg, vg = g.levels
    t = np.unique(np.concatenate([vf, vg]))[::-1]

    def radius(radii, vals, level):
        # vals nonincreasing; largest radius where value >= level
        ok = vals >= level - 1e-15
        idx = np.max(np.nonzero(ok)[0])
        if idx + 1 < len(vals) and vals[idx + 1] < level < vals[idx]:
            w = (vals[idx] - level) / (vals[idx] - vals[idx + 1])
            return radii[idx] + w * (radii[idx + 1] - radii[idx])
        return radii[idx]

    pts = [(radius(rf, vf, s) + radius(rg, vg, s), s) for s in t if s > 0]
    r_out, v_out = [0.0], [1.0]
    for r, s in pts:
        if r > r_out[-1] + 1e-15:
            r_out.append(r)
            v_out.append(s)
    return RadialAlphaProfile(f.alpha, f.n, None, (r_out, v_out))


def _tail_moment(k: int, r0: float, v: float, s: float, alpha: float) -> float:
    """Closed-form integral over [r0, inf) of r^k f(r) when phi(r) = v + s (r - r0)."""
    total = 0.0
    if alpha == 0:
        for j in range(k + 1):
            total += math.comb(k, j) * r0 ** (k - j) * math.factorial(j) / s ** (j + 1)
        return math.exp(-v) * total
    b = _beta(alpha)
    w0 = 1.0 + v / b
    d = s / b
    for j in range(k + 1):
        log_beta = math.lgamma(j + 1) + math.lgamma(b - j - 1) - math.lgamma(b)
        term = math.exp((j + 1 - b) * math.log(w0) - (j + 1) * math.log(d) + log_beta)
        total += math.comb(k, j) * r0 ** (k - j) * term
    return total


def moment_finite(f: RadialAlphaProfile, k: int) -> bool:
    if f.base is None or f.base.compact or f.alpha == 0:
        return True
    return k < f.beta - 1


def moment(f: RadialAlphaProfile, k: int) -> float:
    """Integral of r^k f(r) over [0, inf); math.inf when it diverges.

    Finite pieces use adaptive quadrature; the linear tail of the base is
    integrated in closed form (Gamma / Beta integrals).
    """
    if k < 0:
        raise ValueError("moment order must be non-negative")
    if not moment_finite(f, k):
        return math.inf
    if f.base is None:
        radii, vals = f.levels
        total = 0.0
        for i in range(len(radii) - 1):
            a, b = radii[i], radii[i + 1]
            fa, fb = vals[i], vals[i + 1]
            total += integrate.quad(lambda r: r**k * (fa + (fb - fa) * (r - a) / (b - a)), a, b)[0]
        return total
    base = f.base
    r, v = base.breakpoints, base.values
    total = 0.0
    for i in range(len(r) - 1):
        a, b = r[i], r[i + 1]
        slope = (v[i + 1] - v[i]) / (b - a)

        def integrand(x, a=a, v0=v[i], slope=slope):
            return x**k * from_base_values(v0 + slope * (x - a), f.alpha)

        val, _ = integrate.quad(integrand, a, b, epsabs=1e-14, epsrel=1e-13, limit=200)
        total += val
    if base.tail_slope is not None:
        total += _tail_moment(k, float(r[-1]), float(v[-1]), base.tail_slope, f.alpha)
    return total


@dataclass
class MarginReport:
    margin: float
    lhs: float
    rhs: float
    status: str = "checked"
    detail: str = ""

    @property
    def equality(self) -> bool:
        return self.status == "checked" and abs(self.margin) < EQUALITY_TOL

    @property
    def vacuous(self) -> bool:
        return self.status == "vacuous"


def check_moment_lemma(f: RadialAlphaProfile, k: int, m: int) -> MarginReport:
    """margin = (M_k(f)/M_k(g))^(1/(k+1)) - (M_m(f)/M_m(g))^(1/(m+1)), expected >= 0."""
    if f.base is None:
        raise ValueError("the moment lemma needs alpha > -inf")
    if not 0 <= k < m:
        raise ValueError(f"need 0 <= k < m, got k={k}, m={m}")
    if f.alpha < 0 and not m < f.beta - 1:
        raise ValueError(
            f"moment lemma requires 0 <= k < m < -1/alpha - 1; got m={m} with -1/alpha - 1 = {f.beta - 1:g}"
        )
    g = g_alpha(f.alpha, f.n)
    lhs = (moment(f, k) / moment(g, k)) ** (1.0 / (k + 1))
    rhs = (moment(f, m) / moment(g, m)) ** (1.0 / (m + 1))
    return MarginReport(lhs - rhs, lhs, rhs)


def radial_quermassintegral(f: RadialAlphaProfile, k: int, n: int | None = None) -> float:
    """W_k(f) = (n - k) Vol(D) int r^(n-k-1) f(r) dr; math.inf when divergent."""
    n = f.n if n is None else n
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k}, n={n}")
    mom = moment(f, n - k - 1)
    if math.isinf(mom):
        return math.inf
    return (n - k) * unit_ball_volume(n) * mom


def alexandrov_finite(alpha: float, n: int, k: int) -> bool:
    """W_k(g_alpha) < inf, i.e. k > n + 1/alpha (always for alpha = 0)."""
    return alpha == 0 or k > n + 1.0 / alpha


def check_alexandrov(f: RadialAlphaProfile, k: int, m: int, n: int | None = None) -> MarginReport:
    """margin = (W_m(f)/W_m(g))^(1/(n-m)) - (W_k(f)/W_k(g))^(1/(n-k)), expected >= 0.

    Reported as vacuous when W_k(g_alpha) is infinite.
    """
    n = f.n if n is None else n
    if f.base is None:
        raise ValueError("the Alexandrov inequality needs alpha > -inf")
    if not 0 <= k < m < n:
        raise ValueError(f"need 0 <= k < m < n, got k={k}, m={m}, n={n}")
    if not alexandrov_finite(f.alpha, n, k):
        return MarginReport(
            math.nan, math.nan, math.nan, "vacuous",
            f"W_k(g_alpha) is infinite: needs k > n + 1/alpha = {n + 1.0 / f.alpha:g} (so alpha > -1/2 at best)",
        )
    g = g_alpha(f.alpha, n)
    lhs = (radial_quermassintegral(f, k, n) / radial_quermassintegral(g, k, n)) ** (1.0 / (n - k))
    rhs = (radial_quermassintegral(f, m, n) / radial_quermassintegral(g, m, n)) ** (1.0 / (n - m))
    return MarginReport(rhs - lhs, lhs, rhs)


def second_difference_residual(f, alpha: float, r_max: float, step: float) -> float:
    """Minimum second difference of base_alpha(f) sampled on [0, r_max]; < 0 means not alpha-concave."""
    r = np.arange(0.0, r_max + 0.5 * step, step)
    vals = np.asarray(f(r))
    vals = vals[vals > 0]
    phi = base_values(vals, alpha)
    if len(phi) < 3:
        return 0.0
    return float(np.min(phi[2:] - 2 * phi[1:-1] + phi[:-2]))


@dataclass
class ClosureReport:
    quasi_sum: RadialAlphaProfile
    quasi_sum_residual: float
    alpha_prime: float | None = None
    alpha_sum: RadialAlphaProfile | None = None
    alpha_sum_residual: float | None = None

    def quasi_sum_closed(self, tol: float = 1e-9) -> bool:
        return self.quasi_sum_residual >= -tol

    def alpha_sum_closed(self, tol: float = 1e-9) -> bool | None:
        if self.alpha_sum_residual is None:
            return None
        return self.alpha_sum_residual >= -tol


def check_closure(
    f: RadialAlphaProfile,
    g: RadialAlphaProfile,
    alpha_prime: float | None = None,
    r_check: float = 2.0,
    step: float = 0.05,
) -> ClosureReport:
    """Is C_alpha closed under (+)? And, for alpha' < alpha, under *_alpha'?

    The quasi-sum residual is the slope-monotonicity of the exact PL base of
    f (+) g. The alpha'-sum residual is the smallest second difference of
    base_alpha(f *_alpha' g) sampled on [0, r_check].
    """
    _same_class(f, g)
    if f.base is None:
        return ClosureReport(radial_quasi_sum(f, g), 0.0)
    r, v, tail = _quasi_sum_base(f.base, g.base)
    residual = _slope_residual(r, v, tail)
    report = ClosureReport(from_base(f.alpha, f.n, ConvexProfile(r, v, tail)), residual)
    if alpha_prime is not None:
        if alpha_prime >= f.alpha:
            raise ValueError("alpha' must be smaller than the class parameter alpha")
        hp = alpha_sum(rebase(f, alpha_prime), rebase(g, alpha_prime))
        report.alpha_prime = alpha_prime
        report.alpha_sum = hp
        report.alpha_sum_residual = second_difference_residual(hp, f.alpha, r_check, step)
    return report


def random_profile(rng, alpha: float, n: int = 3, compact_prob: float = 0.3) -> RadialAlphaProfile:
    """Random PL convex base with phi(0) = 0: random lengths, increasing slopes."""
    pieces = int(rng.integers(1, 6))
    lengths = rng.uniform(0.1, 2.0, size=pieces)
    slopes = np.cumsum(np.concatenate([[rng.uniform(0.0, 1.0)], rng.exponential(0.7, size=pieces - 1)]))
    if rng.uniform() < compact_prob:
        return from_base(alpha, n, ConvexProfile.from_segments(zip(lengths, slopes), None))
    tail = float(slopes[-1] + rng.exponential(0.7)) + 0.05
    return from_base(alpha, n, ConvexProfile.from_segments(zip(lengths, slopes), tail))


def verify_moment_lemma(seed=0, trials=100, alpha=0.0, k=0, m=1, tolerance=1e-8) -> VerifyReport:
    report = VerifyReport("moment_lemma", trials, seed, tolerance)
    report.details.update({"alpha": alpha, "k": k, "m": m})
    for trial in range(trials):
        f = random_profile(trial_rng(seed, trial), alpha)
        report.add(trial, check_moment_lemma(f, k, m).margin, digest(f))
    return report


def verify_alexandrov(seed=0, trials=100, alpha=0.0, n=3, k=1, m=2, tolerance=1e-9) -> VerifyReport:
    report = VerifyReport("alexandrov", trials, seed, tolerance)
    report.details.update({"alpha": alpha, "n": n, "k": k, "m": m})
    if not alexandrov_finite(alpha, n, k):
        report.status = "vacuous"
        report.details["reason"] = f"W_k(g_alpha) infinite: needs k > n + 1/alpha = {n + 1.0 / alpha:g}"
        return report
    for trial in range(trials):
        f = random_profile(trial_rng(seed, trial), alpha, n)
        report.add(trial, check_alexandrov(f, k, m, n).margin, digest(f))
    return report


def verify_closure(seed=0, trials=50, alpha=0.0, tolerance=1e-9) -> VerifyReport:
    report = VerifyReport("closure", trials, seed, tolerance)
    report.details["alpha"] = alpha
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        f, g = random_profile(rng, alpha), random_profile(rng, alpha)
        report.add(trial, check_closure(f, g).quasi_sum_residual, digest(f, g))
    return report
