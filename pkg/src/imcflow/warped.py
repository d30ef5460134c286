"""Rotationally symmetric (warped product) manifolds.

A manifold here is ``dr^2 + f(r)^2 g_S`` over the round unit ``(n-1)``-sphere,
represented either by a closed-form warp ``f`` (with optional derivative) or
by piecewise-linear samples on a strictly increasing radius grid starting
at 0.  The warp must be positive for ``0 < r <= r_max``; ``f(0)`` may vanish
(a pole) or not (a boundary sphere, e.g. a half-cylinder cross-section).

Geodesic spheres have area ``unit_sphere_area(n) * f(r)**(n-1)`` and geodesic
balls have volume ``unit_sphere_area(n) * integral_0^r f**(n-1)``.  Volumes of
sampled warps are integrated exactly per cell (the interpolant is a polynomial
of degree ``n-1``); closed-form warps go through deterministic adaptive
Simpson quadrature with relative tolerance 1e-10.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, CurvatureKink

__all__ = [
    "GeodesicBall",
    "WarpedManifold",
    "adaptive_simpson",
    "ball_volume",
    "ball_volume_grid",
    "mean_curvature",
    "one_sided_mean_curvature",
    "sphere_area",
    "unit_sphere_area",
]

_DIM_MIN = 2
_DIM_MAX = 12

# relative slope mismatch above which a sampled warp point counts as a kink
_KINK_RTOL = 1e-8


def unit_sphere_area(n: int) -> float:
    """Area of the unit (n-1)-sphere, ``2 pi^(n/2) / Gamma(n/2)``.

    Parameters
    ----------
    n : int
        Ambient dimension, 2 <= n <= 12.
    """
    if not (_DIM_MIN <= n <= _DIM_MAX):
        raise ConfigError(f"dimension n={n} outside supported range [2, 12]")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def adaptive_simpson(g: Callable[[float], float], a: float, b: float,
                     rel_tol: float = 1e-10, abs_floor: float = 1e-14,
                     max_depth: int = 48) -> float:
    """Deterministic adaptive Simpson quadrature of ``g`` on ``[a, b]``.

    Interval halving continues until the standard rule-difference estimate
    ``|S2 - S1| / 15`` drops below the local share of the tolerance.  The
    traversal order is fixed, so results are bit-stable across runs.
    """
    if b <= a:
        return 0.0

    def simpson(x0, x2, f0, f2):
        x1 = 0.5 * (x0 + x2)
        f1 = g(x1)
        return x1, f1, (x2 - x0) * (f0 + 4.0 * f1 + f2) / 6.0

    scale = abs(b - a) * (abs(g(a)) + abs(g(b)) + 1e-300)
    tol0 = max(rel_tol * scale, abs_floor)
    total = 0.0
    fa, fb = g(a), g(b)
    m, fm, s_whole = simpson(a, b, fa, fb)
    # stack entries: (x0, x2, f0, f2, midpoint, f_mid, S, tol, depth)
    stack = [(a, b, fa, fb, m, fm, s_whole, tol0, 0)]
    while stack:
        x0, x2, f0, f2, x1, f1, s, tol, depth = stack.pop()
        lm, flm, s_l = simpson(x0, x1, f0, f1)
        rm, frm, s_r = simpson(x1, x2, f1, f2)
        err = (s_l + s_r - s) / 15.0
        if abs(err) <= tol or depth >= max_depth:
            total += s_l + s_r + err
        else:
            stack.append((x1, x2, f1, f2, rm, frm, s_r, 0.5 * tol, depth + 1))
            stack.append((x0, x1, f0, f1, lm, flm, s_l, 0.5 * tol, depth + 1))
    return total


def _segment_power_integral(f0: float, f1: float, width: float, p: int) -> float:
    """Exact integral of the linear ramp from f0 to f1 raised to power p."""
    if width <= 0.0:
        return 0.0
    if f0 == f1:
        return width * f0 ** p
    # antiderivative of (f0 + slope*s)^p is (f0 + slope*s)^(p+1) / (slope*(p+1))
    return width * (f1 ** (p + 1) - f0 ** (p + 1)) / ((p + 1) * (f1 - f0))


@dataclass(frozen=True)
class GeodesicBall:
    """A centered geodesic ball ``{r < radius}`` (or ``{r <= radius}``)."""

    radius: float
    closed: bool = False

    def __post_init__(self):
        if not (self.radius >= 0.0 and math.isfinite(self.radius)):
            raise ConfigError(f"ball radius must be finite and >= 0, got {self.radius}")


@dataclass(frozen=True)
class WarpedManifold:
    """Rotationally symmetric manifold ``dr^2 + f(r)^2 g_S`` on ``[0, r_max]``.

    Exactly one of the two representations is active: a closed-form callable
    ``f`` (optionally with derivative ``df`` and a list of radii where the
    closed form is only continuous), or sample arrays interpreted as a
    piecewise-linear warp.

    Attributes
    ----------
    n : int
        Ambient dimension.
    r_max : float
        Largest represented radius.  Tail surrogates (e.g. the warp's
        infimum at infinity) are taken on the last 20% of ``[0, r_max]``.
    breakpoints : tuple of float
        Radii where a closed-form warp has kinks or where its monotonicity
        can flip; sampling grids and quadrature always include them.
    """

    n: int
    r_max: float
    name: str = "custom"
    f: Callable[[float], float] | None = None
    df: Callable[[float], float] | None = None
    grid: np.ndarray | None = None
    f_samples: np.ndarray | None = None
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        if not (_DIM_MIN <= self.n <= _DIM_MAX):
            raise ConfigError(f"dimension n={self.n} outside supported range [2, 12]")
        if not (self.r_max > 0.0 and math.isfinite(self.r_max)):
            raise ConfigError(f"r_max must be finite and positive, got {self.r_max}")
        if (self.f is None) == (self.grid is None):
            raise ConfigError("exactly one of closed-form f or sample grid required")
        if self.grid is not None:
            g = np.asarray(self.grid, dtype=float)
            v = np.asarray(self.f_samples, dtype=float)
            if g.ndim != 1 or g.shape != v.shape or g.size < 2:
                raise ConfigError("sampled warp needs matching 1-d arrays, length >= 2")
            if g[0] != 0.0 or np.any(np.diff(g) <= 0.0):
                raise ConfigError("sample radii must strictly increase from 0")
            if np.any(v[1:] <= 0.0) or v[0] < 0.0:
                raise ConfigError("warp must be positive for r > 0")
            object.__setattr__(self, "grid", g)
            object.__setattr__(self, "f_samples", v)
            object.__setattr__(self, "r_max", float(g[-1]))
        object.__setattr__(self, "breakpoints",
                           tuple(b for b in sorted(set(self.breakpoints))
                                 if 0.0 < b < self.r_max))

    # -- construction -----------------------------------------------------

    @classmethod
    def from_function(cls, n: int, f: Callable[[float], float], r_max: float,
                      df: Callable[[float], float] | None = None,
                      name: str = "custom",
                      breakpoints: Sequence[float] = ()) -> "WarpedManifold":
        return cls(n=n, r_max=float(r_max), name=name, f=f, df=df,
                   breakpoints=tuple(breakpoints))

    @classmethod
    def from_samples(cls, n: int, radii: Sequence[float], values: Sequence[float],
                     name: str = "sampled") -> "WarpedManifold":
        radii = np.asarray(radii, dtype=float)
        return cls(n=n, r_max=float(radii[-1]), name=name,
                   grid=radii, f_samples=np.asarray(values, dtype=float),
                   breakpoints=tuple(radii[1:-1]))

    @classmethod
    def from_csv(cls, path, n: int, name: str | None = None) -> "WarpedManifold":
        """Load a sampled warp from a two-column CSV of (radius, warp value)."""
        radii, values = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip():
                    continue
                try:
                    r, v = float(row[0]), float(row[1])
                except (ValueError, IndexError):
                    if not radii:
                        continue  # header line
                    raise ConfigError(f"malformed warp CSV row: {row!r}")
                radii.append(r)
                values.append(v)
        if len(radii) < 2:
            raise ConfigError(f"warp CSV {path} has fewer than 2 numeric rows")
        return cls.from_samples(n, radii, values, name=name or str(path))

    # -- evaluation --------------------------------------------------------

    @property
    def is_sampled(self) -> bool:
        return self.grid is not None

    def warp(self, r):
        """Evaluate f(r); vectorized over array input."""
        if self.is_sampled:
            return np.interp(r, self.grid, self.f_samples)
        if np.ndim(r) == 0:
            return self.f(float(r))
        return np.array([self.f(float(x)) for x in np.ravel(r)]).reshape(np.shape(r))

    def warp_slope(self, r: float, side: str = "right") -> float:
        """One-sided slope of the warp at r."""
        if self.is_sampled:
            g, v = self.grid, self.f_samples
            i = int(np.searchsorted(g, r, side="right" if side == "right" else "left"))
            if side == "right":
                i = min(max(i, 1), len(g) - 1)
                return float((v[i] - v[i - 1]) / (g[i] - g[i - 1]))
            i = min(max(i - 1, 1), len(g) - 1)
            return float((v[i] - v[i - 1]) / (g[i] - g[i - 1]))
        if self.df is not None:
            if r not in self.breakpoints:
                return float(self.df(r))
            # at a breakpoint the derivative may be one-sided only; a tiny
            # nudge picks the matching branch of the supplied closed form
            h = 1e-12 * max(1.0, abs(r))
            return float(self.df(r + h if side == "right" else r - h))
        # Richardson-extrapolated one-sided difference: O(h^2) truncation so
        # smooth points declared as breakpoints do not read as kinks
        h = max(1e-5, 1e-7 * abs(r))
        if side == "right":
            d1 = (self.f(r + h) - self.f(r)) / h
            d2 = (self.f(r + 2.0 * h) - self.f(r)) / (2.0 * h)
        else:
            d1 = (self.f(r) - self.f(r - h)) / h
            d2 = (self.f(r) - self.f(r - 2.0 * h)) / (2.0 * h)
        return 2.0 * d1 - d2

    def sample_grid(self, num: int = 4096, r_lo: float = 0.0,
                    extra: Sequence[float] = ()) -> np.ndarray:
        """Uniform grid on [r_lo, r_max] merged with breakpoints and extras.

        Running-infimum computations stay exact as long as the warp is
        monotone on every cell, which holds whenever all interior extrema
        appear in ``breakpoints``/``extra``.
        """
        base = np.linspace(r_lo, self.r_max, num)
        pts = [base]
        for b in list(self.breakpoints) + list(extra):
            if r_lo < b < self.r_max:
                pts.append([b])
        if self.is_sampled:
            pts.append(self.grid[(self.grid > r_lo) & (self.grid < self.r_max)])
        out = np.unique(np.concatenate([np.asarray(p, dtype=float) for p in pts]))
        return out


def sphere_area(M: WarpedManifold, r: float) -> float:
    """Area of the geodesic sphere at radius r."""
    if not (0.0 <= r <= M.r_max):
        raise ConfigError(f"radius {r} outside [0, {M.r_max}]")
    return unit_sphere_area(M.n) * float(M.warp(r)) ** (M.n - 1)


def ball_volume(M: WarpedManifold, r: float, rel_tol: float = 1e-10) -> float:
    """Volume of the geodesic ball of radius r."""
    if not (0.0 <= r <= M.r_max):
        raise ConfigError(f"radius {r} outside [0, {M.r_max}]")
    return ball_volume_grid(M, np.array([0.0, r]), rel_tol=rel_tol)[-1]


def ball_volume_grid(M: WarpedManifold, radii, rel_tol: float = 1e-10) -> np.ndarray:
    """Cumulative ball volumes at each radius of a sorted grid.

    The first entry is the volume at ``radii[0]`` (integrated from 0), and
    subsequent entries accumulate segment integrals, so shared prefixes of
    different grids agree to quadrature tolerance.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size == 0 or np.any(np.diff(radii) < 0.0):
        raise ConfigError("radii must be a sorted 1-d array")
    omega = unit_sphere_area(M.n)
    p = M.n - 1
    cuts = np.unique(np.concatenate([[0.0], radii, np.asarray(M.breakpoints)]))
    cuts = cuts[cuts <= radii[-1] + 0.0]
    if M.is_sampled:
        cuts = np.unique(np.concatenate([cuts, M.grid[M.grid <= radii[-1]]]))
        vals = np.interp(cuts, M.grid, M.f_samples)
        seg = np.array([
            _segment_power_integral(vals[i], vals[i + 1], cuts[i + 1] - cuts[i], p)
            for i in range(len(cuts) - 1)
        ])
    else:
        g = lambda s: M.f(s) ** p
        seg = np.array([
            adaptive_simpson(g, cuts[i], cuts[i + 1], rel_tol=rel_tol)
            for i in range(len(cuts) - 1)
        ])
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    return omega * np.interp(radii, cuts, cum)


def one_sided_mean_curvature(M: WarpedManifold, r: float) -> tuple[float, float]:
    """Left and right mean curvature ``(n-1) f'(r) / f(r)`` of the r-sphere."""
    if not (0.0 < r <= M.r_max):
        raise ConfigError(f"radius {r} outside (0, {M.r_max}]")
    fr = float(M.warp(r))
    left = (M.n - 1) * M.warp_slope(r, "left") / fr
    right = (M.n - 1) * M.warp_slope(r, "right") / fr
    return left, right


def mean_curvature(M: WarpedManifold, r: float) -> float:
    """Mean curvature of the geodesic sphere at radius r.

    Raises
    ------
    CurvatureKink
        If the warp has mismatched one-sided slopes at r (sampled warps at
        grid kinks, closed forms at breakpoints); both values are attached
        to the exception.
    """
    left, right = one_sided_mean_curvature(M, r)
    scale = max(1.0, abs(left), abs(right))
    if abs(left - right) > _KINK_RTOL * scale:
        raise CurvatureKink(
            f"warp has a kink at r={r}: one-sided mean curvature "
            f"{left!r} (left) vs {right!r} (right)", left, right)
    return 0.5 * (left + right)
