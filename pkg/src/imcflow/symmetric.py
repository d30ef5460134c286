"""Exact expanding-flow solutions on rotationally symmetric manifolds.

The level-set ("arrival time") function of the weak flow of a centered ball
``{r < r0}`` has the closed form

    u(r) = (n - 1) * (log m(r) - log m(r0)),   m(r) = inf of f over [r, oo)

on the represented window.  ``m`` is computed as a running infimum from the
right; it is exact whenever the warp is monotone on every grid cell, which
the shipped models guarantee by declaring their interior extrema as
breakpoints.  Normalizing by ``m(r0)`` rather than ``f(r0)`` makes the
sublevel sets energy-minimizing even when the warp dips below its value at
``r0`` before recovering: the flow then jumps at t = 0 to the area minimum,
not merely to the radius where the warp recovers.  For warps with
``f >= f(r0)`` ahead of the ball (all shipped models) the two normalizations
coincide.

Plateaus of ``m`` are the jumps of the flow; on a plateau the two boundary
spheres enclose it with equal area.  The existence horizon is
``(n - 1) * log(tail_inf / m(r0))`` with ``tail_inf`` the infimum of the
warp over the last 20% of the window, promoted to infinity when the warp is
detected unbounded (monotone tail increase above a configurable threshold).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, NotPrecompact, PlateauRegion
from .warped import WarpedManifold, mean_curvature, sphere_area

__all__ = ["SymmetricSolution", "TailReport", "solve"]

_PLATEAU_RTOL = 1e-12  # running-infimum values within this are one plateau
_BISECT_STEPS = 90


@dataclass(frozen=True)
class TailReport:
    """Tail behavior of the warp on the last stretch of the window."""

    unbounded: bool
    tail_infimum: float
    window: tuple[float, float]
    increase: float
    strictly_increasing: bool

    def to_dict(self) -> dict:
        return {
            "unbounded": self.unbounded,
            "tail_infimum": self.tail_infimum,
            "window": list(self.window),
            "increase": self.increase,
            "strictly_increasing": self.strictly_increasing,
        }


class SymmetricSolution:
    """Arrival function of the weak flow started from ``{r < r0}``.

    Not constructed directly; use :func:`solve`.  The tabulation carries the
    radius grid, warp samples, running infimum, and arrival values; pointwise
    queries interpolate exactly through the running-infimum structure rather
    than linearly, so evaluations are grid-independent for warps that are
    monotone per cell.
    """

    def __init__(self, M: WarpedManifold, r0: float, grid: np.ndarray,
                 f_vals: np.ndarray, runmin: np.ndarray, u: np.ndarray,
                 t_horizon: float, tail: TailReport,
                 jumps: list[tuple[float, float, float]]):
        self.M = M
        self.n = M.n
        self.r0 = float(r0)
        self.grid = grid
        self.f_vals = f_vals
        self.runmin = runmin
        self.u = u
        self.base_level = float(runmin[0])
        self.t_horizon = t_horizon
        self.tail = tail
        self.jumps = jumps

    # -- pointwise evaluation ----------------------------------------------

    def _warp_at(self, r):
        return np.asarray(self.M.warp(r), dtype=float)

    def runmin_at(self, r):
        """Running infimum of the warp over [r, r_max], vectorized."""
        rq = np.asarray(r, dtype=float)
        if np.any(rq < self.r0) or np.any(rq > self.M.r_max):
            raise ConfigError("radius outside the solved window")
        idx = np.searchsorted(self.grid, rq, side="right")
        idx = np.clip(idx, 1, len(self.grid) - 1)
        # within a monotone cell the partial-cell infimum is min(f(r), f(cell end)),
        # and f(cell end) >= runmin(cell end), so min(f(r), next runmin) suffices
        out = np.minimum(self._warp_at(rq), self.runmin[idx])
        out = np.where(rq >= self.grid[-1], self.runmin[-1], out)
        return out

    def evaluate(self, r):
        """Arrival time u(r); vectorized."""
        vals = (self.n - 1) * (np.log(self.runmin_at(r)) - math.log(self.base_level))
        if np.ndim(r) == 0:
            return float(vals)
        return vals

    # -- sublevel geometry ---------------------------------------------------

    def _crossing(self, target: float, lo_idx: int) -> float:
        """Radius in cell (lo_idx, lo_idx+1] where the warp rises through target."""
        a, b = self.grid[lo_idx], self.grid[lo_idx + 1]
        fa, fb = self.f_vals[lo_idx], self.f_vals[lo_idx + 1]
        if fa >= target:
            return float(a)
        if fb <= target:
            return float(b)
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (a + b)
            if float(self._warp_at(mid)) < target:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)

    def sublevel(self, t: float) -> tuple[float, float]:
        """Radii ``(rho_t, rho_t_plus)`` of ``{u < t}`` and ``{u <= t}``.

        Raises
        ------
        NotPrecompact
            If ``t`` reaches the existence horizon, or the queried level
            escapes the represented radius window.
        """
        if t < 0.0:
            raise ConfigError(f"time must be >= 0, got {t}")
        if t >= self.t_horizon:
            raise NotPrecompact(
                f"time {t} at or beyond the existence horizon {self.t_horizon}")
        if t > self.u[-1]:
            raise NotPrecompact(
                f"level {t} escapes the represented window (max arrival "
                f"{self.u[-1]:.6g} at r_max={self.grid[-1]:.6g}); enlarge r_max")
        m = self.runmin
        target = self.base_level * math.exp(t / (self.n - 1))
        tol = _PLATEAU_RTOL * target
        j = int(np.searchsorted(m, target - tol, side="left"))
        if j == 0:
            rho = self.r0
        else:
            rho = self._crossing(target, j - 1)
        k = int(np.searchsorted(m, target + tol, side="right")) - 1
        if k < 0:
            rho_plus = self.r0
        elif abs(m[k] - target) <= tol:
            rho_plus = float(self.grid[k])
        else:
            # no plateau at this level; the closure radius is the same crossing
            rho_plus = self._crossing(target, k) if k < len(m) - 1 else float(self.grid[-1])
        return rho, max(rho, rho_plus)

    def jump_times(self) -> list[float]:
        """Times at which the flow jumps (strictly before the horizon)."""
        return [t for (t, _, _) in self.jumps]

    def max_existence_time(self) -> float:
        """Horizon for precompact sublevels; ``inf`` when the warp is unbounded."""
        return self.t_horizon

    def area_law_error(self, t: float) -> float:
        """Relative mismatch of |bdry E_t| against ``e^t |bdry E_0^+|``."""
        if not (0.0 <= t < self.t_horizon):
            raise NotPrecompact(f"time {t} outside [0, {self.t_horizon})")
        rho_t, _ = self.sublevel(t)
        _, rho0p = self.sublevel(0.0)
        expected = math.exp(t) * sphere_area(self.M, rho0p)
        return abs(sphere_area(self.M, rho_t) - expected) / expected

    def plateau_containing(self, r: float) -> tuple[float, float] | None:
        """(start, stop) radii of the plateau containing r, else None."""
        for (_, start, stop) in self.jumps:
            if start <= r <= stop:
                return (start, stop)
        # trailing plateau (escape region) is not a jump but still flat
        m = self.runmin
        k = int(np.searchsorted(self.grid, r, side="left"))
        k = min(max(k, 0), len(m) - 1)
        if float(self._warp_at(r)) > m[k] * (1.0 + 10.0 * _PLATEAU_RTOL):
            lo = k
            while lo > 0 and m[lo - 1] >= m[k] * (1.0 - _PLATEAU_RTOL):
                lo -= 1
            hi = k
            while hi < len(m) - 1 and m[hi + 1] <= m[k] * (1.0 + _PLATEAU_RTOL):
                hi += 1
            return (float(self.grid[lo]), float(self.grid[hi]))
        return None

    def gradient_residual(self, r: float, h: float = 1e-5) -> float:
        """|u'(r) - H(r)| with u' by centered differences and H the sphere
        mean curvature.  Raises :class:`PlateauRegion` inside a plateau."""
        if not (self.r0 + h < r < self.M.r_max - h):
            raise ConfigError(f"radius {r} too close to the window ends")
        span = self.plateau_containing(r)
        if span is not None and span[0] < r < span[1]:
            raise PlateauRegion(
                f"r={r} lies in the flow plateau [{span[0]:.6g}, {span[1]:.6g}]",
                start=span[0], stop=span[1])
        du = (self.evaluate(r + h) - self.evaluate(r - h)) / (2.0 * h)
        return abs(du - mean_curvature(self.M, r))

    def properness_check(self) -> TailReport:
        """Tail diagnostic backing the horizon classification."""
        return self.tail

    def as_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(radii, arrival values) of the tabulation."""
        return self.grid.copy(), self.u.copy()


def _tail_report(grid: np.ndarray, f_vals: np.ndarray, tail_fraction: float,
                 abs_tol: float, rel_tol: float) -> TailReport:
    r_lo = max(grid[0], grid[-1] * (1.0 - tail_fraction))
    mask = grid >= r_lo
    fw = f_vals[mask]
    increase = float(fw[-1] - fw[0])
    strictly = bool(np.all(np.diff(fw) > 0.0))
    threshold = max(abs_tol, rel_tol * abs(fw[0]))
    unbounded = strictly and increase >= threshold
    tail_inf = float(fw.min())
    return TailReport(unbounded=unbounded, tail_infimum=tail_inf,
                      window=(float(r_lo), float(grid[-1])), increase=increase,
                      strictly_increasing=strictly)


def solve(M: WarpedManifold, r0: float, num: int = 4096,
          extra_radii: Sequence[float] = (), tail_fraction: float = 0.2,
          growth_abs_tol: float = 1e-6,
          growth_rel_tol: float = 1e-3) -> SymmetricSolution:
    """Solve the weak flow of the centered ball ``{r < r0}``.

    Parameters
    ----------
    M : WarpedManifold
    r0 : float
        Initial ball radius, ``0 < r0 < r_max``.
    num : int
        Base grid resolution on ``[r0, r_max]``; breakpoints and
        ``extra_radii`` are merged in.
    """
    if not (0.0 < r0 < M.r_max):
        raise ConfigError(f"need 0 < r0 < r_max, got r0={r0}, r_max={M.r_max}")
    if num < 16:
        raise ConfigError("grid resolution too coarse (num < 16)")
    grid = M.sample_grid(num, r_lo=r0, extra=extra_radii)
    f_vals = np.asarray(M.warp(grid), dtype=float)
    if np.any(f_vals <= 0.0):
        raise ConfigError("warp must be positive on the solved window")
    runmin = np.minimum.accumulate(f_vals[::-1])[::-1]
    base = float(runmin[0])
    u = (M.n - 1) * (np.log(runmin) - math.log(base))
    tail = _tail_report(grid, f_vals, tail_fraction, growth_abs_tol, growth_rel_tol)
    if tail.unbounded:
        horizon = math.inf
    else:
        horizon = (M.n - 1) * (math.log(tail.tail_infimum) - math.log(base))
        horizon = max(horizon, 0.0)

    # plateaus of the running infimum are the jumps
    jumps: list[tuple[float, float, float]] = []
    i = 0
    nvals = len(runmin)
    while i < nvals - 1:
        j = i
        while (j + 1 < nvals
               and runmin[j + 1] - runmin[i] <= _PLATEAU_RTOL * runmin[i]):
            j += 1
        if j > i and grid[j] > grid[i]:
            level = float(u[j])
            if level < horizon and grid[j] < grid[-1]:
                if i == 0:
                    start = float(grid[0])
                else:
                    # refine the entry radius: where the warp rises through
                    # the plateau level inside the preceding cell
                    a, b = grid[i - 1], grid[i]
                    fa = f_vals[i - 1]
                    target = float(runmin[i])
                    if fa >= target:
                        start = float(a)
                    else:
                        loh, hih = float(a), float(b)
                        for _ in range(_BISECT_STEPS):
                            mid = 0.5 * (loh + hih)
                            if float(M.warp(mid)) < target:
                                loh = mid
                            else:
                                hih = mid
                        start = 0.5 * (loh + hih)
                jumps.append((level, start, float(grid[j])))
        i = j + 1

    return SymmetricSolution(M, r0, grid, f_vals, runmin, u, horizon, tail, jumps)
