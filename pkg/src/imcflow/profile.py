"""Isoperimetric profile diagnostics.

An :class:`IsoProfile` maps enclosed volume to the least boundary area the
model asserts for that volume.  Three forms are supported: a power law
``c * v**alpha``, a two-branch power law glued continuously at a break
volume, and a tabulated profile on a strictly increasing positive volume
grid (piecewise-linear between samples, power-law extrapolated below the
first sample).  Tabulated profiles may be non-monotone.

The *strong* profile is the nondecreasing envelope ``inf over v' >= v`` of
the profile over the represented range; its generalized inverse, the
reciprocal integral ``integral_0^v dv'/Ip``, and the non-degeneracy report
below are the quantities every radius bound in :mod:`imcflow.bounds`
consumes.  Tail behavior (the stand-in for the profile's infimum at
infinite volume) is always measured on the last 20% of the represented
volume range.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, IntegralDiverges, NonDegeneracyExceeded
from .warped import (WarpedManifold, adaptive_simpson, ball_volume_grid,
                     sphere_area, unit_sphere_area)

__all__ = [
    "GrowthReport",
    "IsoProfile",
    "NondegeneracyReport",
    "StrongProfile",
    "ball_volume_lower_bound",
    "check_nondegeneracy",
    "euclidean_profile",
    "inverse_strong_profile",
    "reciprocal_integral",
    "sphere_profile",
    "strong_profile",
    "superlinear_growth_check",
    "symmetric_candidate_profile",
]

_TAIL_FRACTION = 0.8  # tail surrogates use [0.8 * v_max, v_max]


@dataclass(frozen=True)
class IsoProfile:
    """Volume-to-least-area profile in one of three closed forms.

    Attributes
    ----------
    kind : str
        One of ``power``, ``piecewise_power``, ``table``.
    upper_bound_only : bool
        Set on profiles produced by candidate searches, which only ever
        overestimate the true least area.  Radius bounds refuse them.
    """

    kind: str
    c: float = 1.0
    alpha: float = 0.0
    alpha_large: float = 0.0
    v_break: float = 0.0
    v: np.ndarray | None = None
    ip: np.ndarray | None = None
    v_max: float = 1e9
    upper_bound_only: bool = False

    # -- constructors ------------------------------------------------------

    @classmethod
    def power(cls, c: float, alpha: float, v_max: float = 1e9) -> "IsoProfile":
        """Profile ``c * v**alpha``.  ``alpha >= 1`` is allowed but makes the
        reciprocal integral diverge at 0."""
        if c <= 0 or alpha < 0:
            raise ConfigError("power profile needs c > 0 and alpha >= 0")
        return cls(kind="power", c=float(c), alpha=float(alpha), v_max=float(v_max))

    @classmethod
    def piecewise_power(cls, c: float, alpha_small: float, alpha_large: float,
                        v_break: float, v_max: float = 1e9) -> "IsoProfile":
        """Small-volume branch ``c * v**alpha_small`` glued continuously to a
        large-volume branch with exponent ``alpha_large`` at ``v_break``."""
        if c <= 0 or alpha_small < 0 or alpha_large < 0 or v_break <= 0:
            raise ConfigError("piecewise power profile parameters out of range")
        return cls(kind="piecewise_power", c=float(c), alpha=float(alpha_small),
                   alpha_large=float(alpha_large), v_break=float(v_break),
                   v_max=float(v_max))

    @classmethod
    def table(cls, volumes: Sequence[float], areas: Sequence[float],
              upper_bound_only: bool = False) -> "IsoProfile":
        v = np.asarray(volumes, dtype=float)
        ip = np.asarray(areas, dtype=float)
        if v.ndim != 1 or v.shape != ip.shape or v.size < 2:
            raise ConfigError("profile table needs matching 1-d arrays, length >= 2")
        if v[0] <= 0.0 or np.any(np.diff(v) <= 0.0):
            raise ConfigError("profile volumes must be strictly increasing and positive")
        if np.any(ip <= 0.0):
            raise ConfigError("profile areas must be positive")
        return cls(kind="table", v=v, ip=ip, v_max=float(v[-1]),
                   upper_bound_only=upper_bound_only)

    @classmethod
    def from_csv(cls, path, upper_bound_only: bool = False) -> "IsoProfile":
        """Load a tabulated profile from a two-column CSV of (volume, area)."""
        vols, areas = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip():
                    continue
                try:
                    vols.append(float(row[0]))
                    areas.append(float(row[1]))
                except (ValueError, IndexError):
                    if not vols:
                        continue
                    raise ConfigError(f"malformed profile CSV row: {row!r}")
        if len(vols) < 2:
            raise ConfigError(f"profile CSV {path} has fewer than 2 numeric rows")
        return cls.table(vols, areas, upper_bound_only=upper_bound_only)

    # -- evaluation --------------------------------------------------------

    def _c_large(self) -> float:
        return self.c * self.v_break ** (self.alpha - self.alpha_large)

    def _head_fit(self) -> tuple[float, float]:
        """Least-squares power fit ``(c_hat, alpha_hat)`` of the first decade
        of a tabulated profile, used for extrapolation below the first sample."""
        v, ip = self.v, self.ip
        mask = v <= 10.0 * v[0]
        if int(mask.sum()) < 2:
            mask = np.zeros_like(mask)
            mask[:2] = True
        lv, lp = np.log(v[mask]), np.log(ip[mask])
        if np.ptp(lv) == 0.0:
            return float(ip[0]), 0.0
        alpha, logc = np.polyfit(lv, lp, 1)
        return float(math.exp(logc)), float(alpha)

    def evaluate(self, volume):
        """Profile value(s) at the given volume(s)."""
        vq = np.asarray(volume, dtype=float)
        if self.kind == "power":
            out = self.c * np.power(vq, self.alpha)
        elif self.kind == "piecewise_power":
            out = np.where(vq <= self.v_break,
                           self.c * np.power(vq, self.alpha),
                           self._c_large() * np.power(vq, self.alpha_large))
        else:
            c_hat, a_hat = self._head_fit()
            a_hat = max(a_hat, 0.0)
            with np.errstate(invalid="ignore"):
                head = c_hat * np.power(np.maximum(vq, 1e-300), a_hat)
            out = np.where(vq < self.v[0], np.minimum(head, self.ip[0]),
                           np.interp(vq, self.v, self.ip))
        if np.ndim(volume) == 0:
            return float(out)
        return out

    def tail_infimum(self) -> float:
        """Infimum of the profile over the last 20% of the represented range."""
        lo = _TAIL_FRACTION * self.v_max
        if self.kind in ("power", "piecewise_power"):
            return float(self.evaluate(lo))
        mask = self.v >= lo
        cands = [float(self.evaluate(lo))]
        if mask.any():
            cands.append(float(self.ip[mask].min()))
        return min(cands)


@dataclass(frozen=True)
class StrongProfile:
    """Nondecreasing envelope ``v -> inf over v' >= v`` of a profile.

    ``limit_inf`` is the tail surrogate of the underlying profile; the
    envelope equals it from the tail window onward.
    """

    base: IsoProfile
    nodes_v: np.ndarray | None
    nodes_env: np.ndarray | None
    limit_inf: float

    def evaluate(self, volume):
        vq = np.asarray(volume, dtype=float)
        if self.nodes_v is None:
            out = np.minimum(np.asarray(self.base.evaluate(vq), dtype=float),
                             self.limit_inf)
        else:
            v, env = self.nodes_v, self.nodes_env
            # within a cell the envelope is min(linear interpolant, next suffix min)
            idx = np.clip(np.searchsorted(v, vq, side="right"), 1, len(v) - 1)
            raw = np.asarray(self.base.evaluate(vq), dtype=float)
            out = np.minimum(raw, env[idx])
            out = np.where(vq >= v[-1], np.minimum(raw, env[-1]), out)
        if np.ndim(volume) == 0:
            return float(out)
        return out


def strong_profile(p: IsoProfile) -> StrongProfile:
    """Compute the running-infimum envelope of a profile."""
    if p.kind in ("power", "piecewise_power"):
        # both branches are nondecreasing, so the envelope is the profile
        # itself, capped by the tail surrogate
        return StrongProfile(base=p, nodes_v=None, nodes_env=None,
                             limit_inf=p.tail_infimum())
    env = np.minimum.accumulate(p.ip[::-1])[::-1]
    return StrongProfile(base=p, nodes_v=p.v, nodes_env=env,
                         limit_inf=p.tail_infimum())


def inverse_strong_profile(sp: StrongProfile, area: float) -> float:
    """Largest volume whose envelope value is still <= ``area``.

    The empty sublevel set returns 0.  Requires ``0 < area < limit_inf``;
    otherwise the non-degeneracy hypothesis is violated and
    :class:`NonDegeneracyExceeded` is raised.
    """
    if area <= 0.0:
        raise ConfigError(f"area must be positive, got {area}")
    if area >= sp.limit_inf:
        raise NonDegeneracyExceeded(
            f"area {area} reaches the profile tail infimum {sp.limit_inf}")
    p = sp.base
    if p.kind == "power":
        if p.alpha == 0.0:
            return 0.0 if area < p.c else _TAIL_FRACTION * p.v_max
        return (area / p.c) ** (1.0 / p.alpha)
    if p.kind == "piecewise_power":
        at_break = p.c * p.v_break ** p.alpha
        if area <= at_break:
            if p.alpha == 0.0:
                return 0.0 if area < p.c else p.v_break
            return (area / p.c) ** (1.0 / p.alpha)
        if p.alpha_large == 0.0:
            return p.v_break
        return (area / p._c_large()) ** (1.0 / p.alpha_large)
    lo, hi = 0.0, _TAIL_FRACTION * p.v_max
    if sp.evaluate(hi) <= area:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sp.evaluate(mid) <= area:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return lo


def reciprocal_integral(p: IsoProfile, volume: float) -> float:
    """``integral_0^volume dv / Ip(v)``.

    Power-law branches integrate analytically; tabulated profiles get an
    analytic head from the fitted first-decade power law plus deterministic
    quadrature of the reciprocal interpolant over the sampled range.

    Raises
    ------
    IntegralDiverges
        If the (fitted) head exponent is >= 1.
    """
    if volume < 0.0:
        raise ConfigError(f"volume must be >= 0, got {volume}")
    if volume == 0.0:
        return 0.0

    def power_head(c, alpha, v):
        if alpha >= 1.0:
            raise IntegralDiverges(
                f"head exponent {alpha} >= 1: reciprocal integral diverges at 0")
        return v ** (1.0 - alpha) / (c * (1.0 - alpha))

    if p.kind == "power":
        return power_head(p.c, p.alpha, volume)
    if p.kind == "piecewise_power":
        if volume <= p.v_break:
            return power_head(p.c, p.alpha, volume)
        head = power_head(p.c, p.alpha, p.v_break)
        cl, al = p._c_large(), p.alpha_large
        if al == 1.0:
            tail = math.log(volume / p.v_break) / cl
        else:
            tail = (volume ** (1.0 - al) - p.v_break ** (1.0 - al)) / (cl * (1.0 - al))
        return head + tail
    if volume > p.v_max * (1.0 + 1e-12):
        raise ConfigError(
            f"volume {volume} beyond represented profile range {p.v_max}")
    c_hat, a_hat = p._head_fit()
    head_v = min(volume, float(p.v[0]))
    total = power_head(c_hat, a_hat, head_v)
    if volume > p.v[0]:
        total += adaptive_simpson(lambda x: 1.0 / float(np.interp(x, p.v, p.ip)),
                                  float(p.v[0]), min(volume, float(p.v_max)),
                                  rel_tol=1e-10)
    return total


@dataclass(frozen=True)
class NondegeneracyReport:
    """Outcome of the two hypotheses every radius bound needs."""

    area: float
    liminf_surrogate: float
    exceeds_area: bool
    head_volume: float
    head_integral_finite: bool
    head_integral_value: float | None

    @property
    def passed(self) -> bool:
        return self.exceeds_area and self.head_integral_finite

    def to_dict(self) -> dict:
        return {
            "area": self.area,
            "liminf_surrogate": self.liminf_surrogate,
            "exceeds_area": self.exceeds_area,
            "head_volume": self.head_volume,
            "head_integral_finite": self.head_integral_finite,
            "head_integral_value": self.head_integral_value,
            "passed": self.passed,
        }


def check_nondegeneracy(p: IsoProfile, area: float) -> NondegeneracyReport:
    """Check that the profile tail strictly exceeds ``area`` and that the
    reciprocal integral converges at zero volume."""
    if area <= 0.0:
        raise ConfigError(f"area must be positive, got {area}")
    surrogate = p.tail_infimum()
    head_v = min(1.0, 0.01 * p.v_max)
    try:
        head_val = reciprocal_integral(p, head_v)
        finite = True
    except IntegralDiverges:
        head_val, finite = None, False
    return NondegeneracyReport(area=float(area), liminf_surrogate=surrogate,
                               exceeds_area=surrogate > area,
                               head_volume=head_v,
                               head_integral_finite=finite,
                               head_integral_value=head_val)


def ball_volume_lower_bound(p: IsoProfile) -> float:
    """The volume scale at which the reciprocal integral reaches 1.

    Any region whose reciprocal-integral "budget" is below 1 has volume
    below this value, so it acts as a lower bound normalization.
    """
    target = 1.0
    if reciprocal_integral(p, 1e-300) >= target:  # also raises on divergence
        return 0.0
    hi = 1.0
    for _ in range(200):
        if reciprocal_integral(p, min(hi, p.v_max)) >= target or hi >= p.v_max:
            break
        hi *= 2.0
    hi = min(hi, p.v_max)
    if reciprocal_integral(p, hi) < target:
        raise ConfigError("reciprocal integral stays below 1 on the represented range")
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if reciprocal_integral(p, mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class GrowthReport:
    """Tail volume-growth diagnostic for a warped manifold."""

    superlinear: bool
    linear_coefficient: float
    implied_tail_bound: float | None
    window: tuple[float, float]
    ratios: tuple

    def to_dict(self) -> dict:
        return {
            "superlinear": self.superlinear,
            "linear_coefficient": self.linear_coefficient,
            "implied_tail_bound": self.implied_tail_bound,
            "window": list(self.window),
            "ratios": list(self.ratios),
        }


def superlinear_growth_check(M: WarpedManifold, r_lo: float | None = None,
                             r_hi: float | None = None, samples: int = 16,
                             growth_factor: float = 1.5) -> GrowthReport:
    """Decide whether ball volume grows superlinearly on a tail window.

    ``V(r)/r`` is sampled on ``[r_lo, r_hi]``; growth counts as superlinear
    when the ratio never decreases and expands by at least ``growth_factor``
    across the window.  When it does not, ``V(r) <= C r`` holds on the
    window with ``C`` the largest observed ratio, and the profile tail
    infimum can be at most ``2 C`` (reported as ``implied_tail_bound``).
    """
    if r_hi is None:
        r_hi = M.r_max
    if r_lo is None:
        r_lo = _TAIL_FRACTION * r_hi
    if not (0.0 < r_lo < r_hi <= M.r_max):
        raise ConfigError(f"bad growth window [{r_lo}, {r_hi}]")
    radii = np.linspace(r_lo, r_hi, samples)
    vols = ball_volume_grid(M, radii)
    ratios = vols / radii
    increasing = bool(np.all(np.diff(ratios) >= -1e-9 * ratios[:-1]))
    expanded = bool(ratios[-1] >= growth_factor * ratios[0])
    superlinear = increasing and expanded
    coeff = float(ratios.max())
    return GrowthReport(superlinear=superlinear, linear_coefficient=coeff,
                        implied_tail_bound=None if superlinear else 2.0 * coeff,
                        window=(float(r_lo), float(r_hi)),
                        ratios=tuple(float(x) for x in ratios))


def euclidean_profile(n: int = 3) -> IsoProfile:
    """Sharp power-law profile of flat n-space: c_n * v^((n-1)/n).

    The constant c_n = n^((n-1)/n) * omega^(1/n), with omega the unit
    sphere area in dimension n, makes round balls achieve equality.
    """
    if not 2 <= int(n) <= 12:
        raise ConfigError("dimension must lie in [2, 12]")
    n = int(n)
    omega = unit_sphere_area(n)
    c = n ** ((n - 1) / n) * omega ** (1.0 / n)
    return IsoProfile.power(c, (n - 1) / n)


def sphere_profile(M: WarpedManifold, num: int = 512) -> IsoProfile:
    """Tabulated profile induced by geodesic spheres: (ball volume, sphere area).

    This asserts centered balls as least-area regions; it is a model input,
    not a derived fact, and enters the bounds machinery on that basis.
    """
    radii = M.sample_grid(num)
    radii = radii[radii > 0.0]
    vols = ball_volume_grid(M, radii)
    areas = unit_sphere_area(M.n) * np.asarray(M.warp(radii), dtype=float) ** (M.n - 1)
    keep = np.concatenate([[True], np.diff(vols) > 0.0])
    return IsoProfile.table(vols[keep], areas[keep])


def symmetric_candidate_profile(M: WarpedManifold, grid_points: int = 24,
                                max_annuli: int = 3,
                                buckets: int = 64) -> IsoProfile:
    """Upper-bound candidate profile from unions of up to 3 centered annuli.

    Annulus endpoints range over a radius grid (including 0, where a
    positive warp contributes its boundary sphere area).  For each volume
    bucket the least total boundary area among enumerated unions is kept.
    The result is flagged ``upper_bound_only``: a candidate search can only
    ever overestimate the true least area.
    """
    if grid_points < 8:
        raise ConfigError("candidate profile grid too coarse (< 8 cells)")
    if not (1 <= max_annuli <= 3):
        raise ConfigError("max_annuli must be 1, 2, or 3")
    radii = M.sample_grid(grid_points)
    vols = ball_volume_grid(M, radii)
    areas = unit_sphere_area(M.n) * np.asarray(M.warp(radii), dtype=float) ** (M.n - 1)
    if float(M.warp(0.0)) == 0.0:
        areas[0] = 0.0

    from itertools import combinations

    total_v = vols[-1]
    edges = np.linspace(0.0, total_v, buckets + 1)
    best = np.full(buckets, np.inf)
    best_vol = np.zeros(buckets)
    idx = range(len(radii))
    for m in range(1, max_annuli + 1):
        for combo in combinations(idx, 2 * m):
            vol = 0.0
            per = 0.0
            for j in range(m):
                a, b = combo[2 * j], combo[2 * j + 1]
                vol += vols[b] - vols[a]
                per += areas[a] + areas[b]
            if vol <= 0.0:
                continue
            k = min(int(np.searchsorted(edges, vol, side="right")) - 1, buckets - 1)
            if per < best[k]:
                best[k] = per
                best_vol[k] = vol
    mask = np.isfinite(best) & (best_vol > 0.0)
    order = np.argsort(best_vol[mask])
    v_out = best_vol[mask][order]
    p_out = best[mask][order]
    keep = np.concatenate([[True], np.diff(v_out) > 0.0])
    return IsoProfile.table(v_out[keep], p_out[keep], upper_bound_only=True)
