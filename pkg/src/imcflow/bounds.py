"""Explicit radius bounds for the symmetric flow and ODE comparison tools.

Every bound follows the same recipe: invert the strong profile envelope to
cap the volume a sublevel set can reach with its known perimeter, then
integrate the reciprocal profile up to that volume cap.  The module also
evaluates the separable comparison ODE behind those bounds and the excess
area inequality satisfied by the flow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .profile import (IsoProfile, check_nondegeneracy, inverse_strong_profile,
                      reciprocal_integral, strong_profile)
from .symmetric import SymmetricSolution
from .warped import sphere_area

__all__ = ["AsymptoteReport", "BoundReport", "ComparisonSolution",
           "barrier_radius", "excess_inequality_check", "exhaustion_radius",
           "growth_asymptote", "main_bound", "ode_comparison",
           "verify_containment"]

_DIM_NOTE_RANGE = (3, 7)


def _volume_cap_integral(p: IsoProfile, area: float) -> float:
    """Integral of 1/profile up to the largest volume with envelope <= area."""
    vol_cap = inverse_strong_profile(strong_profile(p), area)
    return reciprocal_integral(p, vol_cap)


def barrier_radius(p: IsoProfile, r: float, a: float) -> float:
    """Radius of a ball guaranteed to contain any set of perimeter ``a``
    that contains a point at distance ``r`` and minimizes area outward.

    Equals r + 1 + 2 * integral of 1/profile up to the inverted envelope.
    """
    if r < 0 or a <= 0:
        raise ConfigError("barrier_radius needs r >= 0 and a > 0")
    return r + 1.0 + 2.0 * _volume_cap_integral(p, a)


def exhaustion_radius(p: IsoProfile, r0: float, a0: float, t: float,
                      i: int) -> float:
    """Radius bound for the time-t sublevel set of the truncated flows.

    The first radius (i = 1) bounds the open sublevel set; the second
    (i = 2) also swallows the jump at time t.
    """
    if i not in (1, 2):
        raise ConfigError(f"exhaustion radius index must be 1 or 2, got {i}")
    if r0 < 0 or a0 <= 0 or t < 0:
        raise ConfigError("exhaustion_radius needs r0 >= 0, a0 > 0, t >= 0")
    integral = _volume_cap_integral(p, math.exp(t) * a0)
    return r0 + 2.0 * i + (2.0 * i + math.exp(t)) * integral


def main_bound(p: IsoProfile, r0: float, a0: float, t: float,
               big_area: float | None = None) -> float:
    """Quantitative radius bound R(t) = r0 + 2 + (2 + e^t) * integral.

    When ``big_area`` is supplied the time must stay below the horizon
    log(big_area / a0); beyond it the bound is not defined.
    """
    if r0 < 0 or a0 <= 0 or t < 0:
        raise ConfigError("main_bound needs r0 >= 0, a0 > 0, t >= 0")
    if big_area is not None:
        horizon = math.log(big_area / a0)
        if t > horizon + 1e-12:
            raise ConfigError(
                f"time {t:g} beyond the configured horizon {horizon:g}")
    integral = _volume_cap_integral(p, math.exp(t) * a0)
    return r0 + 2.0 + (2.0 + math.exp(t)) * integral


@dataclass(frozen=True)
class AsymptoteReport:
    """Leading-order growth of the main bound for power profiles.

    For profile c * v^alpha with 0 < alpha < 1 the bound grows like
    coefficient * exp(rate * t); the rate equals n/(n-1) when alpha is
    the critical exponent (n-1)/n.
    """
    rate: float
    coefficient: float
    dimension_equivalent: float

    def to_dict(self) -> dict:
        return {"rate": self.rate, "coefficient": self.coefficient,
                "dimension_equivalent": self.dimension_equivalent}


def growth_asymptote(p: IsoProfile, a0: float) -> AsymptoteReport:
    """Asymptotic coefficient of the main bound for a power profile."""
    if p.kind != "power":
        raise ConfigError("growth asymptote applies to power profiles")
    alpha, c = p.alpha, p.c
    if not 0.0 < alpha < 1.0:
        raise ConfigError("growth asymptote needs exponent strictly in (0, 1)")
    if a0 <= 0:
        raise ConfigError("a0 must be positive")
    rate = 1.0 / alpha
    coefficient = (a0 / c) ** ((1.0 - alpha) / alpha) / (c * (1.0 - alpha))
    return AsymptoteReport(rate, coefficient, 1.0 / (1.0 - alpha))


@dataclass(frozen=True)
class BoundReport:
    """One containment check of the flow at a single time."""
    t: float
    rho_t: float
    R_main: float
    R1: float
    R2: float
    R_barrier: float
    contained: bool
    margin: float
    dimension_note: str | None = None

    def to_row(self) -> tuple:
        return (self.t, self.rho_t, self.R1, self.R_main,
                self.contained, self.margin)

    def to_dict(self) -> dict:
        doc = {"t": self.t, "rho_t": self.rho_t, "R_main": self.R_main,
               "R1": self.R1, "R2": self.R2, "R_barrier": self.R_barrier,
               "contained": self.contained, "margin": self.margin}
        if self.dimension_note:
            doc["dimension_note"] = self.dimension_note
        return doc


def verify_containment(sol: SymmetricSolution, p: IsoProfile, a0: float,
                       times) -> list[BoundReport]:
    """Check rho_t <= R1(t) for each time; reports carry verdicts.

    A false ``contained`` flags an inconsistency between the supplied
    profile and the geometry (the profile does not actually lower-bound
    perimeters on this manifold).
    """
    note = None
    if not _DIM_NOTE_RANGE[0] <= sol.n <= _DIM_NOTE_RANGE[1]:
        note = (f"dimension {sol.n} outside the stated range "
                f"[{_DIM_NOTE_RANGE[0]}, {_DIM_NOTE_RANGE[1]}]; "
                "formulas are dimension-generic")
    reports = []
    for t in times:
        t = float(t)
        rho_t, _ = sol.sublevel(t)
        integral = _volume_cap_integral(p, math.exp(t) * a0)
        r1 = sol.r0 + 2.0 + (2.0 + math.exp(t)) * integral
        r2 = sol.r0 + 4.0 + (4.0 + math.exp(t)) * integral
        r_main = main_bound(p, sol.r0, a0, t)
        r_barrier = rho_t + 1.0 + 2.0 * integral
        margin = r1 - rho_t
        reports.append(BoundReport(t, float(rho_t), r_main, r1, r2, r_barrier,
                                   bool(margin >= 0.0), margin, note))
    return reports


@dataclass(frozen=True)
class ComparisonSolution:
    """Exact solution of V' = -profile(V) / factor with V(0) = v0.

    Solves the separable equation through the reciprocal-profile
    antiderivative G: the radius where the volume has dropped to v is
    factor * (G(v0) - G(v)), and extinction happens at factor * G(v0).
    """
    profile: IsoProfile
    v0: float
    factor: float
    extinction_radius: float
    _g0: float

    def volume_at(self, rho: float) -> float:
        if rho < 0:
            raise ConfigError("comparison solution defined for rho >= 0")
        if rho >= self.extinction_radius:
            return 0.0
        target = self._g0 - rho / self.factor
        p = self.profile
        if p.kind == "power":
            # G(v) = v^(1-alpha) / (c (1-alpha)); invert in closed form
            expo = 1.0 - p.alpha
            return (target * p.c * expo) ** (1.0 / expo)
        lo, hi = 0.0, self.v0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if reciprocal_integral(p, mid) < target:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    __call__ = volume_at


def ode_comparison(p: IsoProfile, v0: float, factor: float) -> ComparisonSolution:
    """Comparison solution for the volume decay inequality.

    ``factor`` is the Lipschitz constant of the distance-style test
    function (2 for the barrier argument, 1 + e^t in the exhaustion
    argument).
    """
    if v0 <= 0:
        raise ConfigError("initial volume must be positive")
    if factor < 1.0:
        raise ConfigError("factor must be at least 1")
    g0 = reciprocal_integral(p, v0)
    return ComparisonSolution(p, float(v0), float(factor),
                              float(factor * g0), float(g0))


def excess_inequality_check(sol: SymmetricSolution, t: float, rho: float) -> float:
    """Slack of the excess area inequality at one time and radius.

    With A the flow boundary area outside the closed ball of radius rho
    and S the cross-section area of the sublevel set on that sphere,
    returns e^t * S - A, which is nonnegative whenever rho >= r0.
    """
    if not 0.0 < t < sol.max_existence_time():
        raise ConfigError(f"time {t:g} outside the existence window")
    if not sol.r0 <= rho <= sol.M.r_max:
        raise ConfigError(f"radius {rho:g} outside [r0, r_max]")
    rho_t, _ = sol.sublevel(t)
    boundary_outside = sphere_area(sol.M, rho_t) if rho_t > rho else 0.0
    cross_section = sphere_area(sol.M, rho) if rho < rho_t else 0.0
    return math.exp(t) * cross_section - boundary_outside
