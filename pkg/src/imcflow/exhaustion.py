"""Conic truncation of a warped manifold and the exhaustion limit.

The construction modifies the warp beyond a cutoff radius k: unchanged up
to k, strictly enlarged on a short collar (k, k + delta], and exactly
linear past the collar.  The linear end makes the warp eventually
increasing and unbounded, so the symmetric flow on the modified manifold
is proper for any starting radius below k.  As k grows, the escape time
T_k (the last time the flow stays inside the ball of radius k) passes any
horizon permitted by the isoperimetric bounds, and the truncated
solutions agree on the regions they share, which yields the limit
solution on the original manifold.

Blend used on the collar (x = (r - k) / delta in (0, 1]):

    f_k(r) = (1 - x) f(r) + x L(r) + (1/16) x (1 - x) f(r),
    L(r)   = sqrt(C) * F + F * (r - k - delta),   F = max f on the collar,

with C found by doubling until f_k > f holds at every point of a
1000-point collar grid.  The blend is continuous (generally with corners
at k and k + delta); only continuity, the strict collar inequality, and
the linear tail are relied upon downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import symmetric
from .bounds import exhaustion_radius
from .complexes import (CellComplex, RegionSet, certify_weak_solution,
                        density_from_arrival)
from .errors import ConeConstructionError, ConfigError, NonDegeneracyExceeded
from .profile import IsoProfile, check_nondegeneracy
from .symmetric import SymmetricSolution
from .warped import WarpedManifold, sphere_area

__all__ = ["ConicModel", "JumpControlReport", "LimitResult",
           "StabilizationReport", "build_cone", "first_escape_time",
           "jumping_control_check", "limit_solution", "solve_on_cone",
           "stabilization_check"]

_BUMP_COEFF = 0.0625  # quadratic collar bump amplitude
_COLLAR_POINTS = 1000
_MAX_SLOPE_CONST = 1e6


@dataclass(frozen=True)
class ConicModel:
    """A warped manifold truncated by a linear cone beyond radius k."""
    base: WarpedManifold
    k: float
    delta: float
    slope_const: float
    manifold: WarpedManifold
    collar_margin: float

    @property
    def n(self) -> int:
        return self.base.n


def _make_blend(M: WarpedManifold, k: float, delta: float, const: float):
    collar_max = None
    probe = np.linspace(k, k + delta, 2049)
    collar_max = float(np.max(M.warp(probe)))
    root = math.sqrt(const)

    def fk(r: float) -> float:
        if r <= k:
            return float(M.warp(r))
        line = root * collar_max + collar_max * (r - k - delta)
        if r > k + delta:
            return line
        x = (r - k) / delta
        base = float(M.warp(r))
        return (1.0 - x) * base + x * line + _BUMP_COEFF * x * (1.0 - x) * base

    return fk, collar_max


def build_cone(M: WarpedManifold, k: float, delta: float = 0.125,
               r0_hint: float | None = None) -> ConicModel:
    """Attach a linear cone to the warp beyond radius k.

    The collar width delta is capped at 1/8.  The slope constant starts at
    1 and doubles until the blended warp strictly exceeds the original at
    every interior point of a 1000-point collar grid; failure to do so
    below 1e6 reports a degenerate input warp.
    """
    if not 0.0 < k < M.r_max - 1.0:
        raise ConfigError(f"cutoff k={k:g} must lie in (0, r_max - 1)")
    if not 0.0 < delta <= 0.125:
        raise ConfigError(f"collar width delta={delta:g} must lie in (0, 1/8]")
    if r0_hint is not None and r0_hint >= k:
        raise ConfigError("starting radius must lie below the cutoff")
    collar = np.linspace(k, k + delta, _COLLAR_POINTS + 2)[1:-1]
    base_vals = np.asarray(M.warp(collar), dtype=float)
    const = 1.0
    while True:
        fk, collar_max = _make_blend(M, k, delta, const)
        blend_vals = np.array([fk(r) for r in collar])
        diff = blend_vals - base_vals
        if np.all(diff > 0.0):
            break
        const *= 2.0
        if const > _MAX_SLOPE_CONST:
            raise ConeConstructionError(
                f"no slope constant up to {_MAX_SLOPE_CONST:g} lifts the "
                f"collar above the warp near k={k:g} (degenerate warp)")
    r_max_k = max(M.r_max, 2.0 * (k + delta) + 8.0)
    breakpoints = tuple(b for b in M.breakpoints if b < k) + (k, k + delta)
    blended = WarpedManifold.from_function(
        M.n, fk, r_max_k, name=f"{M.name}+cone@{k:g}", breakpoints=breakpoints)
    return ConicModel(M, float(k), float(delta), const, blended,
                      float(diff.min()))


def solve_on_cone(cm: ConicModel, r0: float, num: int = 4096) -> SymmetricSolution:
    """Symmetric flow on the truncated manifold; always proper."""
    if r0 >= cm.k:
        raise ConfigError(f"r0={r0:g} must lie below the cutoff k={cm.k:g}")
    collar_nodes = tuple(np.linspace(cm.k, cm.k + cm.delta, 33))
    sol = symmetric.solve(cm.manifold, r0, num=num, extra_radii=collar_nodes)
    if not sol.properness_check():
        raise ConeConstructionError(
            "truncated flow failed the properness check; the linear end "
            "did not dominate the warp tail")
    return sol


def first_escape_time(sol: SymmetricSolution, k: float) -> float:
    """Latest time the flow stays inside the ball of radius k.

    Equals the arrival value at radius k.  The sublevel set at that time
    is verified to still be contained in the ball.
    """
    t_k = float(sol.evaluate(k))
    if t_k < 0.0:
        raise ConeConstructionError("escape time below zero; cutoff inside "
                                    "the initial region")
    rho, _ = sol.sublevel(t_k)
    if rho > k * (1.0 + 1e-12):
        raise ConeConstructionError(
            f"sublevel at the escape time reaches {rho:g} > k={k:g}")
    return t_k


@dataclass(frozen=True)
class JumpControlReport:
    """Verdict that a jump at time t stays inside the barrier radius."""
    t: float
    base_area: float
    premise_radius: float
    bound_radius: float | None
    rho_plus: float | None
    hypothesis_ok: bool
    cone_beyond_bound: bool | None
    controlled: bool | None

    @property
    def passed(self) -> bool:
        return bool(self.hypothesis_ok and self.cone_beyond_bound
                    and self.controlled)

    def to_dict(self) -> dict:
        return {"t": self.t, "base_area": self.base_area,
                "premise_radius": self.premise_radius,
                "bound_radius": self.bound_radius, "rho_plus": self.rho_plus,
                "hypothesis_ok": self.hypothesis_ok,
                "cone_beyond_bound": self.cone_beyond_bound,
                "controlled": self.controlled, "passed": self.passed}


def jumping_control_check(cm: ConicModel, sol: SymmetricSolution,
                          p: IsoProfile, t: float, r: float | None = None,
                          a0: float | None = None) -> JumpControlReport:
    """Check that the closed sublevel set at time t obeys the jump bound.

    Premise: the open sublevel set at t lies inside the ball of radius r
    (default: its own outer radius).  The bound is r + 1 + 2 * the
    reciprocal-profile integral up to the volume cap at area e^t * a0,
    and the closed sublevel set must stay inside it.  Hypothesis failures
    (non-degeneracy at the grown area, premise, cutoff beyond the bound)
    are reported, not raised.
    """
    from .bounds import _volume_cap_integral

    t = float(t)
    rho_t, rho_plus = sol.sublevel(t)
    if r is None:
        r = float(rho_t)
    r = float(r)
    if a0 is None:
        _, rho0_plus = sol.sublevel(0.0)
        a0 = sphere_area(cm.manifold, rho0_plus)
    a0 = float(a0)
    grown = math.exp(t) * a0
    hypothesis = check_nondegeneracy(p, grown).passed \
        and rho_t <= r * (1.0 + 1e-12)
    if not hypothesis:
        return JumpControlReport(t, a0, r, None, float(rho_plus),
                                 False, None, None)
    bound = r + 1.0 + 2.0 * _volume_cap_integral(p, grown)
    return JumpControlReport(t, a0, r, float(bound),
                             float(rho_plus), True, bool(cm.k > bound),
                             bool(rho_plus <= bound * (1.0 + 1e-12)))


@dataclass(frozen=True)
class StabilizationReport:
    """Escape times and agreement across a family of truncations."""
    t_tilde: float
    base_area: float
    big_area: float
    r2_at_horizon: float
    k1_surrogate: float | None
    entries: tuple
    agree_tol: float
    certification: object | None
    passed: bool

    def to_dict(self) -> dict:
        doc = {
            "t_tilde": self.t_tilde,
            "base_area": self.base_area,
            "big_area": self.big_area,
            "r2_at_horizon": self.r2_at_horizon,
            "k1_surrogate": self.k1_surrogate,
            "agree_tol": self.agree_tol,
            "entries": [dict(e) for e in self.entries],
            "certified": (None if self.certification is None
                          else self.certification.passed),
            "passed": self.passed,
        }
        if self.certification is not None:
            doc["certification"] = self.certification.to_dict()
        return doc


def _sup_disagreement(sol_a: SymmetricSolution, sol_b: SymmetricSolution,
                      r_lo: float, r_hi: float, samples: int = 2001) -> float:
    if r_hi <= r_lo:
        return 0.0
    radii = np.linspace(r_lo, r_hi, samples)
    ua = np.asarray(sol_a.evaluate(radii), dtype=float)
    ub = np.asarray(sol_b.evaluate(radii), dtype=float)
    return float(np.max(np.abs(ua - ub)))


def stabilization_check(M: WarpedManifold, r0: float, p: IsoProfile,
                        big_area: float, k_list, num: int = 4096,
                        delta: float = 0.125, agree_tol: float = 1e-8,
                        certify: bool = True, certify_cells: int = 6000,
                        certify_tol: float = 1e-4) -> StabilizationReport:
    """Solve the truncated flows for each cutoff and audit stabilization.

    The horizon is log(big_area / initial boundary area).  Cutoffs above
    the second exhaustion radius at the horizon must escape no earlier
    than the horizon, and their solutions must agree below it; the first
    such solution, capped at the horizon, is certified as an energy
    minimizer on a compact window.
    """
    a0 = sphere_area(M, r0)
    report = check_nondegeneracy(p, big_area)
    if not report.passed:
        raise NonDegeneracyExceeded(
            f"profile cannot dominate area {big_area:g} "
            f"(tail infimum {report.liminf_surrogate:g})")
    t_tilde = math.log(big_area / a0)
    r2 = exhaustion_radius(p, r0, a0, max(t_tilde, 0.0), 2)
    ks = sorted(float(k) for k in k_list)
    if not ks:
        raise ConfigError("k_list must not be empty")
    k1 = next((k for k in ks if k > r2), None)

    entries = []
    prev_above = None
    first_above_sol = None
    # entries below k1 are flagged, not failed: the guarantee only
    # covers cutoffs above the surrogate
    all_ok = True
    for k in ks:
        cm = build_cone(M, k, delta)
        sol_k = solve_on_cone(cm, r0, num=num)
        t_k = first_escape_time(sol_k, k)
        above = k1 is not None and k >= k1
        meets = bool(t_k >= t_tilde - 1e-12)
        agrees = None
        if above:
            if first_above_sol is None:
                first_above_sol = sol_k
            if prev_above is not None and t_tilde > 0.0:
                rho_prev = prev_above.sublevel(t_tilde)[0]
                rho_here = sol_k.sublevel(t_tilde)[0]
                agrees = _sup_disagreement(prev_above, sol_k, r0,
                                           min(rho_prev, rho_here))
                all_ok = all_ok and agrees <= agree_tol
            elif prev_above is not None:
                agrees = 0.0
            prev_above = sol_k
            all_ok = all_ok and meets
        entries.append({"k": k, "T_k": t_k, "t_tilde": t_tilde,
                        "above_k1": above, "meets_horizon": meets,
                        "agrees_with_prev": agrees})

    certification = None
    if certify and k1 is not None and t_tilde > 0.0 and first_above_sol is not None:
        certification = _certify_capped(M, first_above_sol, r0, t_tilde, k1,
                                        certify_cells, certify_tol)
        all_ok = all_ok and certification.passed
    return StabilizationReport(t_tilde, float(a0), float(big_area), float(r2),
                               k1, tuple(entries), agree_tol, certification,
                               bool(all_ok))


def _certify_capped(M: WarpedManifold, sol: SymmetricSolution, r0: float,
                    t_tilde: float, k1: float, cells: int, tol: float):
    """Certify min(u, horizon) on a compact annular window of the base."""
    _, rho_plus = sol.sublevel(t_tilde)
    r_lo = r0
    r_hi = min(0.98 * k1, 0.98 * M.r_max, max(1.3 * rho_plus, rho_plus + 2.0))
    if r_hi <= r_lo + 4.0 / cells:
        raise ConfigError("no room for a certification window below the cutoff")
    radii = np.linspace(r_lo, r_hi, cells)
    C = CellComplex.radial(M, radii)
    u = np.empty(cells)
    u[0] = -np.inf
    u[1:] = np.minimum(np.asarray(sol.evaluate(radii[1:]), dtype=float), t_tilde)
    density = density_from_arrival(C, u)
    span = r_hi - r_lo
    window = RegionSet(C, (C.radii > r_lo + 0.15 * span)
                       & (C.radii <= r_lo + 0.85 * span))
    times = (0.25 * t_tilde, 0.5 * t_tilde, 0.75 * t_tilde)
    return certify_weak_solution(C, u, times, window, density=density, tol=tol)


@dataclass(frozen=True)
class LimitResult:
    """Exhaustion limit across growing area budgets."""
    solution: SymmetricSolution
    entries: tuple
    max_disagreement: float
    agree_tol: float
    passed: bool

    def to_dict(self) -> dict:
        return {"entries": [dict(e) for e in self.entries],
                "max_disagreement": self.max_disagreement,
                "agree_tol": self.agree_tol, "passed": self.passed}


def limit_solution(M: WarpedManifold, r0: float, p: IsoProfile,
                   l_list=(0.5, 1.0), num: int = 4096,
                   agree_tol: float = 1e-8, delta: float = 0.125) -> LimitResult:
    """Increasing-horizon limit of the truncated flows.

    For each level l the area budget is e^l times the initial boundary
    area; the truncation cutoff is chosen just above the second
    exhaustion radius at horizon l.  Consecutive stage solutions must
    agree on the earlier stage's sublevel region, and the final stage
    must match the direct symmetric solve, which is returned as the
    limit.
    """
    levels = sorted(float(l) for l in l_list)
    if not levels or levels[0] <= 0.0:
        raise ConfigError("levels must be positive")
    a0 = sphere_area(M, r0)
    direct = symmetric.solve(M, r0, num=num)
    entries = []
    worst = 0.0
    prev_sol = None
    prev_level = None
    last_sol = None
    last_level = None
    for lvl in levels:
        big_area = math.exp(lvl) * a0
        report = check_nondegeneracy(p, big_area)
        if not report.passed:
            raise NonDegeneracyExceeded(
                f"profile cannot dominate area {big_area:g} at level {lvl:g}")
        r2 = exhaustion_radius(p, r0, a0, lvl, 2)
        k = math.ceil(r2) + 1.0
        if k >= M.r_max - 1.0:
            raise ConfigError(
                f"level {lvl:g} needs cutoff {k:g}, beyond the manifold "
                f"extent {M.r_max:g}")
        cm = build_cone(M, k, delta)
        sol = solve_on_cone(cm, r0, num=num)
        t_k = first_escape_time(sol, k)
        meets = bool(t_k >= lvl - 1e-12)
        sup_prev = None
        if prev_sol is not None:
            rho_prev = prev_sol.sublevel(prev_level)[0]
            sup_prev = _sup_disagreement(prev_sol, sol, r0, rho_prev)
            worst = max(worst, sup_prev)
        entries.append({"level": lvl, "big_area": big_area, "cutoff": k,
                        "escape_time": t_k, "meets_horizon": meets,
                        "sup_diff_prev": sup_prev})
        prev_sol, prev_level = sol, lvl
        last_sol, last_level = sol, lvl
    rho_last = last_sol.sublevel(last_level)[0]
    vs_direct = _sup_disagreement(last_sol, direct, r0, rho_last)
    worst = max(worst, vs_direct)
    entries[-1]["sup_diff_direct"] = vs_direct
    ok = worst <= agree_tol and all(e["meets_horizon"] for e in entries)
    return LimitResult(direct, tuple(entries), worst, agree_tol, bool(ok))
