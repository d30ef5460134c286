"""Least-area problems with obstacles and strictly outward minimizing hulls.

The discrete engine solves the area minimization among cell regions
squeezed between an inner obstacle and an outer one; the maximal-volume
solution is the canonical hull candidate.  For rotationally symmetric
manifolds the hull of a centered ball has a closed form: the radius where
the running infimum of the warp last returns to its starting value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import symmetric
from .complexes import (CellComplex, EnergyMinimum, RegionSet,
                        check_outward_minimizing, minimize_energy, perimeter)
from .errors import (ConfigError, ContainmentViolated, NoPrecompactHull,
                     NonDegeneracyExceeded, NotPrecompact)
from .kernels import proper_superset_min, subset_values
from .profile import (IsoProfile, check_nondegeneracy, inverse_strong_profile,
                      reciprocal_integral, strong_profile)
from .warped import WarpedManifold

__all__ = ["HullResult", "check_envelope_equivalence", "least_area_outside",
           "maximal_volume_solution", "minimizing_hull", "symmetric_hull"]


def least_area_outside(C: CellComplex, omega: RegionSet,
                       outer: RegionSet | None = None) -> EnergyMinimum:
    """Minimize perimeter among regions squeezed between omega and outer.

    Density is ignored (zeroed); returns the full minimization result with
    inclusion-extremal minimizers.
    """
    zero = C.with_density(np.zeros(C.num_cells))
    inner = RegionSet(zero, omega.mask)
    out = None if outer is None else RegionSet(zero, outer.mask)
    res = minimize_energy(zero, None, inner, out)
    # rebind regions to the caller's complex so set algebra stays usable
    return EnergyMinimum(res.value,
                         RegionSet(C, res.minimal.mask),
                         RegionSet(C, res.maximal.mask),
                         res.flow_value, res.offset)


def maximal_volume_solution(C: CellComplex, omega: RegionSet,
                            outer: RegionSet | None = None) -> RegionSet:
    """The largest perimeter minimizer containing omega (extremal min cut)."""
    return least_area_outside(C, omega, outer).maximal


@dataclass(frozen=True)
class HullResult:
    """Outcome of a precompact hull computation."""
    region: RegionSet
    bound_radius: float
    outer_radius: float
    perimeter_before: float
    perimeter_after: float


def minimizing_hull(C: CellComplex, omega: RegionSet, profile: IsoProfile,
                    budget_area: float | None = None) -> HullResult:
    """Strictly outward minimizing hull of omega inside a guaranteed ball.

    The isoperimetric profile supplies a radius bound

        R = r + 1 + 2 * integral of 1/profile up to the largest volume
                        achievable with perimeter(omega),

    where r is the outer radius of omega.  The hull is the maximal-volume
    least-area solution with outer obstacle the ball of radius R + 1; the
    result is checked to lie inside the ball of radius R and raises
    ContainmentViolated otherwise (profile inconsistent with the
    geometry).
    """
    if C.kind != "radial":
        raise ConfigError("minimizing_hull expects a radial complex")
    a = perimeter(C, omega)
    budget = a if budget_area is None else float(budget_area)
    if a > budget * (1.0 + 1e-12):
        raise ConfigError("obstacle perimeter exceeds the area budget")
    report = check_nondegeneracy(profile, budget)
    if not report.passed:
        raise NonDegeneracyExceeded(
            f"profile cannot dominate area {budget:g} "
            f"(tail infimum {report.liminf_surrogate:g})")
    r = C.region_outer_radius(omega)
    vol_cap = inverse_strong_profile(strong_profile(profile), a)
    R = r + 1.0 + 2.0 * reciprocal_integral(profile, vol_cap)
    if C.radii[-1] < R + 1.0:
        raise ConfigError(
            f"complex extends to {C.radii[-1]:g} but the hull bound needs "
            f"outer obstacle radius {R + 1.0:g}")
    outer = C.ball_region(R + 1.0)
    res = least_area_outside(C, omega, outer)
    hull = res.maximal
    rho = C.region_outer_radius(hull)
    if rho > R * (1.0 + 1e-12):
        raise ContainmentViolated(
            f"hull reaches radius {rho:g}, outside the guaranteed ball {R:g}; "
            "the supplied profile is inconsistent with the geometry")
    return HullResult(hull, float(R), float(rho), float(a),
                      perimeter(C, hull))


def check_envelope_equivalence(C: CellComplex, omega: RegionSet,
                               max_cells: int = 16) -> bool:
    """Maximal-volume least-area solution == least-volume strictly
    outward minimizing superset, by exhaustive enumeration.

    Enumeration walks all cell subsets, so the complex is capped at
    ``max_cells`` cells.
    """
    n = C.num_cells
    if n > max_cells:
        raise ConfigError(f"enumeration limited to {max_cells} cells, got {n}")
    e1 = maximal_volume_solution(C, omega)

    ext_w = np.zeros(n)
    ea, eb, ew = [], [], []
    for a, b, w in zip(C.iface_a, C.iface_b, C.iface_w):
        if b < 0:
            ext_w[a] += w
        else:
            ea.append(int(a))
            eb.append(int(b))
            ew.append(float(w))
    perims = subset_values(n, 0.0, ea, eb, ew, ext_w)
    sup_min = proper_superset_min(perims, n)
    strict = sup_min > perims  # every strict superset strictly larger

    omega_bits = 0
    for c in omega.cells():
        omega_bits |= 1 << c
    best_mask = None
    intersection = (1 << n) - 1
    found = False
    for mask in range(1 << n):
        if (mask & omega_bits) != omega_bits or not strict[mask]:
            continue
        found = True
        intersection &= mask
    if not found:
        return False
    # the qualifying family is closed under intersection; its bottom
    # element is the least-volume strictly minimizing superset
    best_mask = intersection
    if not strict[best_mask] or (best_mask & omega_bits) != omega_bits:
        return False
    e2_cells = [i for i in range(n) if (best_mask >> i) & 1]
    e2 = RegionSet(C, np.isin(np.arange(n), e2_cells))
    return e1 == e2


def symmetric_hull(M: WarpedManifold, r0: float, num: int = 4096) -> float:
    """Hull radius of the centered ball of radius r0 on a symmetric manifold.

    Equals the outer radius of the time-zero jump of the symmetric flow:
    the last radius where the running infimum of the warp still equals its
    value ahead of r0.  Raises NoPrecompactHull when the warp never rises
    above that level again (cylindrical or collapsing ends).
    """
    sol = symmetric.solve(M, r0, num=num)
    try:
        _, rho_plus = sol.sublevel(0.0)
    except NotPrecompact as exc:
        raise NoPrecompactHull(
            f"warp tail never exceeds its level at r0={r0:g}; "
            "no precompact hull exists") from exc
    return float(rho_plus)
