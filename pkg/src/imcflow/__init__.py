"""Weak inverse mean curvature flow on rotationally symmetric manifolds.

The package solves the level-set flow of centered balls in warped-product
metrics in closed form, certifies the result against the variational
definition on discrete cell complexes, computes strictly outward
minimizing hulls, evaluates explicit containment radius bounds driven by
isoperimetric profiles, and reproduces proper solutions as limits of
flows on conic cutoffs.
"""

from .errors import (ConeConstructionError, ConfigError, ContainmentViolated,
                     CurvatureKink, ImcflowError, InfeasibleObstacles,
                     IntegralDiverges, NoPrecompactHull, NonDegeneracyExceeded,
                     NotPrecompact, PlateauRegion)
from .warped import (GeodesicBall, WarpedManifold, adaptive_simpson,
                     ball_volume, ball_volume_grid, mean_curvature,
                     one_sided_mean_curvature, sphere_area, unit_sphere_area)
from .models import (CLI_MODELS, below_dip, cylinder, dip, euclidean,
                     log_cylinder, named_model, two_dips)
from .profile import (GrowthReport, IsoProfile, NondegeneracyReport,
                      StrongProfile, ball_volume_lower_bound,
                      check_nondegeneracy, euclidean_profile,
                      inverse_strong_profile, reciprocal_integral,
                      sphere_profile, strong_profile,
                      superlinear_growth_check, symmetric_candidate_profile)
from .symmetric import SymmetricSolution, TailReport, solve
from .complexes import (EXTERIOR, CellComplex, CertificationReport,
                        EnergyMinimum, RegionSet, certify_weak_solution,
                        check_outward_minimizing, density_from_arrival,
                        discretize_solution, exhaustive_minimum, flow_energy,
                        minimize_energy, perimeter, sublevel_region,
                        submodularity_slack)
from .hull import (HullResult, check_envelope_equivalence, least_area_outside,
                   maximal_volume_solution, minimizing_hull, symmetric_hull)
from .bounds import (AsymptoteReport, BoundReport, ComparisonSolution,
                     barrier_radius, excess_inequality_check,
                     exhaustion_radius, growth_asymptote, main_bound,
                     ode_comparison, verify_containment)
from .exhaustion import (ConicModel, JumpControlReport, LimitResult,
                         StabilizationReport, build_cone, first_escape_time,
                         jumping_control_check, limit_solution, solve_on_cone,
                         stabilization_check)
from .kernels import (FlowGraph, USING_NUMBA, max_flow, min_cut_sides,
                      proper_superset_min, subset_values)

__version__ = "0.1.0"

__all__ = [
    "CLI_MODELS", "CellComplex", "CertificationReport", "ComparisonSolution",
    "ConeConstructionError", "ConfigError", "ConicModel",
    "ContainmentViolated", "CurvatureKink", "EXTERIOR", "EnergyMinimum",
    "FlowGraph", "GeodesicBall", "GrowthReport", "HullResult", "ImcflowError",
    "InfeasibleObstacles", "IntegralDiverges", "IsoProfile",
    "JumpControlReport", "LimitResult", "NoPrecompactHull",
    "NonDegeneracyExceeded", "NondegeneracyReport", "NotPrecompact",
    "PlateauRegion", "RegionSet", "StabilizationReport", "StrongProfile",
    "SymmetricSolution", "TailReport", "USING_NUMBA", "WarpedManifold",
    "AsymptoteReport", "BoundReport", "adaptive_simpson", "ball_volume",
    "ball_volume_grid", "ball_volume_lower_bound", "barrier_radius",
    "below_dip", "build_cone", "certify_weak_solution",
    "check_envelope_equivalence", "check_nondegeneracy",
    "check_outward_minimizing", "cylinder", "density_from_arrival",
    "dip", "discretize_solution", "euclidean", "euclidean_profile",
    "excess_inequality_check", "exhaustion_radius", "exhaustive_minimum",
    "first_escape_time", "flow_energy", "growth_asymptote",
    "inverse_strong_profile", "jumping_control_check", "least_area_outside",
    "limit_solution", "log_cylinder", "main_bound", "max_flow",
    "maximal_volume_solution", "mean_curvature", "min_cut_sides",
    "minimize_energy", "minimizing_hull", "named_model", "ode_comparison",
    "one_sided_mean_curvature", "perimeter", "proper_superset_min",
    "reciprocal_integral", "solve", "solve_on_cone", "sphere_area",
    "sphere_profile", "stabilization_check", "strong_profile",
    "sublevel_region", "submodularity_slack", "subset_values",
    "superlinear_growth_check", "symmetric_candidate_profile",
    "symmetric_hull", "two_dips", "unit_sphere_area", "verify_containment",
    "__version__",
]
