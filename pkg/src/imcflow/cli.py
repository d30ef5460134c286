"""Command-line front end.

Subcommands: solve, profile, hull, bounds, certify, exhaust, limit.
Every subcommand accepts --config (JSON with sections manifold, profile,
grid, pipeline, tolerances, seed), --out, --seed, and --refine; explicit
flags override config values, which override built-in defaults.

Exit codes: 0 success, 1 invalid configuration, 2 a diagnostic hypothesis
failed (non-degeneracy, properness, cone construction), 3 a certification,
containment, or agreement verdict failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import io as iox
from . import symmetric
from .bounds import verify_containment
from .complexes import CellComplex, RegionSet, certify_weak_solution, \
    density_from_arrival, discretize_solution
from .errors import (ConeConstructionError, ConfigError, ContainmentViolated,
                     CurvatureKink, ImcflowError, InfeasibleObstacles,
                     IntegralDiverges, NoPrecompactHull, NonDegeneracyExceeded,
                     NotPrecompact, PlateauRegion)
from .exhaustion import build_cone, limit_solution, solve_on_cone, \
    stabilization_check
from .hull import minimizing_hull, symmetric_hull
from .models import CLI_MODELS, named_model
from .profile import (IsoProfile, check_nondegeneracy, euclidean_profile,
                      sphere_profile, symmetric_candidate_profile)
from .warped import WarpedManifold, sphere_area

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIAGNOSTIC = 2
EXIT_VERDICT = 3

_DIAGNOSTIC_ERRORS = (NonDegeneracyExceeded, NoPrecompactHull, IntegralDiverges,
                      NotPrecompact, PlateauRegion, ConeConstructionError,
                      CurvatureKink)
_VERDICT_ERRORS = (ContainmentViolated, InfeasibleObstacles)

_CONFIG_SECTIONS = {"manifold", "profile", "grid", "pipeline", "tolerances", "seed"}


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with the config code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# -- configuration plumbing ----------------------------------------------


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(doc) - _CONFIG_SECTIONS
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    return doc


class Settings:
    """Three-level lookup: explicit flag, config section, built-in default."""

    def __init__(self, args: argparse.Namespace):
        self.args = vars(args)
        self.cfg = _load_config(args.config) if args.config else {}
        cmd = self._section("pipeline").get("command")
        if cmd is not None and cmd != args.command:
            raise ConfigError(
                f"config pipeline.command={cmd!r} does not match "
                f"subcommand {args.command!r}")

    def _section(self, name) -> dict:
        sec = self.cfg.get(name, {})
        if not isinstance(sec, dict):
            raise ConfigError(f"config section {name!r} must be an object")
        return sec

    def pick(self, flag, section, key, default=None):
        val = self.args.get(flag)
        if val is not None:
            return val
        sec = self._section(section)
        if key in sec:
            return sec[key]
        return default

    @property
    def seed(self):
        val = self.args.get("seed")
        if val is None:
            val = self.cfg.get("seed")
        return None if val is None else int(val)

    def tolerance(self, key, default):
        return float(self._section("tolerances").get(key, default))

    def out_dir(self) -> str:
        out = self.args.get("out") or "."
        os.makedirs(out, exist_ok=True)
        return out


def _resolve_model(st: Settings, required: bool = True) -> WarpedManifold | None:
    man = st._section("manifold")
    n = int(st.pick("n", "manifold", "n", 3))
    r_max = st.pick("rmax", "manifold", "r_max")
    csv_path = man.get("csv")
    name = st.pick("model", "manifold", "name")
    if name is None and csv_path is not None:
        return WarpedManifold.from_csv(csv_path, n=n)
    if name is None:
        if required:
            raise ConfigError("no model selected; pass --model or set "
                              "manifold.name in the config")
        return None
    return named_model(name, n=n, r_max=None if r_max is None else float(r_max))


def _parse_kv(text: str) -> dict:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, val = part.partition("=")
        if not sep:
            raise ConfigError(f"malformed profile parameter {part!r}; "
                              "expected key=value")
        try:
            out[key.strip().lower()] = float(val)
        except ValueError:
            raise ConfigError(f"non-numeric profile parameter {part!r}") from None
    return out


def _parse_profile(spec: str, M: WarpedManifold | None) -> IsoProfile:
    """Mini-syntax: power:c=..,a=.. | piecewise:c=..,a=..,b=..,vbreak=..
    | table:path | euclidean[:n=..] | spheres | candidate."""
    head, _, rest = spec.strip().partition(":")
    head = head.strip().lower()
    if head == "power":
        kv = _parse_kv(rest)
        if "c" not in kv or "a" not in kv:
            raise ConfigError("power profile needs c= and a=")
        return IsoProfile.power(kv["c"], kv["a"], v_max=kv.get("vmax", 1e9))
    if head in ("piecewise", "piecewise_power"):
        kv = _parse_kv(rest)
        missing = {"c", "a", "b", "vbreak"} - set(kv)
        if missing:
            raise ConfigError(f"piecewise profile missing {sorted(missing)}")
        return IsoProfile.piecewise_power(kv["c"], kv["a"], kv["b"],
                                          kv["vbreak"],
                                          v_max=kv.get("vmax", 1e9))
    if head == "table":
        if not rest:
            raise ConfigError("table profile needs a CSV path: table:path")
        return IsoProfile.from_csv(rest)
    if head == "euclidean":
        kv = _parse_kv(rest) if rest else {}
        n = int(kv.get("n", M.n if M is not None else 3))
        return euclidean_profile(n)
    if head == "spheres":
        if M is None:
            raise ConfigError("spheres profile needs a model")
        return sphere_profile(M)
    if head == "candidate":
        if M is None:
            raise ConfigError("candidate profile needs a model")
        return symmetric_candidate_profile(M)
    raise ConfigError(f"unknown profile spec {spec!r}")


def _resolve_profile(st: Settings, M: WarpedManifold | None,
                     default: str = "spheres") -> IsoProfile:
    sec = st._section("profile")
    spec = st.args.get("profile")
    if spec is None:
        spec = sec.get("spec")
    if spec is None and "csv" in sec:
        spec = f"table:{sec['csv']}"
    if spec is None:
        spec = default
    return _parse_profile(str(spec), M)


def _floats(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated number list, got {text!r}") from None


def _say(*parts):
    print(" ".join(str(p) for p in parts))


# -- subcommands -----------------------------------------------------------


def cmd_solve(args) -> int:
    st = Settings(args)
    M = _resolve_model(st)
    r0 = float(st.pick("r0", "pipeline", "r0", 1.0))
    num = int(st.pick("num", "grid", "num", 4096))
    out = st.out_dir()

    sol = symmetric.solve(M, r0, num=num)
    extra = {}
    if args.refine:
        fine = symmetric.solve(M, r0, num=2 * num)
        delta = float(np.max(np.abs(fine.evaluate(sol.grid) - sol.u)))
        extra = {"refine": {"base_points": num, "refined_points": 2 * num,
                            "max_arrival_shift": delta}}
        sol = fine
    sol_path = os.path.join(out, "solution.csv")
    jump_path = os.path.join(out, "jumps.json")
    iox.write_solution_csv(sol, sol_path)
    iox.write_jumps_json(sol, jump_path, extra=extra)

    tmax = sol.max_existence_time()
    _say(f"model={M.name} n={M.n} r0={r0:g} grid={len(sol.grid)}")
    _say(f"max existence time: {tmax:g}")
    _say("jump times:", ", ".join(f"{t:.6g}" for t in sol.jump_times()) or "none")
    _say("proper:", "yes" if sol.tail.unbounded else "no")
    if extra:
        _say(f"refine shift: {extra['refine']['max_arrival_shift']:.3e}")
    _say("wrote", sol_path, jump_path)
    return EXIT_OK


def cmd_profile(args) -> int:
    st = Settings(args)
    M = _resolve_model(st, required=False)
    p = _resolve_profile(st, M, default="euclidean" if M is None else "spheres")
    num = int(st.pick("num", "grid", "num", 512))
    out = st.out_dir()

    path = os.path.join(out, "profile.csv")
    iox.write_profile_csv(p, path, num=num)
    _say(f"profile kind={p.kind} v_max={p.v_max:g} "
         f"tail_infimum={p.tail_infimum():.6g}")
    _say("wrote", path)

    area = st.pick("area", "pipeline", "area")
    if area is not None:
        rep = check_nondegeneracy(p, float(area))
        iox.dump_json(rep.to_dict(), os.path.join(out, "nondegeneracy.json"))
        _say(f"non-degeneracy at area {float(area):g}: "
             f"{'PASS' if rep.passed else 'FAIL'} "
             f"(liminf surrogate {rep.liminf_surrogate:.6g})")
        if not rep.passed:
            return EXIT_DIAGNOSTIC
    return EXIT_OK


def cmd_hull(args) -> int:
    st = Settings(args)
    M = _resolve_model(st)
    p = _resolve_profile(st, M)
    rho = float(st.pick("omega", "pipeline", "omega_radius", 1.0))
    cells = int(st.pick("cells", "grid", "cells", 1000))
    if args.refine:
        cells *= 2
    span = st.pick("span", "grid", "span")
    span = 0.98 * M.r_max if span is None else float(span)
    out = st.out_dir()

    # the seed radius and the warp's breakpoints must be grid nodes, or
    # area ties at those radii (where hulls jump) are invisible
    base = np.linspace(span / cells, span, cells)
    marks = [rho] + [b for b in M.breakpoints if 0.0 < b < span]
    radii = np.unique(np.concatenate([base, np.asarray(marks)]))
    radii = radii[radii > 0.0]
    C = CellComplex.radial(M, radii)
    omega = C.ball_region(rho)
    res = minimizing_hull(C, omega, p)
    formula = symmetric_hull(M, rho)

    doc = {
        "model": M.name, "omega_radius": rho, "cells": cells,
        "bound_radius": res.bound_radius,
        "outer_radius": res.outer_radius,
        "perimeter_before": res.perimeter_before,
        "perimeter_after": res.perimeter_after,
        "formula_radius": formula,
        "cell_width": span / cells,
    }
    iox.dump_json(doc, os.path.join(out, "hull.json"))
    iox.write_region_json(res.region, os.path.join(out, "hull_region.json"))
    _say(f"model={M.name} omega={{r<{rho:g}}} cells={cells}")
    _say(f"hull outer radius: {res.outer_radius:.6g} "
         f"(formula {formula:.6g}, bound {res.bound_radius:.6g})")
    _say(f"perimeter: {res.perimeter_before:.6g} -> {res.perimeter_after:.6g}")
    _say("wrote", os.path.join(out, "hull.json"))
    return EXIT_OK


def cmd_bounds(args) -> int:
    st = Settings(args)
    M = _resolve_model(st)
    p = _resolve_profile(st, M)
    r0 = float(st.pick("r0", "pipeline", "r0", 1.0))
    num = int(st.pick("num", "grid", "num", 4096))
    if args.refine:
        num *= 2
    times = _floats(st.pick("times", "pipeline", "times", "0,1,2,3"))
    out = st.out_dir()

    sol = symmetric.solve(M, r0, num=num)
    _, rho0p = sol.sublevel(0.0)
    a0 = sphere_area(M, rho0p)
    reports = verify_containment(sol, p, a0, times)
    iox.write_bounds_csv(reports, os.path.join(out, "bounds.csv"))
    iox.write_bounds_json(reports, os.path.join(out, "bounds.json"))

    ok = all(r.contained for r in reports)
    for r in reports:
        _say(f"t={r.t:g} rho_t={r.rho_t:.6g} R1={r.R1:.6g} "
             f"main={r.R_main:.6g} contained={'yes' if r.contained else 'NO'}")
    _say("wrote", os.path.join(out, "bounds.csv"),
         os.path.join(out, "bounds.json"))
    if not ok:
        _say("containment FAILED: profile is not a valid lower bound here")
        return EXIT_VERDICT
    return EXIT_OK


def cmd_certify(args) -> int:
    st = Settings(args)
    M = _resolve_model(st)
    r0 = float(st.pick("r0", "pipeline", "r0", 1.0))
    cells = int(st.pick("cells", "grid", "cells", 4000))
    if args.refine:
        cells *= 2
    # default pairs with the default cell count; tighten both together
    # (violations shrink quadratically with the cell width)
    tol = st.tolerance("certify", 1e-4)
    perturb = float(st.pick("perturb", "pipeline", "perturb", 0.0))
    out = st.out_dir()

    sol = symmetric.solve(M, r0)
    span = st.pick("span", "grid", "span")
    r_hi = min(0.6 * M.r_max, 6.0 * r0 + 4.0) if span is None else float(span)
    radii = np.linspace(r0, r_hi, cells)
    C = CellComplex.radial(M, radii)
    C, u = discretize_solution(sol, C)

    win = st.pick("window", "pipeline", "window")
    if win is None:
        lo, hi = r0 + 0.15 * (r_hi - r0), r0 + 0.85 * (r_hi - r0)
    else:
        lo, hi = _floats(win)
    inside = (C.radii > lo) & (C.radii <= hi)
    window = RegionSet(C, inside)

    horizon = sol.evaluate(hi) if hi < M.r_max else 1.5
    times = st.pick("times", "pipeline", "times")
    times = ([0.25 * horizon, 0.5 * horizon, 0.75 * horizon] if times is None
             else _floats(times))

    seed_note = {}
    if perturb:
        idx = np.nonzero(inside)[0]
        if st.seed is not None:
            rng = np.random.default_rng(st.seed)
            j = int(idx[rng.integers(0, len(idx))])
            seed_note = {"seed": st.seed}
        else:
            j = int(idx[len(idx) // 2])
        u = u.copy()
        u[j] += perturb
        C = C.with_density(density_from_arrival(C, u))
        seed_note["perturbed_cell"] = j

    report = certify_weak_solution(C, u, times, window, tol=tol)
    doc = report.to_dict()
    doc.update({"model": M.name, "r0": r0, "cells": cells,
                "perturbation": perturb, **seed_note})
    iox.dump_json(doc, os.path.join(out, "certification.json"))

    _say(f"model={M.name} r0={r0:g} cells={cells} window=({lo:.4g}, {hi:.4g}] "
         f"times={', '.join(f'{t:.4g}' for t in times)}")
    _say(f"certification: {'PASS' if report.passed else 'FAIL'} "
         f"worst violation {report.worst_violation:.3e} (tol {tol:g})")
    _say("wrote", os.path.join(out, "certification.json"))
    return EXIT_OK if report.passed else EXIT_VERDICT


def cmd_exhaust(args) -> int:
    st = Settings(args)
    M = _resolve_model(st)
    p = _resolve_profile(st, M)
    r0 = float(st.pick("r0", "pipeline", "r0", 1.0))
    num = int(st.pick("num", "grid", "num", 4096))
    if args.refine:
        num *= 2
    klist = _floats(st.pick("klist", "pipeline", "klist", ""))
    if not klist:
        raise ConfigError("exhaust needs --klist (comma-separated cone radii)")
    delta = float(st.pick("delta", "pipeline", "delta", 0.125))
    agree_tol = st.tolerance("agree", 1e-8)
    a0 = sphere_area(M, r0)
    area = st.pick("area", "pipeline", "area")
    factor = float(st.pick("factor", "pipeline", "area_factor", math.e))
    big_area = float(area) if area is not None else factor * a0
    out = st.out_dir()

    report = stabilization_check(M, r0, p, big_area, klist, num=num,
                                 delta=delta, agree_tol=agree_tol,
                                 certify=not args.no_certify)
    iox.dump_json(report.to_dict(), os.path.join(out, "stabilization.json"))
    for k in klist:
        cone = build_cone(M, k, delta=delta)
        solk = solve_on_cone(cone, r0, num=num)
        iox.write_solution_csv(solk, os.path.join(out, f"solution_k{k:g}.csv"))

    _say(f"model={M.name} r0={r0:g} big_area={big_area:.6g} "
         f"horizon={report.t_tilde:.6g} k1={report.k1_surrogate}")
    for e in report.entries:
        _say(f"k={e['k']:g} T_k={e['T_k']:.6g} "
             f"above_k1={'yes' if e['above_k1'] else 'no'} "
             f"meets_horizon={'yes' if e['meets_horizon'] else 'NO'} "
             f"agree={e['agrees_with_prev']}")
    _say(f"stabilization: {'PASS' if report.passed else 'FAIL'}")
    _say("wrote", os.path.join(out, "stabilization.json"))
    return EXIT_OK if report.passed else EXIT_VERDICT


def cmd_limit(args) -> int:
    st = Settings(args)
    M = _resolve_model(st)
    p = _resolve_profile(st, M)
    r0 = float(st.pick("r0", "pipeline", "r0", 1.0))
    num = int(st.pick("num", "grid", "num", 4096))
    if args.refine:
        num *= 2
    levels = _floats(st.pick("levels", "pipeline", "levels", "0.5,1.0"))
    agree_tol = st.tolerance("agree", 1e-8)
    out = st.out_dir()

    res = limit_solution(M, r0, p, l_list=levels, num=num, agree_tol=agree_tol)
    doc = {"model": M.name, "r0": r0, "levels": levels,
           "entries": res.entries, "max_disagreement": res.max_disagreement,
           "agree_tol": res.agree_tol, "passed": res.passed}
    iox.dump_json(doc, os.path.join(out, "limit.json"))
    iox.write_solution_csv(res.solution, os.path.join(out, "solution.csv"))

    _say(f"model={M.name} r0={r0:g} levels={levels}")
    _say(f"max disagreement vs direct solve: {res.max_disagreement:.3e} "
         f"(tol {agree_tol:g})")
    _say(f"limit agreement: {'PASS' if res.passed else 'FAIL'}")
    _say("wrote", os.path.join(out, "limit.json"),
         os.path.join(out, "solution.csv"))
    return EXIT_OK if res.passed else EXIT_VERDICT


# -- parser ---------------------------------------------------------------


def _add_common(sp):
    sp.add_argument("--config", help="JSON config supplying defaults")
    sp.add_argument("--out", help="output directory (default: current)")
    sp.add_argument("--seed", type=int, help="seed for any randomized choice")
    sp.add_argument("--refine", action="store_true",
                    help="double the grid for a sensitivity rerun")
    sp.add_argument("--model", choices=sorted(CLI_MODELS),
                    help="named warp model")
    sp.add_argument("--n", type=int, help="dimension (default 3)")
    sp.add_argument("--rmax", type=float, help="radial extent override")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="imcflow",
                     description="Weak inverse mean curvature flow on "
                                 "rotationally symmetric models")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="arrival function of the weak flow")
    _add_common(sp)
    sp.add_argument("--r0", type=float, help="initial ball radius")
    sp.add_argument("--num", type=int, help="grid points")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("profile", help="tabulate an isoperimetric profile")
    _add_common(sp)
    sp.add_argument("--profile", help="profile spec (power:c=..,a=.. | "
                                      "piecewise:.. | table:path | "
                                      "euclidean[:n=..] | spheres | candidate)")
    sp.add_argument("--num", type=int, help="rows in the tabulation")
    sp.add_argument("--area", type=float,
                    help="also run the non-degeneracy check at this area")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("hull", help="strictly outward minimizing hull")
    _add_common(sp)
    sp.add_argument("--profile", help="profile spec (default spheres)")
    sp.add_argument("--omega", type=float, help="seed ball radius")
    sp.add_argument("--cells", type=int, help="radial cells")
    sp.add_argument("--span", type=float, help="outer radius of the complex")
    sp.set_defaults(func=cmd_hull)

    sp = sub.add_parser("bounds", help="containment radius bounds over time")
    _add_common(sp)
    sp.add_argument("--profile", help="profile spec (default spheres)")
    sp.add_argument("--r0", type=float, help="initial ball radius")
    sp.add_argument("--num", type=int, help="grid points")
    sp.add_argument("--times", help="comma-separated times")
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("certify", help="weak-solution certification")
    _add_common(sp)
    sp.add_argument("--r0", type=float, help="initial ball radius")
    sp.add_argument("--cells", type=int, help="radial cells")
    sp.add_argument("--span", type=float, help="outer radius of the complex")
    sp.add_argument("--window", help="competitor window lo,hi")
    sp.add_argument("--times", help="comma-separated certification times")
    sp.add_argument("--perturb", type=float,
                    help="add this to the arrival on one cell first")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("exhaust", help="conic exhaustion stabilization")
    _add_common(sp)
    sp.add_argument("--profile", help="profile spec (default spheres)")
    sp.add_argument("--r0", type=float, help="initial ball radius")
    sp.add_argument("--num", type=int, help="grid points")
    sp.add_argument("--klist", help="comma-separated cone radii")
    sp.add_argument("--delta", type=float, help="collar width")
    sp.add_argument("--area", type=float, help="horizon area A")
    sp.add_argument("--factor", type=float,
                    help="A as a multiple of the initial sphere area")
    sp.add_argument("--no-certify", action="store_true",
                    help="skip the capped-solution certification")
    sp.set_defaults(func=cmd_exhaust)

    sp = sub.add_parser("limit", help="limit of cone solutions vs direct solve")
    _add_common(sp)
    sp.add_argument("--profile", help="profile spec (default spheres)")
    sp.add_argument("--r0", type=float, help="initial ball radius")
    sp.add_argument("--num", type=int, help="grid points")
    sp.add_argument("--levels", help="comma-separated horizon levels l")
    sp.set_defaults(func=cmd_limit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"imcflow: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _VERDICT_ERRORS as exc:
        print(f"imcflow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except _DIAGNOSTIC_ERRORS as exc:
        print(f"imcflow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC
    except ImcflowError as exc:
        print(f"imcflow: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC


if __name__ == "__main__":
    sys.exit(main())
