"""Deterministic readers and writers for every artifact the CLI emits.

JSON documents are dumped with sorted keys and two-space indentation,
CSV floats with ``repr`` so reruns on identical inputs are byte-stable.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .bounds import BoundReport
from .complexes import CellComplex, CertificationReport, RegionSet
from .errors import ConfigError
from .profile import IsoProfile
from .symmetric import SymmetricSolution

__all__ = [
    "dump_json",
    "read_complex_json",
    "read_region_json",
    "write_bounds_csv",
    "write_bounds_json",
    "write_certification_json",
    "write_complex_json",
    "write_jumps_json",
    "write_profile_csv",
    "write_region_json",
    "write_solution_csv",
]


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def _json_default(obj):
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dump_json(doc: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2, default=_json_default)
        fh.write("\n")


def _load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


# -- symmetric solutions -----------------------------------------------


def write_solution_csv(sol: SymmetricSolution, path) -> None:
    """Arrival tabulation: r, warp, running_min, arrival."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["r", "warp", "running_min", "arrival"])
        for r, f, m, u in zip(sol.grid, sol.f_vals, sol.runmin, sol.u):
            out.writerow([_fmt(r), _fmt(f), _fmt(m), _fmt(u)])


def write_jumps_json(sol: SymmetricSolution, path, extra: dict | None = None) -> None:
    doc = {
        "model": sol.M.name,
        "initial_radius": sol.r0,
        "jump_times": [float(t) for t in sol.jump_times()],
        "max_existence_time": sol.max_existence_time(),
        "proper": sol.tail.unbounded,
    }
    if extra:
        doc.update(extra)
    dump_json(doc, path)


# -- profiles ------------------------------------------------------------


def write_profile_csv(p: IsoProfile, path, num: int = 512) -> None:
    """Two-column (volume, area) tabulation of a profile."""
    if p.kind == "table":
        vols = p.v
    else:
        lo = p.v_break / 8.0 if p.kind == "piecewise_power" and p.v_break > 0 \
            else p.v_max * 1e-6
        vols = np.geomspace(max(lo, 1e-12), p.v_max, num)
    areas = np.asarray(p.evaluate(vols), dtype=float)
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["volume", "area"])
        for v, a in zip(vols, areas):
            out.writerow([_fmt(v), _fmt(a)])


# -- radius bounds ---------------------------------------------------------


def write_bounds_csv(reports: list[BoundReport], path) -> None:
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["t", "rho_t", "R1", "R_main", "contained", "margin"])
        for rep in reports:
            out.writerow([_fmt(x) for x in rep.to_row()])


def write_bounds_json(reports: list[BoundReport], path) -> None:
    doc = {
        "all_contained": all(r.contained for r in reports),
        "worst_margin": min((r.margin for r in reports), default=float("inf")),
        "rows": [r.to_dict() for r in reports],
    }
    dump_json(doc, path)


# -- certification -----------------------------------------------------


def write_certification_json(report: CertificationReport, path) -> None:
    dump_json(report.to_dict(), path)


# -- complexes and regions ---------------------------------------------


def write_complex_json(C: CellComplex, path) -> None:
    dump_json(C.to_dict(), path)


def read_complex_json(path) -> CellComplex:
    return CellComplex.from_dict(_load_json(path))


def write_region_json(E: RegionSet, path) -> None:
    dump_json({"cells": [int(i) for i in E.cells()]}, path)


def read_region_json(C: CellComplex, path) -> RegionSet:
    doc = _load_json(path)
    if "cells" not in doc:
        raise ConfigError(f"region file {path} lacks a 'cells' list")
    return RegionSet.from_cells(C, doc["cells"])
