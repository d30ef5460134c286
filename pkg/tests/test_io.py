"""Artifact writers and readers: byte stability and faithful round trips."""

import csv
import json
import math

import numpy as np
import pytest

import imcflow as icf
from imcflow import IsoProfile, RegionSet
from imcflow import io as mio

TAU = 4.0 * math.pi


def _read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_dump_json_handles_numpy_and_sorts_keys(tmp_path):
    doc = {
        "zeta": np.float64(1.5),
        "alpha": np.bool_(True),
        "count": np.int64(7),
        "grid": np.array([1.0, 2.0]),
        "nested": {"b": 2, "a": 1},
    }
    path = tmp_path / "doc.json"
    mio.dump_json(doc, path)
    text = path.read_text()
    assert text.endswith("\n")
    # keys are emitted in sorted order at every level
    assert text.index('"alpha"') < text.index('"count"') < text.index('"zeta"')
    assert text.index('"a"') < text.index('"b"')
    loaded = json.loads(text)
    assert loaded == {"zeta": 1.5, "alpha": True, "count": 7,
                      "grid": [1.0, 2.0], "nested": {"a": 1, "b": 2}}
    mio.dump_json(doc, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()
    with pytest.raises(TypeError):
        mio.dump_json({"bad": object()}, tmp_path / "bad.json")


def test_solution_csv_round_trip(euclid_sol, tmp_path):
    path = tmp_path / "sol.csv"
    mio.write_solution_csv(euclid_sol, path)
    rows = _read_rows(path)
    assert rows[0] == ["r", "warp", "running_min", "arrival"]
    assert len(rows) == 1 + euclid_sol.grid.size
    # repr round trip preserves every float exactly
    data = [[float(x) for x in row] for row in rows[1:]]
    arr = np.array(data)
    assert np.array_equal(arr[:, 0], euclid_sol.grid)
    assert np.array_equal(arr[:, 1], euclid_sol.f_vals)
    assert np.array_equal(arr[:, 2], euclid_sol.runmin)
    assert np.array_equal(arr[:, 3], euclid_sol.u)
    mio.write_solution_csv(euclid_sol, tmp_path / "sol2.csv")
    assert (tmp_path / "sol2.csv").read_bytes() == path.read_bytes()


def test_jumps_json(dip_sol, euclid_sol, tmp_path):
    path = tmp_path / "jumps.json"
    mio.write_jumps_json(dip_sol, path, extra={"note": "x"})
    doc = json.loads(path.read_text())
    assert doc["model"] == dip_sol.M.name
    assert doc["initial_radius"] == 1.0
    # the plateau is flooded instantly
    assert 0.0 in doc["jump_times"]
    assert doc["proper"] is True
    assert doc["note"] == "x"
    mio.write_jumps_json(euclid_sol, path)
    doc = json.loads(path.read_text())
    assert doc["jump_times"] == []
    assert math.isclose(doc["max_existence_time"],
                        euclid_sol.max_existence_time(), rel_tol=1e-12)


def test_profile_csv_table_is_exact(tmp_path):
    p = IsoProfile.table([1.0, 2.0, 4.0], [3.0, 5.0, 6.0])
    path = tmp_path / "prof.csv"
    mio.write_profile_csv(p, path)
    rows = _read_rows(path)
    assert rows[0] == ["volume", "area"]
    got = [[float(x) for x in row] for row in rows[1:]]
    assert got == [[1.0, 3.0], [2.0, 5.0], [4.0, 6.0]]


def test_profile_csv_power_sampling(euclid_iso, tmp_path):
    path = tmp_path / "prof.csv"
    mio.write_profile_csv(euclid_iso, path, num=64)
    rows = _read_rows(path)
    assert len(rows) == 65
    vols = np.array([float(r[0]) for r in rows[1:]])
    areas = np.array([float(r[1]) for r in rows[1:]])
    assert np.all(np.diff(vols) > 0)
    assert np.all(np.diff(areas) > 0)
    assert np.allclose(areas, euclid_iso.evaluate(vols), rtol=1e-12)


def test_bounds_csv_and_json(euclid_sol, euclid_iso, tmp_path):
    times = [0.5, 1.0, 2.0]
    reports = icf.verify_containment(euclid_sol, euclid_iso, TAU, times)
    cpath = tmp_path / "bounds.csv"
    jpath = tmp_path / "bounds.json"
    mio.write_bounds_csv(reports, cpath)
    mio.write_bounds_json(reports, jpath)
    rows = _read_rows(cpath)
    assert rows[0] == ["t", "rho_t", "R1", "R_main", "contained", "margin"]
    assert len(rows) == 4
    assert rows[1][4] == "true"
    assert float(rows[1][0]) == 0.5
    doc = json.loads(jpath.read_text())
    assert doc["all_contained"] is True
    assert math.isclose(doc["worst_margin"],
                        min(r.margin for r in reports), rel_tol=1e-12)
    assert len(doc["rows"]) == 3
    assert doc["rows"][2]["t"] == 2.0
    mio.write_bounds_json(reports, tmp_path / "b2.json")
    assert (tmp_path / "b2.json").read_bytes() == jpath.read_bytes()


def test_certification_json(euclid, euclid_sol, tmp_path):
    radii = np.linspace(1.0, 5.0, 301)
    C = icf.CellComplex.radial(euclid, radii)
    Cd, u = icf.discretize_solution(euclid_sol, C)
    lo = 1.0 + 0.15 * 4.0
    hi = 1.0 + 0.85 * 4.0
    window = RegionSet(Cd, (Cd.radii > lo) & (Cd.radii <= hi))
    report = icf.certify_weak_solution(Cd, u, [1.5, 2.0], window, tol=1e-2)
    path = tmp_path / "cert.json"
    mio.write_certification_json(report, path)
    doc = json.loads(path.read_text())
    assert doc["passed"] is True
    assert len(doc["rows"]) == 2
    assert doc["rows"][0]["time"] == 1.5
    assert doc["rows"][0]["violation"] < 1e-2


def test_complex_and_region_round_trip(euclid, tmp_path):
    C = icf.CellComplex.radial(euclid, [1.0, 2.0, 3.0, 4.0])
    cpath = tmp_path / "complex.json"
    mio.write_complex_json(C, cpath)
    C2 = mio.read_complex_json(cpath)
    assert np.array_equal(C2.volumes, C.volumes)
    assert np.array_equal(C2.density, C.density)
    assert np.array_equal(C2.iface_a, C.iface_a)
    assert np.array_equal(C2.iface_b, C.iface_b)
    assert np.array_equal(C2.iface_w, C.iface_w)
    assert np.array_equal(C2.iface_outer, C.iface_outer)
    ball = C.ball_region(2.0)
    rpath = tmp_path / "region.json"
    mio.write_region_json(ball, rpath)
    back = mio.read_region_json(C, rpath)
    assert back == ball
    # regions read against an equal complex attach to that complex
    assert mio.read_region_json(C2, rpath).volume() == ball.volume()
    mio.dump_json({"not_cells": [0]}, tmp_path / "bad.json")
    with pytest.raises(icf.ConfigError):
        mio.read_region_json(C, tmp_path / "bad.json")
