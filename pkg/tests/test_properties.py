"""Seeded property sweeps over random instances.

Large-count randomized checks of the lattice structure of the energy,
the exact cross-interface decomposition of the submodularity slack, hull
idempotence, strong-profile envelope laws, and the volume growth
identity for the continuum flow.
"""

import math

import numpy as np
import pytest

import imcflow as icf
from imcflow import CellComplex, IsoProfile, RegionSet
from imcflow.synthetic import (random_planar_complex, random_radial_complex,
                               random_region)

TAU = 4.0 * math.pi


def test_submodularity_slack_sweep():
    rng = np.random.default_rng(61)
    for trial in range(1000):
        if trial % 2 == 0:
            C = random_planar_complex(rng)
        else:
            C = random_radial_complex(rng)
        E = random_region(rng, C)
        F = random_region(rng, C)
        slack = icf.submodularity_slack(C, E, F)
        assert slack >= -1e-12
        # the slack is exactly the lattice perimeter inequality
        lhs = icf.perimeter(C, E | F) + icf.perimeter(C, E & F)
        rhs = icf.perimeter(C, E) + icf.perimeter(C, F)
        assert lhs <= rhs + 1e-9 * (1.0 + abs(rhs))


def test_decomposition_identity_sweep():
    # with dyadic weights every perimeter is an exact multiple of 1/16,
    # so the slack equals twice the weight joining E \ F to F \ E as a
    # float equation, not an approximation
    rng = np.random.default_rng(62)
    for trial in range(500):
        nx = int(rng.integers(2, 4))
        ny = int(rng.integers(2, 4))
        base = CellComplex.planar(nx, ny)
        w = rng.integers(1, 64, base.num_interfaces) / 16.0
        C = CellComplex("planar", base.volumes, base.iface_a, base.iface_b,
                        w, base.iface_outer, shape=base.shape)
        E = random_region(rng, C)
        F = random_region(rng, C)
        only_e = E.mask & ~F.mask
        only_f = F.mask & ~E.mask
        cross = 0.0
        for a, b, wt in zip(C.iface_a, C.iface_b, C.iface_w):
            if b == icf.EXTERIOR:
                continue
            if (only_e[a] and only_f[b]) or (only_f[a] and only_e[b]):
                cross += float(wt)
        assert icf.submodularity_slack(C, E, F) == 2.0 * cross


def test_hull_idempotence_sweep():
    rng = np.random.default_rng(63)
    for trial in range(100):
        if trial % 2 == 0:
            C = random_planar_complex(rng, with_density=False)
        else:
            C = random_radial_complex(rng, with_density=False)
        omega = RegionSet(C, rng.random(C.num_cells) < 0.35)
        hull = icf.maximal_volume_solution(C, omega)
        assert omega.issubset(hull)
        assert icf.maximal_volume_solution(C, hull) == hull


def test_hull_monotone_sweep():
    rng = np.random.default_rng(64)
    for _ in range(60):
        C = random_planar_complex(rng, with_density=False)
        small = RegionSet(C, rng.random(C.num_cells) < 0.25)
        grown = small | RegionSet(C, rng.random(C.num_cells) < 0.25)
        h_small = icf.maximal_volume_solution(C, small)
        h_grown = icf.maximal_volume_solution(C, grown)
        assert h_small.issubset(h_grown)


def test_strong_profile_envelope_sweep():
    rng = np.random.default_rng(65)
    for _ in range(50):
        m = int(rng.integers(4, 12))
        vols = np.sort(rng.uniform(0.1, 50.0, m))
        vols += 1e-3 * np.arange(m)  # guard against duplicate nodes
        areas = rng.uniform(0.5, 20.0, m)
        p = IsoProfile.table(vols, areas)
        sp = icf.strong_profile(p)
        q = np.linspace(vols[0], vols[-1], 257)
        q = np.unique(np.concatenate([q, vols]))
        env = np.array([sp.evaluate(x) for x in q])
        raw = np.asarray(p.evaluate(q), dtype=float)
        # below the profile, nondecreasing, and equal to the suffix minimum
        assert np.all(env <= raw + 1e-12)
        assert np.all(np.diff(env) >= -1e-12)
        suffix = np.minimum.accumulate(raw[::-1])[::-1]
        assert np.allclose(env, suffix, rtol=1e-12, atol=1e-12)


def test_inverse_strong_profile_properties():
    rng = np.random.default_rng(66)
    for _ in range(40):
        m = int(rng.integers(4, 10))
        vols = np.sort(rng.uniform(0.5, 40.0, m)) + 1e-3 * np.arange(m)
        areas = rng.uniform(1.0, 15.0, m)
        p = IsoProfile.table(vols, areas)
        sp = icf.strong_profile(p)
        lo = float(min(np.min(areas), sp.evaluate(vols[0])))
        queries = np.sort(rng.uniform(0.2 * lo, 0.999 * sp.limit_inf, 6))
        prev = -math.inf
        for a in queries:
            v = icf.inverse_strong_profile(sp, float(a))
            assert v >= prev  # monotone in the area budget
            prev = v
            if v > 0.0:
                assert sp.evaluate(v) <= a + 1e-9 * (1.0 + a)
    # flat-space closed form: the unit ball is the largest volume whose
    # envelope stays below the unit sphere area
    euclid = icf.euclidean_profile(3)
    v = icf.inverse_strong_profile(icf.strong_profile(euclid), TAU)
    assert math.isclose(v, TAU / 3.0, rel_tol=1e-12)
    with pytest.raises(icf.ConfigError):
        icf.inverse_strong_profile(icf.strong_profile(euclid), -1.0)
    with pytest.raises(icf.NonDegeneracyExceeded):
        icf.inverse_strong_profile(icf.strong_profile(euclid), 1e30)


def _volume_rate(M, sol, t, h=1e-4):
    lo, _ = sol.sublevel(t - h)
    hi, _ = sol.sublevel(t + h)
    return (icf.ball_volume(M, hi) - icf.ball_volume(M, lo)) / (2.0 * h)


def test_volume_growth_rate_matches_boundary_area(euclid, euclid_sol,
                                                  logcyl, logcyl_sol):
    # away from jumps the enclosed volume grows at rate
    # area / mean curvature = A(rho) f(rho) / ((n-1) f'(rho))
    for M, sol in ((euclid, euclid_sol), (logcyl, logcyl_sol)):
        for t in (0.5, 1.5, 2.5):
            rho, _ = sol.sublevel(t)
            f = float(M.warp(rho))
            df = M.warp_slope(rho)
            want = icf.sphere_area(M, rho) * f / ((M.n - 1) * df)
            got = _volume_rate(M, sol, t)
            assert math.isclose(got, want, rel_tol=1e-6)
    # flat space in closed form: V(t) = (4 pi / 3) e^{3t/2}
    for t in (0.5, 1.5, 2.5):
        want = 2.0 * math.pi * math.exp(1.5 * t)
        assert math.isclose(_volume_rate(euclid, euclid_sol, t), want,
                            rel_tol=1e-6)
