"""Min-cut and subset-enumeration kernels against brute-force references."""

import itertools
import math
import os
import subprocess
import sys

import numpy as np
import pytest

import imcflow as icf
from imcflow.kernels import (
    FlowGraph,
    _subset_values_numpy,
    max_flow,
    min_cut_sides,
    proper_superset_min,
    subset_values,
)


def _random_graph(rng, nv, nedges):
    g = FlowGraph(nv)
    arcs = []
    for _ in range(nedges):
        a = int(rng.integers(0, nv))
        b = int(rng.integers(0, nv))
        while b == a:
            b = int(rng.integers(0, nv))
        cab = float(rng.uniform(0.1, 3.0))
        cba = float(rng.uniform(0.0, 3.0))
        g.add(a, b, cab, cba)
        arcs.append((a, b, cab))
        arcs.append((b, a, cba))
    return g, arcs


def _all_cuts(nv, arcs, s, t):
    """Value of every s-t cut, keyed by the source-side vertex set."""
    others = [v for v in range(nv) if v not in (s, t)]
    cuts = {}
    for size in range(len(others) + 1):
        for combo in itertools.combinations(others, size):
            side = frozenset((s, *combo))
            cuts[side] = sum(c for (a, b, c) in arcs
                             if a in side and b not in side)
    return cuts


def test_max_flow_equals_min_cut():
    rng = np.random.default_rng(11)
    for _ in range(30):
        nv = int(rng.integers(3, 9))
        g, arcs = _random_graph(rng, nv, int(rng.integers(nv, 3 * nv)))
        value, _ = max_flow(g, 0, nv - 1)
        best = min(_all_cuts(nv, arcs, 0, nv - 1).values())
        assert math.isclose(value, best, rel_tol=1e-9, abs_tol=1e-9)


def test_min_cut_sides_are_lattice_extremes():
    rng = np.random.default_rng(12)
    for _ in range(30):
        nv = int(rng.integers(3, 9))
        g, arcs = _random_graph(rng, nv, int(rng.integers(nv, 3 * nv)))
        s, t = 0, nv - 1
        value, residual = max_flow(g, s, t)
        small, large = min_cut_sides(g.nv, s, t, residual)
        small_set = frozenset(int(v) for v in np.flatnonzero(small))
        large_set = frozenset(int(v) for v in np.flatnonzero(large))
        cuts = _all_cuts(nv, arcs, s, t)
        best = min(cuts.values())
        tol = 1e-9 * (1.0 + abs(best))
        mins = [side for side, v in cuts.items() if v <= best + tol]
        assert small_set in cuts and cuts[small_set] <= best + tol
        assert large_set in cuts and cuts[large_set] <= best + tol
        assert small_set == frozenset.intersection(*mins)
        assert large_set == frozenset.union(*mins)


def test_max_flow_no_path():
    g = FlowGraph(4)
    g.add(0, 1, 2.0)
    g.add(2, 3, 2.0)
    value, residual = max_flow(g, 0, 3)
    assert value == 0.0
    small, large = min_cut_sides(g.nv, 0, 3, residual)
    # vertex 2 still reaches the sink through its untouched edge, so the
    # zero cut {0, 1} is the unique minimum
    assert small.tolist() == [True, True, False, False]
    assert large.tolist() == [True, True, False, False]


def test_subset_values_matches_direct_sum():
    rng = np.random.default_rng(13)
    for _ in range(20):
        # two bits minimum so every edge can have distinct endpoints
        nbits = int(rng.integers(2, 11))
        nedges = int(rng.integers(0, 2 * nbits + 1))
        ea, eb = [], []
        for _ in range(nedges):
            a = int(rng.integers(0, nbits))
            b = int(rng.integers(0, nbits))
            while b == a:
                b = int(rng.integers(0, nbits))
            ea.append(a)
            eb.append(b)
        ew = rng.uniform(0.1, 2.0, size=nedges)
        unary = rng.normal(size=nbits)
        base = float(rng.normal())
        got = subset_values(nbits, base, ea, eb, ew, unary)
        assert got.shape == (1 << nbits,)
        for mask in range(1 << nbits):
            val = base
            for i in range(nbits):
                if (mask >> i) & 1:
                    val += unary[i]
            for e in range(nedges):
                if ((mask >> ea[e]) ^ (mask >> eb[e])) & 1:
                    val += ew[e]
            assert got[mask] == val


def test_subset_values_backends_agree():
    rng = np.random.default_rng(14)
    for _ in range(10):
        nbits = int(rng.integers(1, 12))
        nedges = int(rng.integers(0, 3 * nbits))
        ea = rng.integers(0, nbits, size=nedges)
        eb = (ea + 1 + rng.integers(0, max(nbits - 1, 1), size=nedges)) % nbits
        ew = rng.uniform(0.0, 2.0, size=nedges)
        unary = rng.normal(size=nbits)
        base = float(rng.normal())
        a = subset_values(nbits, base, ea, eb, ew, unary)
        b = _subset_values_numpy(nbits, base, np.asarray(ea, dtype=np.int64),
                                 np.asarray(eb, dtype=np.int64),
                                 np.asarray(ew, dtype=np.float64),
                                 np.asarray(unary, dtype=np.float64))
        assert np.array_equal(a, b)


def test_subset_values_edge_cases():
    empty = subset_values(0, 2.5, [], [], [], [])
    assert empty.tolist() == [2.5]
    with pytest.raises(ValueError):
        subset_values(25, 0.0, [], [], [], np.zeros(25))
    with pytest.raises(ValueError):
        subset_values(-1, 0.0, [], [], [], [])


def test_proper_superset_min_matches_naive():
    rng = np.random.default_rng(15)
    for _ in range(10):
        nbits = int(rng.integers(1, 9))
        size = 1 << nbits
        vals = rng.normal(size=size)
        got = proper_superset_min(vals, nbits)
        for m in range(size):
            best = math.inf
            for sup in range(size):
                if sup != m and (sup & m) == m:
                    best = min(best, vals[sup])
            if math.isinf(best):
                assert math.isinf(got[m])
            else:
                assert got[m] == best


def test_proper_superset_min_validation():
    with pytest.raises(ValueError):
        proper_superset_min(np.zeros(5), 2)
    full = proper_superset_min(np.array([3.0, 1.0]), 1)
    assert full[0] == 1.0
    assert math.isinf(full[1])


def test_backend_flag_is_exported():
    assert isinstance(icf.USING_NUMBA, bool)


_PARITY_SCRIPT = """
import numpy as np
from imcflow.kernels import FlowGraph, max_flow, min_cut_sides, subset_values
import imcflow

g = FlowGraph(5)
for a, b, w in [(0, 1, 1.5), (1, 2, 0.7), (0, 3, 2.0), (3, 2, 0.4),
                (1, 3, 0.3), (3, 4, 1.1), (2, 4, 2.2)]:
    g.add(a, b, w, 0.5 * w)
value, residual = max_flow(g, 0, 4)
small, large = min_cut_sides(g.nv, 0, 4, residual)
vals = subset_values(4, 0.25, [0, 1, 2], [1, 2, 3], [1.0, 0.5, 0.25],
                     [0.1, -0.2, 0.3, -0.4])
print(imcflow.USING_NUMBA)
print(repr(round(value, 12)))
print(small.tolist(), large.tolist())
print(repr(vals.tolist()))
"""


@pytest.mark.slow
def test_backend_parity_subprocess():
    outs = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, IMCFLOW_KERNELS=backend)
        proc = subprocess.run([sys.executable, "-c", _PARITY_SCRIPT],
                              capture_output=True, text=True, env=env,
                              timeout=300)
        assert proc.returncode == 0, proc.stderr
        outs[backend] = proc.stdout.splitlines()
    assert outs["numba"][0] == "True"
    assert outs["numpy"][0] == "False"
    assert outs["numba"][1:] == outs["numpy"][1:]
