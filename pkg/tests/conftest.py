"""Shared fixtures: named models, their flows, and a one-time kernel warmup."""

import numpy as np
import pytest

import imcflow as icf


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the accelerated kernels once so per-test timings stay honest."""
    g = icf.FlowGraph(3)
    g.add(0, 1, 1.0)
    g.add(1, 2, 0.5)
    _, residual = icf.max_flow(g, 0, 2)
    icf.min_cut_sides(g.nv, 0, 2, residual)
    icf.subset_values(2, 0.0, [0], [1], [1.0], np.zeros(2))
    icf.proper_superset_min(np.zeros(4), 2)


@pytest.fixture(scope="session")
def euclid():
    return icf.euclidean()


@pytest.fixture(scope="session")
def cyl():
    return icf.cylinder()


@pytest.fixture(scope="session")
def logcyl():
    return icf.log_cylinder()


@pytest.fixture(scope="session")
def dip_model():
    return icf.dip()


@pytest.fixture(scope="session")
def euclid_sol(euclid):
    return icf.solve(euclid, 1.0)


@pytest.fixture(scope="session")
def dip_sol(dip_model):
    return icf.solve(dip_model, 1.0)


@pytest.fixture(scope="session")
def logcyl_sol(logcyl):
    return icf.solve(logcyl, 1.0)


@pytest.fixture(scope="session")
def euclid_iso():
    return icf.euclidean_profile(3)
