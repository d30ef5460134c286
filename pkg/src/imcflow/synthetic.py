"""Seeded random instances for property tests and benchmarks.

All generators take a ``numpy.random.Generator`` so suites stay
deterministic; none of them read global state.
"""

from __future__ import annotations

import numpy as np

from .complexes import CellComplex, RegionSet
from .models import named_model

__all__ = ["random_minimization_instance", "random_planar_complex",
           "random_radial_complex", "random_region"]


def random_planar_complex(rng: np.random.Generator, nx: int | None = None,
                          ny: int | None = None, max_cells: int = 20,
                          with_density: bool = True) -> CellComplex:
    """Planar grid with random positive weights, volumes, and density."""
    if nx is None or ny is None:
        nx = int(rng.integers(2, 6))
        ny = int(rng.integers(2, max(3, max_cells // nx + 1)))
        while nx * ny > max_cells:
            ny -= 1
    base = CellComplex.planar(nx, ny)
    weights = rng.uniform(0.2, 3.0, base.num_interfaces)
    volumes = rng.uniform(0.1, 2.0, base.num_cells)
    density = (rng.uniform(0.0, 1.5, base.num_cells) if with_density
               else np.zeros(base.num_cells))
    return CellComplex("planar", volumes, base.iface_a, base.iface_b,
                       weights, base.iface_outer, density, shape=base.shape)


_MODEL_POOL = ("euclidean", "log_cylinder", "dip", "cylinder")


def random_radial_complex(rng: np.random.Generator, max_cells: int = 20,
                          with_density: bool = True) -> CellComplex:
    """Radial complex on a random shipped model with random radii."""
    name = _MODEL_POOL[int(rng.integers(0, len(_MODEL_POOL)))]
    M = named_model(name, n=3)
    ncell = int(rng.integers(3, max_cells + 1))
    radii = np.sort(rng.uniform(0.3, 9.0, ncell))
    while np.min(np.diff(radii, prepend=0.0)) < 1e-3:
        radii = np.sort(rng.uniform(0.3, 9.0, ncell))
    C = CellComplex.radial(M, radii)
    if not with_density:
        return C
    return C.with_density(rng.uniform(0.0, 1.5, C.num_cells))


def random_region(rng: np.random.Generator, C: CellComplex,
                  fill: float = 0.5, avoid_outer: bool = False) -> RegionSet:
    mask = rng.random(C.num_cells) < fill
    if avoid_outer:
        mask &= ~C.outer_cells()
    return RegionSet(C, mask)


def random_minimization_instance(rng: np.random.Generator,
                                 max_cells: int = 20):
    """A random complex plus admissible (window, inner, outer) obstacles."""
    if rng.random() < 0.5:
        C = random_planar_complex(rng, max_cells=max_cells)
    else:
        C = random_radial_complex(rng, max_cells=max_cells)
    window = random_region(rng, C, fill=float(rng.uniform(0.4, 1.0)))
    if len(window) == 0:
        window = RegionSet.full(C)
    inner = random_region(rng, C, fill=float(rng.uniform(0.0, 0.4)))
    outer = inner | random_region(rng, C, fill=float(rng.uniform(0.5, 1.0)))
    return C, window, inner, outer
