"""Cell complexes with perimeter and flow-energy functionals.

Two complex kinds are supported: radial one-dimensional complexes built
from a rotationally symmetric manifold (a core ball plus nested annuli)
and planar rectangular grids used as generic test beds.  Regions are cell
unions; perimeter is the total weight of cut interfaces; the flow energy
of a region E inside a window K is

    cut weight of E restricted to interfaces touching K
    minus  sum over cells of E inside K of density * volume,

which is submodular in E, so constrained minimization reduces to a
minimum cut.  The minimal-volume and maximal-volume minimizers are read
off the residual network; every other minimizer lies between them.

Conventions:
  * The exterior marker is cell index -1.  Exterior interfaces always
    count as "outside" for cuts.
  * Radial complexes whose warp is positive at r = 0 carry an inner
    boundary sphere on the core cell.  It contributes to perimeter but is
    not an escape-to-infinity marker for precompactness checks.
  * Complexes are immutable; ``with_density`` returns a shallow variant.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigError, InfeasibleObstacles, NotPrecompact
from .kernels import FlowGraph, max_flow, min_cut_sides, subset_values
from .warped import WarpedManifold, ball_volume_grid, sphere_area, unit_sphere_area

EXTERIOR = -1

__all__ = ["EXTERIOR", "CellComplex", "CertificationReport", "EnergyMinimum",
           "RegionSet", "certify_weak_solution", "check_outward_minimizing",
           "density_from_arrival", "discretize_solution", "exhaustive_minimum",
           "flow_energy", "minimize_energy", "perimeter", "sublevel_region",
           "submodularity_slack"]


class CellComplex:
    """Immutable weighted cell complex (radial-1D or planar-grid-2D)."""

    def __init__(self, kind, volumes, iface_a, iface_b, iface_w,
                 iface_outer=None, density=None, radii=None, shape=None):
        if kind not in ("radial", "planar"):
            raise ConfigError(f"unknown complex kind {kind!r}")
        self.kind = kind
        self.volumes = np.ascontiguousarray(volumes, dtype=np.float64)
        self.iface_a = np.ascontiguousarray(iface_a, dtype=np.int64)
        self.iface_b = np.ascontiguousarray(iface_b, dtype=np.int64)
        self.iface_w = np.ascontiguousarray(iface_w, dtype=np.float64)
        n = self.volumes.shape[0]
        m = self.iface_a.shape[0]
        if iface_outer is None:
            iface_outer = np.zeros(m, dtype=bool)
        self.iface_outer = np.ascontiguousarray(iface_outer, dtype=bool)
        if density is None:
            density = np.zeros(n, dtype=np.float64)
        self.density = np.ascontiguousarray(density, dtype=np.float64)
        self.radii = None if radii is None else np.ascontiguousarray(radii, dtype=np.float64)
        self.shape = None if shape is None else (int(shape[0]), int(shape[1]))
        self._validate()
        for arr in (self.volumes, self.iface_a, self.iface_b, self.iface_w,
                    self.iface_outer, self.density):
            arr.setflags(write=False)
        if self.radii is not None:
            self.radii.setflags(write=False)

    def _validate(self):
        n, m = self.num_cells, self.num_interfaces
        if n == 0:
            raise ConfigError("complex needs at least one cell")
        if self.volumes.min() < 0:
            raise ConfigError("cell volumes must be nonnegative")
        if m and self.iface_w.min() < 0:
            raise ConfigError("interface weights must be nonnegative")
        if self.iface_b.shape != (m,) or self.iface_w.shape != (m,) \
                or self.iface_outer.shape != (m,):
            raise ConfigError("interface arrays must share one length")
        if self.density.shape != (n,):
            raise ConfigError("density must have one value per cell")
        bad_a = (self.iface_a < 0) | (self.iface_a >= n)
        bad_b = (self.iface_b < EXTERIOR) | (self.iface_b >= n)
        if m and (bad_a.any() or bad_b.any()):
            raise ConfigError("interface endpoint out of range")
        if m and (self.iface_a == self.iface_b).any():
            raise ConfigError("interface endpoints must differ")
        if m and (self.iface_outer & (self.iface_b != EXTERIOR)).any():
            raise ConfigError("only exterior interfaces can be outer markers")

    # -- construction --------------------------------------------------

    @classmethod
    def radial(cls, M: WarpedManifold, radii) -> "CellComplex":
        """Radial complex: core ball [0, radii[0]] plus nested annuli.

        Interface weights are sphere areas at the given radii; volumes are
        geodesic-ball volume differences.  When the warp is positive at
        r = 0 the core cell gets an inner boundary interface (perimeter
        only, not an escape marker).  The outermost interface is the
        escape marker.
        """
        radii = np.asarray(radii, dtype=np.float64)
        if radii.ndim != 1 or radii.size < 1:
            raise ConfigError("radial complex needs at least one radius")
        if radii[0] <= 0:
            raise ConfigError("radii must be positive")
        if np.any(np.diff(radii) <= 0):
            raise ConfigError("radii must be strictly increasing")
        if radii[-1] > M.r_max:
            raise ConfigError("radii exceed the manifold extent")
        cum = ball_volume_grid(M, radii)
        volumes = np.diff(cum, prepend=0.0)
        ncell = radii.size
        ia, ib, w, outer = [], [], [], []
        # inner boundary sphere when the warp does not close at the axis
        f_at_zero = float(M.warp(0.0))
        if f_at_zero > 0.0:
            ia.append(0)
            ib.append(EXTERIOR)
            w.append(unit_sphere_area(M.n) * f_at_zero ** (M.n - 1))
            outer.append(False)
        for j in range(ncell - 1):
            ia.append(j)
            ib.append(j + 1)
            w.append(sphere_area(M, radii[j]))
            outer.append(False)
        ia.append(ncell - 1)
        ib.append(EXTERIOR)
        w.append(sphere_area(M, radii[-1]))
        outer.append(True)
        return cls("radial", volumes, ia, ib, w, outer, radii=radii)

    @classmethod
    def planar(cls, nx: int, ny: int, dx: float = 1.0, dy: float = 1.0) -> "CellComplex":
        """Rectangular nx-by-ny grid, row-major cells, boundary faces exterior."""
        if nx < 1 or ny < 1 or dx <= 0 or dy <= 0:
            raise ConfigError("planar grid needs positive dimensions")
        ncell = nx * ny
        volumes = np.full(ncell, dx * dy)
        ia, ib, w, outer = [], [], [], []

        def cell(ix, iy):
            return iy * nx + ix

        for iy in range(ny):
            for ix in range(nx):
                c = cell(ix, iy)
                if ix + 1 < nx:
                    ia.append(c); ib.append(cell(ix + 1, iy)); w.append(dy); outer.append(False)
                else:
                    ia.append(c); ib.append(EXTERIOR); w.append(dy); outer.append(True)
                if ix == 0:
                    ia.append(c); ib.append(EXTERIOR); w.append(dy); outer.append(True)
                if iy + 1 < ny:
                    ia.append(c); ib.append(cell(ix, iy + 1)); w.append(dx); outer.append(False)
                else:
                    ia.append(c); ib.append(EXTERIOR); w.append(dx); outer.append(True)
                if iy == 0:
                    ia.append(c); ib.append(EXTERIOR); w.append(dx); outer.append(True)
        return cls("planar", volumes, ia, ib, w, outer, shape=(nx, ny))

    def with_density(self, density) -> "CellComplex":
        return CellComplex(self.kind, self.volumes, self.iface_a, self.iface_b,
                           self.iface_w, self.iface_outer, density,
                           radii=self.radii, shape=self.shape)

    # -- basic queries ---------------------------------------------------

    @property
    def num_cells(self) -> int:
        return self.volumes.shape[0]

    @property
    def num_interfaces(self) -> int:
        return self.iface_a.shape[0]

    def outer_cells(self) -> np.ndarray:
        """Boolean mask of cells carrying an escape-marker interface."""
        mask = np.zeros(self.num_cells, dtype=bool)
        mask[self.iface_a[self.iface_outer]] = True
        return mask

    def cell_span(self, j: int) -> tuple[float, float]:
        if self.radii is None:
            raise ConfigError("cell_span applies to radial complexes")
        lo = 0.0 if j == 0 else float(self.radii[j - 1])
        return lo, float(self.radii[j])

    def ball_region(self, rho: float, tol: float = 1e-12) -> "RegionSet":
        """Cells entirely within radius rho (outer radius at most rho)."""
        if self.radii is None:
            raise ConfigError("ball_region applies to radial complexes")
        cut = rho * (1.0 + tol) + tol
        mask = self.radii <= cut
        return RegionSet(self, mask)

    def region_outer_radius(self, E: "RegionSet") -> float:
        if self.radii is None:
            raise ConfigError("region_outer_radius applies to radial complexes")
        sel = self.radii[E.mask]
        return float(sel.max()) if sel.size else 0.0

    def to_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "cells": [{"volume": float(v), "density": float(d)}
                      for v, d in zip(self.volumes, self.density)],
            "interfaces": [{"a": int(a),
                            "b": ("EXT" if b == EXTERIOR else int(b)),
                            "weight": float(w),
                            "outer": bool(o)}
                           for a, b, w, o in zip(self.iface_a, self.iface_b,
                                                 self.iface_w, self.iface_outer)],
        }
        if self.radii is not None:
            doc["radii"] = [float(r) for r in self.radii]
        if self.shape is not None:
            doc["shape"] = list(self.shape)
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "CellComplex":
        cells = doc["cells"]
        volumes = [c["volume"] for c in cells]
        density = [c.get("density", 0.0) for c in cells]
        ia = [i["a"] for i in doc["interfaces"]]
        ib = [EXTERIOR if i["b"] == "EXT" else i["b"] for i in doc["interfaces"]]
        w = [i["weight"] for i in doc["interfaces"]]
        outer = [bool(i.get("outer", False)) for i in doc["interfaces"]]
        return cls(doc["kind"], volumes, ia, ib, w, outer, density,
                   radii=doc.get("radii"), shape=doc.get("shape"))

    def __repr__(self):
        return (f"CellComplex(kind={self.kind!r}, cells={self.num_cells}, "
                f"interfaces={self.num_interfaces})")


class RegionSet:
    """A union of cells of one complex, held as a boolean membership mask."""

    __slots__ = ("complex", "_mask")

    def __init__(self, complex: CellComplex, mask):
        mask = np.array(mask, dtype=bool, copy=True)
        if mask.shape != (complex.num_cells,):
            raise ConfigError("membership mask must have one entry per cell")
        mask.setflags(write=False)
        self.complex = complex
        self._mask = mask

    @property
    def mask(self) -> np.ndarray:
        return self._mask

    @classmethod
    def empty(cls, complex: CellComplex) -> "RegionSet":
        return cls(complex, np.zeros(complex.num_cells, dtype=bool))

    @classmethod
    def full(cls, complex: CellComplex) -> "RegionSet":
        return cls(complex, np.ones(complex.num_cells, dtype=bool))

    @classmethod
    def from_cells(cls, complex: CellComplex, cells) -> "RegionSet":
        mask = np.zeros(complex.num_cells, dtype=bool)
        for c in cells:
            if not 0 <= int(c) < complex.num_cells:
                raise ConfigError(f"cell index {c} out of range")
            mask[int(c)] = True
        return cls(complex, mask)

    def cells(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self._mask))

    def volume(self) -> float:
        return float(self.complex.volumes[self._mask].sum())

    def _check_same(self, other: "RegionSet"):
        if self.complex is not other.complex:
            raise ConfigError("regions live on different complexes")

    def union(self, other: "RegionSet") -> "RegionSet":
        self._check_same(other)
        return RegionSet(self.complex, self._mask | other._mask)

    def intersection(self, other: "RegionSet") -> "RegionSet":
        self._check_same(other)
        return RegionSet(self.complex, self._mask & other._mask)

    def difference(self, other: "RegionSet") -> "RegionSet":
        self._check_same(other)
        return RegionSet(self.complex, self._mask & ~other._mask)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def issubset(self, other: "RegionSet") -> bool:
        self._check_same(other)
        return bool(np.all(~self._mask | other._mask))

    def __eq__(self, other):
        if not isinstance(other, RegionSet):
            return NotImplemented
        return self.complex is other.complex and bool(np.array_equal(self._mask, other._mask))

    def __hash__(self):
        return hash((id(self.complex), self._mask.tobytes()))

    def __len__(self):
        return int(self._mask.sum())

    def __contains__(self, cell):
        return bool(self._mask[int(cell)])

    def __repr__(self):
        return f"RegionSet(cells={self.cells()})"


# -- functionals -------------------------------------------------------------

def _cut_mask(C: CellComplex, mask: np.ndarray) -> np.ndarray:
    a_in = mask[C.iface_a]
    b_in = np.where(C.iface_b >= 0, mask[np.clip(C.iface_b, 0, None)], False)
    return a_in ^ b_in


def perimeter(C: CellComplex, E: RegionSet) -> float:
    """Total weight of interfaces with exactly one endpoint in E."""
    if E.complex is not C:
        raise ConfigError("region belongs to a different complex")
    return float(C.iface_w[_cut_mask(C, E.mask)].sum())


def flow_energy(C: CellComplex, E: RegionSet, window: RegionSet | None = None) -> float:
    """Windowed perimeter of E minus the density-weighted volume of E in the window.

    Only interfaces with at least one endpoint inside the window enter the
    cut term; the exterior never counts as inside.
    """
    if E.complex is not C:
        raise ConfigError("region belongs to a different complex")
    kmask = np.ones(C.num_cells, dtype=bool) if window is None else window.mask
    if window is not None and window.complex is not C:
        raise ConfigError("window belongs to a different complex")
    touching = kmask[C.iface_a] | np.where(C.iface_b >= 0,
                                           kmask[np.clip(C.iface_b, 0, None)], False)
    cut = _cut_mask(C, E.mask) & touching
    cut_term = float(C.iface_w[cut].sum())
    volume_term = float((C.density * C.volumes)[E.mask & kmask].sum())
    return cut_term - volume_term


def submodularity_slack(C: CellComplex, E: RegionSet, F: RegionSet) -> float:
    """perimeter(E) + perimeter(F) - perimeter(E|F) - perimeter(E&F), always >= 0."""
    return (perimeter(C, E) + perimeter(C, F)
            - perimeter(C, E | F) - perimeter(C, E & F))


# -- constrained minimization -------------------------------------------------

@dataclass(frozen=True)
class EnergyMinimum:
    """Outcome of a constrained flow-energy minimization.

    ``minimal`` and ``maximal`` are the inclusion-extremal minimizers; any
    other minimizer contains ``minimal`` and lies inside ``maximal``.
    ``value`` is the energy of the minimizers, evaluated by direct
    summation (not from the flow value).
    """
    value: float
    minimal: RegionSet
    maximal: RegionSet
    flow_value: float
    offset: float


def minimize_energy(C: CellComplex, window: RegionSet | None,
                    inner: RegionSet, outer: RegionSet | None = None) -> EnergyMinimum:
    """Minimize the flow energy over regions E with inner <= E <= outer
    and E symmetric-difference inner confined to the window.

    Cells outside the window are frozen to their membership in ``inner``;
    window cells not excluded by ``outer`` are free.  The minimization is
    a minimum s-t cut on the interface graph.
    """
    if inner.complex is not C:
        raise ConfigError("inner obstacle belongs to a different complex")
    kmask = np.ones(C.num_cells, dtype=bool) if window is None else window.mask
    omask = np.ones(C.num_cells, dtype=bool) if outer is None else outer.mask
    if np.any(inner.mask & ~omask):
        raise InfeasibleObstacles("inner obstacle escapes the outer obstacle")
    fixed_in = inner.mask.copy()
    fixed_out = (~omask) | (~kmask & ~inner.mask)
    free = ~fixed_in & ~fixed_out
    free_idx = np.flatnonzero(free)
    nfree = free_idx.size
    col = np.full(C.num_cells, -1, dtype=np.int64)
    col[free_idx] = np.arange(nfree)

    gain = C.density * C.volumes
    offset = float(-gain[fixed_in & kmask].sum())
    lin = -gain[free_idx].copy()

    touching = kmask[C.iface_a] | np.where(C.iface_b >= 0,
                                           kmask[np.clip(C.iface_b, 0, None)], False)
    s, t = nfree, nfree + 1
    graph = FlowGraph(nfree + 2)
    pair_edges = []
    for e in np.flatnonzero(touching):
        a = int(C.iface_a[e])
        b = int(C.iface_b[e])
        w = float(C.iface_w[e])
        fa = col[a]
        if b == EXTERIOR:
            fb, b_fixed_in = -1, False
        else:
            fb, b_fixed_in = col[b], bool(fixed_in[b])
        a_fixed_in = bool(fixed_in[a])
        if fa >= 0 and fb >= 0:
            pair_edges.append((fa, fb, w))
        elif fa >= 0:
            if b_fixed_in:
                lin[fa] -= w
                offset += w
            else:
                lin[fa] += w
        elif fb >= 0:
            if a_fixed_in:
                lin[fb] -= w
                offset += w
            else:
                lin[fb] += w
        else:
            if a_fixed_in != b_fixed_in:
                offset += w
    for i in range(nfree):
        if lin[i] > 0.0:
            graph.add(i, t, lin[i])
        elif lin[i] < 0.0:
            graph.add(s, i, -lin[i])
            offset += lin[i]
    for fa, fb, w in pair_edges:
        graph.add(fa, fb, w, w)

    if nfree == 0:
        region = RegionSet(C, fixed_in)
        value = flow_energy(C, region, window)
        return EnergyMinimum(value, region, RegionSet(C, fixed_in), 0.0, offset)

    flow_value, residual = max_flow(graph, s, t)
    small, large = min_cut_sides(graph.nv, s, t, residual)
    mask_min = fixed_in.copy()
    mask_min[free_idx[small[:nfree]]] = True
    mask_max = fixed_in.copy()
    mask_max[free_idx[large[:nfree]]] = True
    region_min = RegionSet(C, mask_min)
    region_max = RegionSet(C, mask_max)
    value = flow_energy(C, region_min, window)
    return EnergyMinimum(value, region_min, region_max, float(flow_value), offset)


def exhaustive_minimum(C: CellComplex, window: RegionSet | None,
                       inner: RegionSet, outer: RegionSet | None = None):
    """Reference brute-force counterpart of :func:`minimize_energy`.

    Enumerates every admissible region (so the number of free cells is
    capped at 24) and returns
    ``(value, minimal_region, maximal_region, values_by_mask, free_cells)``
    where the extremal regions are the bitwise AND / OR of all argmin
    masks, which the submodular lattice guarantees are themselves
    minimizers.
    """
    if inner.complex is not C:
        raise ConfigError("inner obstacle belongs to a different complex")
    kmask = np.ones(C.num_cells, dtype=bool) if window is None else window.mask
    omask = np.ones(C.num_cells, dtype=bool) if outer is None else outer.mask
    if np.any(inner.mask & ~omask):
        raise InfeasibleObstacles("inner obstacle escapes the outer obstacle")
    fixed_in = inner.mask.copy()
    fixed_out = (~omask) | (~kmask & ~inner.mask)
    free_idx = np.flatnonzero(~fixed_in & ~fixed_out)
    nfree = free_idx.size
    if nfree > 24:
        raise ConfigError(f"enumeration limited to 24 free cells, got {nfree}")
    bit = {int(c): i for i, c in enumerate(free_idx)}

    gain = C.density * C.volumes
    base = float(-gain[fixed_in & kmask].sum())
    unary = [-float(gain[c]) for c in free_idx]
    ea, eb, ew = [], [], []
    for e in range(C.num_interfaces):
        a = int(C.iface_a[e])
        b = int(C.iface_b[e])
        w = float(C.iface_w[e])
        if not (kmask[a] or (b >= 0 and kmask[b])):
            continue
        sa = "free" if a in bit else ("in" if fixed_in[a] else "out")
        if b == EXTERIOR:
            sb = "out"
        else:
            sb = "free" if b in bit else ("in" if fixed_in[b] else "out")
        if sa == "free" and sb == "free":
            ea.append(bit[a]); eb.append(bit[b]); ew.append(w)
        elif sa == "free":
            if sb == "in":
                unary[bit[a]] -= w
                base += w
            else:
                unary[bit[a]] += w
        elif sb == "free":
            if sa == "in":
                unary[bit[b]] -= w
                base += w
            else:
                unary[bit[b]] += w
        elif sa != sb:
            base += w
    values = subset_values(nfree, base, ea, eb, ew, unary)
    best = float(values.min())
    argmins = np.flatnonzero(values == best)
    and_mask = int(argmins[0])
    or_mask = int(argmins[0])
    for m in argmins[1:]:
        and_mask &= int(m)
        or_mask |= int(m)
    lo = fixed_in.copy()
    hi = fixed_in.copy()
    for i, c in enumerate(free_idx):
        if (and_mask >> i) & 1:
            lo[c] = True
        if (or_mask >> i) & 1:
            hi[c] = True
    return best, RegionSet(C, lo), RegionSet(C, hi), values, free_idx


# -- arrival-time plumbing ----------------------------------------------------

def sublevel_region(C: CellComplex, u_cells, t: float) -> RegionSet:
    """Cells with arrival value strictly below t."""
    u = np.asarray(u_cells, dtype=np.float64)
    if u.shape != (C.num_cells,):
        raise ConfigError("arrival values must have one entry per cell")
    return RegionSet(C, u < t)


def density_from_arrival(C: CellComplex, u_cells) -> np.ndarray:
    """Per-cell gradient magnitude of an arrival function.

    Radial complexes use the absolute difference across the cell divided
    by the cell width; cells adjoining a non-finite neighbor value (the
    core) get density zero.  Planar grids use forward differences
    combined into a per-cell magnitude.
    """
    u = np.asarray(u_cells, dtype=np.float64)
    if u.shape != (C.num_cells,):
        raise ConfigError("arrival values must have one entry per cell")
    dens = np.zeros(C.num_cells)
    if C.kind == "radial":
        for j in range(1, C.num_cells):
            du = u[j] - u[j - 1]
            if math.isfinite(du):
                lo, hi = C.cell_span(j)
                dens[j] = abs(du) / (hi - lo)
        return dens
    nx, ny = C.shape
    for iy in range(ny):
        for ix in range(nx):
            c = iy * nx + ix
            gx = u[c + 1] - u[c] if ix + 1 < nx else 0.0
            gy = u[c + nx] - u[c] if iy + 1 < ny else 0.0
            if not math.isfinite(gx):
                gx = 0.0
            if not math.isfinite(gy):
                gy = 0.0
            dens[c] = math.hypot(gx, gy)
    return dens


def discretize_solution(sol, C: CellComplex):
    """Sample a symmetric flow solution onto a radial complex.

    Returns ``(complex_with_density, u_cells)``.  Each cell's arrival
    value is the solution at its outer radius; the core cell gets minus
    infinity so that it belongs to every sublevel region, with density
    zero (its interior is flooded at the start, contributing no gradient).
    The core cell therefore stands for the initial region: the first grid
    radius should sit at the solution's starting radius.
    """
    if C.kind != "radial":
        raise ConfigError("solutions discretize onto radial complexes")
    u = np.empty(C.num_cells)
    u[0] = -np.inf
    if C.num_cells > 1:
        u[1:] = sol.evaluate(C.radii[1:])
    dens = density_from_arrival(C, u)
    return C.with_density(dens), u


# -- certification ------------------------------------------------------------

@dataclass(frozen=True)
class CertificationReport:
    """Per-time minimality audit of an arrival function on a window."""
    rows: tuple
    worst_violation: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "rows": [dict(r) for r in self.rows],
            "worst_violation": self.worst_violation,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def certify_weak_solution(C: CellComplex, u_cells, times, window: RegionSet,
                          density=None, tol: float = 1e-6) -> CertificationReport:
    """Check that every sublevel set of u minimizes the flow energy.

    For each time t the sublevel region E_t is compared against the
    constrained minimum with obstacles (E_t minus the window, E_t union
    the window); the report records the energy gap.  PASS requires every
    gap at most ``tol``.
    """
    u = np.asarray(u_cells, dtype=np.float64)
    if density is None:
        density = density_from_arrival(C, u)
    C2 = C.with_density(density)
    window = RegionSet(C2, window.mask)
    rows = []
    worst = 0.0
    for t in times:
        t = float(t)
        et = sublevel_region(C2, u, t)
        inner = et - window
        outer = et | window
        best = minimize_energy(C2, window, inner, outer)
        energy = flow_energy(C2, et, window)
        violation = energy - best.value
        worst = max(worst, violation)
        rows.append({"time": t, "energy": energy, "minimum": best.value,
                     "violation": violation})
    return CertificationReport(tuple(rows), worst, float(tol), bool(worst <= tol))


def check_outward_minimizing(C: CellComplex, E: RegionSet, strict: bool = False,
                             rtol: float = 1e-12) -> bool:
    """Is E (strictly) outward minimizing among cell supersets?

    Solves the zero-density least-area problem with E as the inner
    obstacle.  E is outward minimizing when its perimeter matches the
    minimum; strictly when it is additionally the unique minimizer, read
    off the maximal-volume minimizer of the cut.
    """
    if E.complex is not C:
        raise ConfigError("region belongs to a different complex")
    if np.any(E.mask & C.outer_cells()):
        raise NotPrecompact("region touches the outer boundary marker")
    zero = C.with_density(np.zeros(C.num_cells))
    inner = RegionSet(zero, E.mask)
    best = minimize_energy(zero, None, inner, None)
    pe = perimeter(zero, inner)
    tol = rtol * max(1.0, abs(pe))
    minimizing = pe <= best.value + tol
    if not strict:
        return bool(minimizing)
    return bool(minimizing and np.array_equal(best.maximal.mask, E.mask))
