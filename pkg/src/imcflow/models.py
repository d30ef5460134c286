"""Named warped-product models shipped with the package.

``euclidean``     f(r) = r, flat space.
``cylinder``      f(r) = c, a product cylinder cross-section; the flow from
                  a sphere at the cross-section level is frozen (horizon 0).
``log_cylinder``  f(r) = log(2 + r^2): unbounded warp with bounded curvature,
                  volume growth barely superlinear.
``dip``           f runs up to 1 at r=1, bulges to 1.2 at r=1.5 while coming
                  back to 1 at r=2, then grows linearly.  The running infimum
                  ahead of r=1 is flat, so the flow from {r < 1} jumps at
                  t = 0 to {r < 2}; the two boundary spheres have equal area.
``two_dips``      same, with a second equal-endpoint bulge on [3, 4] at warp
                  level 2, producing a second jump at t = 2 log 2.
``below_dip``     a warp that dips strictly below f(1)=1 (minimum 0.8 at
                  r=1.5) before recovering.  Not in the CLI registry; used by
                  tests for the jump-to-the-area-minimum behavior.

All interior extrema and kinks are declared as breakpoints so sampling grids
keep the warp monotone per cell, which makes running-infimum evaluation exact.
"""

from __future__ import annotations

import math

from .errors import ConfigError
from .warped import WarpedManifold

__all__ = ["CLI_MODELS", "below_dip", "cylinder", "dip", "euclidean",
           "log_cylinder", "named_model", "two_dips"]


def euclidean(n: int = 3, r_max: float = 100.0) -> WarpedManifold:
    return WarpedManifold.from_function(
        n, lambda r: r, r_max, df=lambda r: 1.0, name="euclidean")


def cylinder(n: int = 3, r_max: float = 60.0, c: float = 1.0) -> WarpedManifold:
    if c <= 0:
        raise ConfigError("cylinder cross-section scale must be positive")
    return WarpedManifold.from_function(
        n, lambda r: c, r_max, df=lambda r: 0.0, name="cylinder")


def log_cylinder(n: int = 3, r_max: float = 80.0) -> WarpedManifold:
    return WarpedManifold.from_function(
        n, lambda r: math.log(2.0 + r * r), r_max,
        df=lambda r: 2.0 * r / (2.0 + r * r), name="log_cylinder")


def _bump(r: float, lo: float, level: float, amp: float) -> float:
    # equal-endpoint bulge on [lo, lo+1]: level at both ends, peak level+amp
    s = math.sin(math.pi * (r - lo))
    return level + amp * s * s


def dip(n: int = 3, r_max: float = 60.0) -> WarpedManifold:
    def f(r):
        if r <= 1.0:
            return r
        if r <= 2.0:
            return _bump(r, 1.0, 1.0, 0.2)
        return r - 1.0

    def df(r):
        if r <= 1.0:
            return 1.0
        if r <= 2.0:
            return 0.2 * math.pi * math.sin(2.0 * math.pi * (r - 1.0))
        return 1.0

    return WarpedManifold.from_function(
        n, f, r_max, df=df, name="dip", breakpoints=(1.0, 1.5, 2.0))


def two_dips(n: int = 3, r_max: float = 60.0) -> WarpedManifold:
    def f(r):
        if r <= 1.0:
            return r
        if r <= 2.0:
            return _bump(r, 1.0, 1.0, 0.2)
        if r <= 3.0:
            return r - 1.0
        if r <= 4.0:
            return _bump(r, 3.0, 2.0, 0.5)
        return r - 2.0

    def df(r):
        if r <= 1.0:
            return 1.0
        if r <= 2.0:
            return 0.2 * math.pi * math.sin(2.0 * math.pi * (r - 1.0))
        if r <= 3.0:
            return 1.0
        if r <= 4.0:
            return 0.5 * math.pi * math.sin(2.0 * math.pi * (r - 3.0))
        return 1.0

    return WarpedManifold.from_function(
        n, f, r_max, df=df, name="two_dips",
        breakpoints=(1.0, 1.5, 2.0, 3.0, 3.5, 4.0))


def below_dip(n: int = 3, r_max: float = 60.0) -> WarpedManifold:
    def f(r):
        if r <= 1.0:
            return r
        if r <= 2.0:
            return _bump(r, 1.0, 1.0, -0.2)
        return r - 1.0

    def df(r):
        if r <= 1.0:
            return 1.0
        if r <= 2.0:
            return -0.2 * math.pi * math.sin(2.0 * math.pi * (r - 1.0))
        return 1.0

    return WarpedManifold.from_function(
        n, f, r_max, df=df, name="below_dip", breakpoints=(1.0, 1.5, 2.0))


CLI_MODELS = {
    "euclidean": euclidean,
    "cylinder": cylinder,
    "log_cylinder": log_cylinder,
    "dip": dip,
    "two_dips": two_dips,
}


def named_model(name: str, n: int = 3, r_max: float | None = None,
                **kwargs) -> WarpedManifold:
    """Build a registry model by name, with optional dimension/extent override."""
    try:
        factory = CLI_MODELS[name]
    except KeyError:
        raise ConfigError(
            f"unknown model {name!r}; available: {sorted(CLI_MODELS)}") from None
    if r_max is not None:
        kwargs["r_max"] = r_max
    return factory(n=n, **kwargs)
