"""Exception types raised by the imcflow library.

All domain failures derive from :class:`ImcflowError` so callers can catch
one base class at pipeline boundaries.  The CLI maps these onto exit codes.
"""


class ImcflowError(Exception):
    """Base class for all imcflow domain errors."""


class ConfigError(ImcflowError):
    """Invalid configuration, malformed input file, or bad argument combination."""


class NonDegeneracyExceeded(ImcflowError):
    """An area threshold reaches or exceeds the profile's tail infimum surrogate."""


class IntegralDiverges(ImcflowError):
    """The reciprocal profile integral has a divergent head (fitted exponent >= 1)."""


class NotPrecompact(ImcflowError):
    """A queried sublevel set is not precompact (time at or beyond the horizon,
    or the set escapes the represented radius window)."""


class PlateauRegion(ImcflowError):
    """A pointwise gradient query landed inside a plateau of the arrival function.

    Carries ``start`` and ``stop`` radii of the plateau when known.
    """

    def __init__(self, msg, start=None, stop=None):
        super().__init__(msg)
        self.start = start
        self.stop = stop


class NoPrecompactHull(ImcflowError):
    """No precompact strictly outward minimizing envelope exists
    (the warp's tail infimum does not exceed the base sphere level)."""


class ContainmentViolated(ImcflowError):
    """A computed region escapes the radius bound it was required to satisfy."""


class InfeasibleObstacles(ImcflowError):
    """Obstacle pair does not satisfy inner smaller-or-equal outer on every cell."""


class CurvatureKink(ImcflowError):
    """Mean curvature queried at a kink of a sampled warp.

    The two one-sided values are carried as ``left`` and ``right``.
    """

    def __init__(self, msg, left, right):
        super().__init__(msg)
        self.left = left
        self.right = right


class ConeConstructionError(ImcflowError):
    """The conic blend constant search failed (cap exceeded or bad collar)."""
