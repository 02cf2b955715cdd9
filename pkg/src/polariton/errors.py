"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`PolaritonError`, so callers (and the CLI) can separate solver
failures from programming errors.
"""


class PolaritonError(Exception):
    """Base class for all package errors."""


class MediumError(PolaritonError, ValueError):
    """A medium violates its construction invariants."""


class DegenerateMedium(MediumError):
    """Two effective poles coincide, or the local-field map is singular."""


class MediumParseError(MediumError):
    """A medium description file could not be parsed."""


class SolverError(PolaritonError):
    """Base class for numerical failures."""


class PoleHit(SolverError):
    """Evaluation requested exactly at a pole of the permittivity."""


class BracketFailure(SolverError):
    """An expected sign change is missing from a root bracket."""


class NonConvergence(SolverError):
    """Iteration limit reached before the tolerance was met."""


class DegeneratePoint(SolverError):
    """The frequency derivative of the dispersion relation vanishes."""


class ComplexRoots(SolverError):
    """A polynomial expected to have real roots produced complex ones."""


class InStopBand(SolverError):
    """The requested frequency has no propagating mode."""


class GridTooCoarse(SolverError):
    """The k-grid does not resolve the broadened resonance window."""
