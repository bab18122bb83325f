"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`ThreeSpectraError`, so callers can catch the whole family at once.
"""


class ThreeSpectraError(Exception):
    """Base class for all package errors."""


class MalformedInput(ThreeSpectraError, ValueError):
    """Structurally invalid input (wrong lengths, non-finite entries, a_k <= 0)."""


class SiteOutOfRange(ThreeSpectraError, IndexError):
    """Site index n outside 1..N."""


class PoleError(ThreeSpectraError, ZeroDivisionError):
    """Evaluation point collides with an eigenvalue of the full matrix."""


class DegenerateError(ThreeSpectraError, ArithmeticError):
    """Computed eigenvalues coincide or a spectral weight underflows."""


class DegenerateMeasure(DegenerateError, ValueError):
    """Measure with repeated nodes or non-positive weights."""


class ReconstructionError(ThreeSpectraError, ArithmeticError):
    """Data passed validation but could not be turned into a Jacobi matrix."""


class NonPositiveResidue(ReconstructionError):
    """A residue (beta or gamma) came out <= 0."""


class BreakdownError(ReconstructionError):
    """Lanczos recurrence norm fell below the breakdown threshold."""


class ValidationFailed(MalformedInput):
    """Spectral data violate interlacing or sign rules; ``report`` has details."""

    def __init__(self, report):
        super().__init__(report.render())
        self.report = report
