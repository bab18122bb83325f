"""Forward and inverse maps between Jacobi matrices and their three spectra.

Cutting a Jacobi matrix at one site leaves two blocks. The eigenvalues of the
whole matrix, the merged eigenvalues of the blocks and one sign number per
block eigenvalue determine the matrix uniquely, and every admissible set of
such data comes from a Jacobi matrix.
"""

from .core import (
    DiscreteMeasure,
    JacobiMatrix,
    SignedEigenvalue,
    ThreeSpectra,
    ValidationReport,
    Violation,
    canonicalize,
    g_product_form,
    validate_three_spectra,
)
from .errors import (
    BreakdownError,
    DegenerateError,
    DegenerateMeasure,
    MalformedInput,
    NonPositiveResidue,
    PoleError,
    ReconstructionError,
    SiteOutOfRange,
    ThreeSpectraError,
    ValidationFailed,
)
from .forward import extract_three_spectra, split_at_site
from .inverse import InteriorBlock, herglotz_form, interior_coefficients, reconstruct
from .moment import measure_to_jacobi, reverse_jacobi
from .tridiag import Anchor, eigenvalues, refined_eigenvalues, spectral_measure, sturm_count

__version__ = "0.1.0"

__all__ = [
    "Anchor",
    "BreakdownError",
    "DegenerateError",
    "DegenerateMeasure",
    "DiscreteMeasure",
    "InteriorBlock",
    "JacobiMatrix",
    "MalformedInput",
    "NonPositiveResidue",
    "PoleError",
    "ReconstructionError",
    "SignedEigenvalue",
    "SiteOutOfRange",
    "ThreeSpectra",
    "ThreeSpectraError",
    "ValidationFailed",
    "ValidationReport",
    "Violation",
    "canonicalize",
    "eigenvalues",
    "extract_three_spectra",
    "g_product_form",
    "herglotz_form",
    "interior_coefficients",
    "measure_to_jacobi",
    "reconstruct",
    "refined_eigenvalues",
    "reverse_jacobi",
    "spectral_measure",
    "split_at_site",
    "sturm_count",
    "validate_three_spectra",
]
