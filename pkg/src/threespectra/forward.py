"""Forward map: Jacobi matrix and site -> three spectra with sign data."""

from __future__ import annotations

from ._dd import dd_add
from .core import JacobiMatrix, SignedEigenvalue, ThreeSpectra
from .errors import SiteOutOfRange
from .tridiag import Anchor, refined_eigenvalues, spectral_measure

__all__ = ["split_at_site", "extract_three_spectra", "DEFAULT_MERGE_TOL"]

DEFAULT_MERGE_TOL = 1e-8


def split_at_site(J: JacobiMatrix, n: int) -> tuple[JacobiMatrix | None, JacobiMatrix | None]:
    """Delete row and column ``n`` (1-based). Returns ``(left, right)``; a
    side is ``None`` when it has no rows."""
    N = J.N
    if not 1 <= n <= N:
        raise SiteOutOfRange(f"site {n} outside 1..{N}")
    left = JacobiMatrix(J.b[: n - 1], J.a[: n - 2]) if n > 1 else None
    right = JacobiMatrix(J.b[n:], J.a[n:]) if n < N else None
    return left, right


def _mean(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    hi, lo = dd_add(x[0], x[1], y[0], y[1])
    return dd_add(0.5 * hi, 0.5 * lo, 0.0, 0.0)


def _merge(minus, plus, merge_tol: float):
    """Walk both sorted lists of ``(hi, lo)`` eigenvalues; returns entries
    ``(value, side, k_minus, k_plus)`` with side -1, +1 or 0 (shared)."""
    out = []
    i = j = 0
    while i < len(minus) or j < len(plus):
        take_minus = j == len(plus) or (i < len(minus) and minus[i] <= plus[j])
        if i < len(minus) and j < len(plus):
            x, y = minus[i][0], plus[j][0]
            if abs(x - y) <= merge_tol * max(1.0, abs(x), abs(y)):
                out.append((_mean(minus[i], plus[j]), 0, i, j))
                i += 1
                j += 1
                continue
        if take_minus:
            out.append((minus[i], -1, i, None))
            i += 1
        else:
            out.append((plus[j], 1, None, j))
            j += 1
    return out


def _spectrum(J: JacobiMatrix | None, tol: float) -> list[tuple[float, float]]:
    if J is None:
        return []
    hi, lo = refined_eigenvalues(J, tol)
    return list(zip(hi.tolist(), lo.tolist()))


def extract_three_spectra(
    J: JacobiMatrix, n: int, merge_tol: float = DEFAULT_MERGE_TOL, eig_tol: float = 1e-13
) -> ThreeSpectra:
    """Spectral data of ``J`` cut at site ``n``.

    Eigenvalues are computed to double-double accuracy and returned with
    their low-order parts. Eigenvalues of the two blocks closer than
    ``merge_tol`` (relative, floor 1) are treated as one shared eigenvalue:
    both copies get their mean and the sign datum becomes the normalized difference of the two residues,
    ``(a_n^2 w_plus - a_{n-1}^2 w_minus) / (a_n^2 w_plus + a_{n-1}^2 w_minus)``.
    """
    if merge_tol < 0:
        raise ValueError("merge_tol must be non-negative")
    left, right = split_at_site(J, n)
    lam, lam_lo = refined_eigenvalues(J, eig_tol)
    merged = _merge(_spectrum(left, eig_tol), _spectrum(right, eig_tol), merge_tol)

    if any(side == 0 for _, side, _, _ in merged):
        # residues are only needed for shared eigenvalues
        w_minus = spectral_measure(left, Anchor.LAST, eig_tol).weights
        w_plus = spectral_measure(right, Anchor.FIRST, eig_tol).weights
        a_minus_sq = J.a[n - 2] ** 2
        a_plus_sq = J.a[n - 1] ** 2

    mu = []
    for value, side, k, l in merged:
        if side == 0:
            r_minus = a_minus_sq * w_minus[k]
            r_plus = a_plus_sq * w_plus[l]
            sigma = (r_plus - r_minus) / (r_plus + r_minus)
            mu.append(SignedEigenvalue(value[0], sigma, value[1]))
            mu.append(SignedEigenvalue(value[0], sigma, value[1]))
        else:
            mu.append(SignedEigenvalue(value[0], float(side), value[1]))
    return ThreeSpectra(J.N, n, lam, tuple(mu), lam_lo)
