"""Inverse map: three spectra with sign data -> the Jacobi matrix.

The residues at the interior eigenvalues give the two off-diagonal entries
adjacent to the cut and the spectral measures of both blocks; the diagonal
entry at the cut follows from the trace. Each block is then rebuilt from its
measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._dd import dd_residue, dd_sub, dd_sum
from .core import DiscreteMeasure, JacobiMatrix, ThreeSpectra, equal_runs, validate_three_spectra
from .errors import MalformedInput, NonPositiveResidue, ValidationFailed
from .moment import measure_to_jacobi
from .tridiag import Anchor

__all__ = ["InteriorBlock", "interior_coefficients", "reconstruct", "herglotz_form"]


@dataclass(frozen=True)
class InteriorBlock:
    """Coefficients at the cut plus the spectral measures of both blocks.

    ``measure_minus`` is anchored at the last row of the left block,
    ``measure_plus`` at the first row of the right block. A missing block has
    measure ``None`` and squared coupling 0.
    """

    a_minus_sq: float
    a_plus_sq: float
    b_n: float
    measure_minus: DiscreteMeasure | None
    measure_plus: DiscreteMeasure | None


def interior_coefficients(data: ThreeSpectra) -> InteriorBlock:
    """Residues, couplings and diagonal entry at the cut.

    For a simple interior eigenvalue ``mu_i`` the residue is
    ``beta_i = -prod_j (mu_i - lambda_j) / prod_{k != i} (mu_i - mu_k)``.
    A doubled value ``mu_j = mu_{j+1} = lambda_{j+1}`` has its common factors
    removed by index before the product is formed; the remaining residue
    ``gamma`` is split as ``(1 - sigma)/2`` to the left block and
    ``(1 + sigma)/2`` to the right one.

    Differences and products run in double-double arithmetic using the
    low-order parts carried by ``data``: residues of eigenvectors localized
    away from the cut hinge on gaps far below double resolution.

    Raises :class:`NonPositiveResidue` if any residue comes out <= 0.
    Assumes ``validate_three_spectra(data).ok``.
    """
    lam_h, lam_l = data.lam, data.lam_lo
    mu_h, mu_l = data.mu_values, data.mu_lo
    sig = data.sigmas
    N, n = data.N, data.site

    nodes_minus, beta_minus = [], []
    nodes_plus, beta_plus = [], []
    all_mu = np.arange(mu_h.size)
    all_lam = np.arange(lam_h.size)
    for start, length in equal_runs(list(zip(mu_h.tolist(), mu_l.tolist()))):
        xh, xl = mu_h[start], mu_l[start]
        node = xh + xl
        if length == 1:
            keep = all_mu != start
            beta = dd_residue(xh, xl, lam_h, lam_l, mu_h[keep], mu_l[keep])
            if not beta > 0:
                raise NonPositiveResidue(f"residue at mu_{start + 1} = {node!r} is {beta!r}")
            if sig[start] < 0:
                nodes_minus.append(node)
                beta_minus.append(beta)
            else:
                nodes_plus.append(node)
                beta_plus.append(beta)
        elif length == 2:
            keep_mu = (all_mu != start) & (all_mu != start + 1)
            keep_lam = all_lam != start + 1
            gamma = dd_residue(xh, xl, lam_h[keep_lam], lam_l[keep_lam], mu_h[keep_mu], mu_l[keep_mu])
            if not gamma > 0:
                raise NonPositiveResidue(f"combined residue at doubled mu = {node!r} is {gamma!r}")
            s = sig[start]
            bm, bp = 0.5 * (1 - s) * gamma, 0.5 * (1 + s) * gamma
            if not (bm > 0 and bp > 0):
                raise NonPositiveResidue(f"split of doubled residue at mu = {node!r} is not positive")
            nodes_minus.append(node)
            beta_minus.append(bm)
            nodes_plus.append(node)
            beta_plus.append(bp)
        else:
            raise MalformedInput(f"mu value {node!r} occurs {length} times")

    if len(nodes_minus) != n - 1 or len(nodes_plus) != N - n:
        raise MalformedInput("side counts do not match the site; validate the data first")

    a_minus_sq = float(np.sum(beta_minus)) if beta_minus else 0.0
    a_plus_sq = float(np.sum(beta_plus)) if beta_plus else 0.0
    measure_minus = DiscreteMeasure(nodes_minus, np.array(beta_minus) / a_minus_sq) if beta_minus else None
    measure_plus = DiscreteMeasure(nodes_plus, np.array(beta_plus) / a_plus_sq) if beta_plus else None
    # trace formula, summed in double-double
    th, tl = dd_sum(lam_h, lam_l)
    mh, ml = dd_sum(mu_h, mu_l)
    bh, bl = dd_sub(th, tl, mh, ml)
    return InteriorBlock(a_minus_sq, a_plus_sq, bh + bl, measure_minus, measure_plus)


def herglotz_form(block: InteriorBlock, z: float) -> float:
    """``z - b_n - a_n^2 sum w+/(z - x+) - a_{n-1}^2 sum w-/(z - x-)``,
    which equals ``prod(z - lambda) / prod(z - mu)``."""
    total = z - block.b_n
    if block.measure_plus is not None:
        m = block.measure_plus
        total -= block.a_plus_sq * np.sum(m.weights / (z - m.nodes))
    if block.measure_minus is not None:
        m = block.measure_minus
        total -= block.a_minus_sq * np.sum(m.weights / (z - m.nodes))
    return float(total)


def reconstruct(data: ThreeSpectra, check: bool = True, tol: float = 1e-8) -> JacobiMatrix:
    """The unique Jacobi matrix with spectral data ``data``.

    With ``check`` (default) the data are validated first and a
    :class:`ValidationFailed` carrying the report is raised on failure.
    """
    if check:
        report = validate_three_spectra(data, tol)
        if not report.ok:
            raise ValidationFailed(report)
    block = interior_coefficients(data)
    n = data.site
    b = np.empty(data.N)
    a = np.empty(data.N - 1)
    b[n - 1] = block.b_n
    if block.measure_minus is not None:
        left = measure_to_jacobi(block.measure_minus, Anchor.LAST)
        b[: n - 1] = left.b
        a[: n - 2] = left.a
        a[n - 2] = math.sqrt(block.a_minus_sq)
    if block.measure_plus is not None:
        right = measure_to_jacobi(block.measure_plus, Anchor.FIRST)
        b[n:] = right.b
        a[n:] = right.a
        a[n - 1] = math.sqrt(block.a_plus_sq)
    return JacobiMatrix(b, a)
