"""Jacobi matrix of a discrete measure (the finite moment problem).

Lanczos on ``diag(nodes)`` started from ``sqrt(weights)`` produces exactly
the recurrence coefficients of the orthonormal polynomials of the measure,
i.e. the unique Jacobi matrix whose first-anchored spectral measure it is.
"""

from __future__ import annotations

import numpy as np

from .core import DiscreteMeasure, JacobiMatrix
from .errors import BreakdownError, DegenerateMeasure
from .tridiag import Anchor

__all__ = ["measure_to_jacobi", "reverse_jacobi", "BREAKDOWN_RTOL"]

BREAKDOWN_RTOL = 1e-12


def reverse_jacobi(J: JacobiMatrix) -> JacobiMatrix:
    """Flip the index order; swaps first and last anchors."""
    return JacobiMatrix(J.b[::-1], J.a[::-1])


def _lanczos(nodes: np.ndarray, weights: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = nodes.size
    # run on nodes mapped into [-1/2, 1/2] so tiny or huge spreads neither
    # underflow nor overflow; the recurrence is affine-equivariant
    spread = nodes[-1] - nodes[0]
    center = 0.5 * (nodes[0] + nodes[-1])
    scale = spread if spread > 0 else 1.0
    nodes = (nodes - center) / scale
    Q = np.zeros((m, m))
    diag = np.empty(m)
    off = np.empty(m - 1)
    Q[:, 0] = np.sqrt(weights)
    Q[:, 0] /= np.linalg.norm(Q[:, 0])
    for k in range(m):
        q = Q[:, k]
        v = nodes * q
        diag[k] = q @ v
        if k == m - 1:
            break
        v -= diag[k] * q
        if k > 0:
            v -= off[k - 1] * Q[:, k - 1]
        basis = Q[:, : k + 1]
        # twice is enough (Kahan-Parlett)
        for _ in range(2):
            v -= basis @ (basis.T @ v)
        beta = np.linalg.norm(v)
        if not beta > BREAKDOWN_RTOL:
            raise BreakdownError(
                f"Lanczos breakdown at step {k + 1}: relative norm {beta:.3e} below {BREAKDOWN_RTOL:g}"
            )
        off[k] = beta
        Q[:, k + 1] = v / beta
    return diag * scale + center, off * scale


def measure_to_jacobi(m: DiscreteMeasure, anchor: Anchor = Anchor.FIRST) -> JacobiMatrix:
    """Unique Jacobi matrix whose ``anchor`` spectral measure is ``m``."""
    if not isinstance(m, DiscreteMeasure):
        raise TypeError("expected a DiscreteMeasure")
    nodes = np.asarray(m.nodes, dtype=float)
    weights = np.asarray(m.weights, dtype=float)
    if np.any(np.diff(nodes) <= 0) or np.any(weights <= 0):
        raise DegenerateMeasure("nodes must be distinct and weights positive")
    diag, off = _lanczos(nodes, weights)
    J = JacobiMatrix(diag, off)
    if Anchor(anchor) is Anchor.LAST:
        J = reverse_jacobi(J)
    return J
