"""Domain types, validation of three-spectra data, and the product form of
the diagonal resolvent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateMeasure, MalformedInput, PoleError, SiteOutOfRange

__all__ = [
    "JacobiMatrix",
    "SignedEigenvalue",
    "ThreeSpectra",
    "DiscreteMeasure",
    "Violation",
    "ValidationReport",
    "validate_three_spectra",
    "g_product_form",
    "canonicalize",
    "equal_runs",
    "signed_log_product",
]


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise MalformedInput(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Real symmetric tridiagonal matrix with diagonal ``b`` and positive
    off-diagonal ``a`` (``len(a) == len(b) - 1``)."""

    b: np.ndarray
    a: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        b = _frozen_array(self.b, "b")
        a = _frozen_array(self.a, "a")
        if b.size < 1:
            raise MalformedInput("a Jacobi matrix needs at least one diagonal entry")
        if a.size != b.size - 1:
            raise MalformedInput(f"expected {b.size - 1} off-diagonal entries, got {a.size}")
        if np.any(a <= 0):
            raise MalformedInput("off-diagonal entries must be strictly positive")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def N(self) -> int:
        return self.b.size

    def to_dense(self) -> np.ndarray:
        return np.diag(self.b) + np.diag(self.a, 1) + np.diag(self.a, -1)

    def norm_inf(self) -> float:
        """Maximum absolute row sum."""
        rows = np.abs(self.b).copy()
        rows[:-1] += self.a
        rows[1:] += self.a
        return float(rows.max())

    def __eq__(self, other):
        if not isinstance(other, JacobiMatrix):
            return NotImplemented
        return np.array_equal(self.b, other.b) and np.array_equal(self.a, other.a)

    def __repr__(self):
        return f"JacobiMatrix(b={self.b.tolist()}, a={self.a.tolist()})"


@dataclass(frozen=True)
class SignedEigenvalue:
    """One interior eigenvalue with its sign datum.

    ``sigma`` is -1 for an eigenvalue of the left block only, +1 for the
    right block only, and lies strictly between for an eigenvalue shared by
    both blocks (then it encodes how the residue splits between sides).
    ``lo`` is an optional low-order correction: the eigenvalue is
    ``value + lo`` in double-double arithmetic.
    """

    value: float
    sigma: float
    lo: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "lo", float(self.lo))
        if not all(math.isfinite(x) for x in (self.value, self.sigma, self.lo)):
            raise MalformedInput("value, sigma and lo must be finite")


@dataclass(frozen=True, eq=False)
class ThreeSpectra:
    """Spectral data of a Jacobi matrix cut at ``site``.

    ``lam_lo`` holds optional low-order corrections to ``lam`` (zeros when
    absent), mirroring :attr:`SignedEigenvalue.lo`. Only structural facts
    (sizes, site range, finiteness) are enforced here; ordering and
    interlacing are the business of :func:`validate_three_spectra`.
    """

    N: int
    site: int
    lam: np.ndarray
    mu: tuple[SignedEigenvalue, ...]
    lam_lo: np.ndarray | None = None

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise MalformedInput(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if isinstance(self.site, bool) or int(self.site) != self.site:
            raise MalformedInput(f"site must be an integer, got {self.site!r}")
        object.__setattr__(self, "site", int(self.site))
        if not 1 <= self.site <= self.N:
            raise SiteOutOfRange(f"site {self.site} outside 1..{self.N}")
        lam = _frozen_array(self.lam, "lambda")
        if lam.size != self.N:
            raise MalformedInput(f"expected {self.N} eigenvalues, got {lam.size}")
        lam_lo = _frozen_array(np.zeros(self.N) if self.lam_lo is None else self.lam_lo, "lambda lo")
        if lam_lo.size != self.N:
            raise MalformedInput("lam_lo must match lam in length")
        mu = tuple(m if isinstance(m, SignedEigenvalue) else SignedEigenvalue(*m) for m in self.mu)
        if len(mu) != self.N - 1:
            raise MalformedInput(f"expected {self.N - 1} interior eigenvalues, got {len(mu)}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "lam_lo", lam_lo)
        object.__setattr__(self, "mu", mu)

    @property
    def mu_values(self) -> np.ndarray:
        return np.array([m.value for m in self.mu], dtype=float)

    @property
    def mu_lo(self) -> np.ndarray:
        return np.array([m.lo for m in self.mu], dtype=float)

    @property
    def sigmas(self) -> np.ndarray:
        return np.array([m.sigma for m in self.mu], dtype=float)

    def rounded(self) -> "ThreeSpectra":
        """Copy with the low-order parts folded into plain doubles."""
        mu = tuple(SignedEigenvalue(m.value + m.lo, m.sigma) for m in self.mu)
        return ThreeSpectra(self.N, self.site, self.lam + self.lam_lo, mu)

    def __eq__(self, other):
        if not isinstance(other, ThreeSpectra):
            return NotImplemented
        return (
            self.N == other.N
            and self.site == other.site
            and np.array_equal(self.lam, other.lam)
            and np.array_equal(self.lam_lo, other.lam_lo)
            and self.mu == other.mu
        )


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finitely supported probability measure; weights are renormalized."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float).reshape(-1)
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if nodes.size < 1 or nodes.size != weights.size:
            raise DegenerateMeasure("need equally many nodes and weights, at least one")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
            raise DegenerateMeasure("non-finite nodes or weights")
        if np.any(np.diff(nodes) <= 0):
            raise DegenerateMeasure("nodes must be strictly increasing")
        if np.any(weights <= 0):
            raise DegenerateMeasure("weights must be strictly positive")
        weights = weights / weights.sum()
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.size

    def stieltjes(self, z: float) -> float:
        """sum_i w_i / (x_i - z)"""
        return float(np.sum(self.weights / (self.nodes - z)))


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    indices: tuple[int, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def render(self) -> str:
        if self.ok:
            return "ok"
        lines = [f"{len(self.violations)} violation(s):"]
        for v in self.violations:
            where = f" at {list(v.indices)}" if v.indices else ""
            lines.append(f"  ({v.rule}) {v.message}{where}")
        return "\n".join(lines)


def equal_runs(values: Sequence[float]) -> list[tuple[int, int]]:
    """Maximal runs of exactly equal adjacent values as ``(start, length)``."""
    runs = []
    i = 0
    n = len(values)
    while i < n:
        j = i + 1
        while j < n and values[j] == values[i]:
            j += 1
        runs.append((i, j - i))
        i = j
    return runs


def signed_log_product(factors: Iterable[float] | np.ndarray) -> tuple[float, float]:
    """Return ``(sign, log|prod|)`` of the factors. An empty product is 1."""
    f = np.asarray(factors, dtype=float)
    if f.size == 0:
        return 1.0, 0.0
    if np.any(f == 0):
        return 0.0, -math.inf
    sign = -1.0 if np.count_nonzero(f < 0) % 2 else 1.0
    return sign, float(np.sum(np.log(np.abs(f))))


def canonicalize(data: ThreeSpectra) -> ThreeSpectra:
    """Sort eigenvalues ascending; interior ones by (value, sigma)."""
    mu = sorted(data.mu, key=lambda m: (m.value, m.lo, m.sigma))
    order = np.lexsort((data.lam_lo, data.lam))
    return ThreeSpectra(data.N, data.site, data.lam[order], tuple(mu), data.lam_lo[order])


def _pairs(hi: np.ndarray, lo: np.ndarray) -> list[tuple[float, float]]:
    # (hi, lo) tuples order like the double-double values they stand for
    return list(zip(hi.tolist(), lo.tolist()))


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def validate_three_spectra(data: ThreeSpectra, tol: float = 1e-8) -> ValidationReport:
    """Check interlacing and sign-data rules for ``data``.

    Rules (ids in the report):

    a  lambda strictly increasing
    b  lambda_1 < mu_1, mu_{N-1} < lambda_N, lambda_j <= mu_j <= lambda_{j+1}
    c  each mu value occurs at most twice
    d  a simple mu_j lies strictly inside (lambda_j, lambda_{j+1}), sigma_j = +-1
    e  a doubled mu_j = mu_{j+1} equals lambda_{j+1} (relative ``tol``) and
       carries the same sigma in (-1, 1) on both copies
    f  side counts agree with the site

    Doubled values are recognised by exact equality; they are written that
    way by the forward map and survive serialization.
    """
    out: list[Violation] = []
    lam = _pairs(data.lam, data.lam_lo)
    mu = _pairs(data.mu_values, data.mu_lo)
    sig = data.sigmas
    N, n = data.N, data.site

    bad = [j for j in range(N - 1) if not lam[j] < lam[j + 1]]
    if bad:
        out.append(Violation("a", "eigenvalues of H are not strictly increasing", tuple(bad)))

    runs = equal_runs(mu)
    doubled_first = {s for s, length in runs if length == 2}
    doubled_second = {s + 1 for s in doubled_first}

    if N > 1:
        if not lam[0] < mu[0]:
            out.append(Violation("b", "lambda_1 must lie strictly below mu_1", (0,)))
        if not mu[-1] < lam[-1]:
            out.append(Violation("b", "mu_{N-1} must lie strictly below lambda_N", (N - 2,)))
    bad = []
    for j in range(N - 1):
        # bounds touching the matched lambda of a doubled pair are rule (e)'s job
        low_ok = j in doubled_second or lam[j] <= mu[j]
        high_ok = j in doubled_first or mu[j] <= lam[j + 1]
        if not (low_ok and high_ok):
            bad.append(j)
    if bad:
        out.append(Violation("b", "interlacing lambda_j <= mu_j <= lambda_{j+1} fails", tuple(bad)))

    for start, length in runs:
        if length > 2:
            out.append(
                Violation("c", f"mu value {mu[start][0]!r} occurs {length} times",
                          tuple(range(start, start + length)))
            )

    n_minus = n_plus = 0
    sigma_bad = False
    for start, length in runs:
        if length == 1:
            j = start
            if not (lam[j] < mu[j] < lam[j + 1]):
                out.append(Violation("d", "simple mu_j must lie strictly between lambda_j and lambda_{j+1}", (j,)))
            if sig[j] == -1.0:
                n_minus += 1
            elif sig[j] == 1.0:
                n_plus += 1
            else:
                sigma_bad = True
                out.append(Violation("d", f"simple mu_j needs sigma in {{-1, +1}}, got {sig[j]!r}", (j,)))
        elif length == 2:
            j = start
            n_minus += 1
            n_plus += 1
            if not _close(lam[j + 1][0], mu[j][0], tol):
                out.append(Violation("e", "doubled mu_j = mu_{j+1} must equal lambda_{j+1}", (j, j + 1)))
            if sig[j] != sig[j + 1]:
                out.append(Violation("e", "doubled mu carries different sigma values", (j, j + 1)))
            elif not -1.0 < sig[j] < 1.0:
                out.append(Violation("e", f"doubled mu needs sigma in (-1, 1), got {sig[j]!r}", (j, j + 1)))

    # counts are meaningless once a sigma is unreadable or a value is tripled
    if not sigma_bad and all(length <= 2 for _, length in runs):
        if n_minus != n - 1 or n_plus != N - n:
            out.append(
                Violation("f", f"site {n} needs {n - 1} left and {N - n} right eigenvalues, "
                               f"got {n_minus} and {n_plus}")
            )
    return ValidationReport(tuple(out))


def _pole_tol(x: float) -> float:
    return 1e-12 * max(1.0, abs(x))


def g_product_form(data: ThreeSpectra, z: float) -> float:
    """Diagonal resolvent entry ``((H - z)^{-1})_{nn}`` from spectral data.

    Evaluates ``prod_j (mu_j - z) / prod_j (lambda_j - z)``; one factor of
    every doubled mu is cancelled against its matching lambda first.
    """
    lam = data.lam + data.lam_lo
    mu = data.mu_values + data.mu_lo
    keep_lam = np.ones(lam.size, dtype=bool)
    keep_mu = np.ones(mu.size, dtype=bool)
    for start, length in equal_runs(_pairs(data.mu_values, data.mu_lo)):
        if length == 2:
            keep_mu[start] = False
            keep_lam[start + 1] = False
    lam = lam[keep_lam]
    mu = mu[keep_mu]
    hits = [x for x in lam if abs(x - z) <= _pole_tol(x)]
    if hits:
        raise PoleError(f"z = {z!r} hits eigenvalue {hits[0]!r}")
    s_num, l_num = signed_log_product(mu - z)
    if s_num == 0.0:
        return 0.0
    s_den, l_den = signed_log_product(lam - z)
    return s_num * s_den * math.exp(l_num - l_den)
