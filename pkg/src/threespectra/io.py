"""JSON file formats.

Matrix::

    {"b": [...], "a": [...]}

Spectra::

    {"N": 3, "site": 2, "lambda": [...],
     "mu": [{"value": 0.0, "sigma": 0.0}, {"value": 0.0, "sigma": 0.0}]}

``mu`` is ascending and a shared eigenvalue is listed twice. Floats are
written in shortest round-trip form, keys in fixed order, so identical
inputs give byte-identical files. The extended spectra form adds
``"lambda_lo"`` and a per-entry ``"lo"`` carrying the double-double
low-order parts; readers accept both forms.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Any

from .core import JacobiMatrix, SignedEigenvalue, ThreeSpectra
from .errors import MalformedInput

__all__ = [
    "matrix_to_dict",
    "matrix_from_dict",
    "spectra_to_dict",
    "spectra_from_dict",
    "dumps",
    "read_json",
    "write_text",
]


def _floats(values) -> list[float]:
    return [float(x) for x in values]


def matrix_to_dict(J: JacobiMatrix) -> dict[str, Any]:
    return {"b": _floats(J.b), "a": _floats(J.a)}


def _number(v: Any, what: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise MalformedInput(f"{what} must be a finite number, got {v!r}")
    return float(v)


def _number_list(obj: dict, key: str) -> list[float]:
    if key not in obj:
        raise MalformedInput(f"missing key {key!r}")
    values = obj[key]
    if not isinstance(values, list):
        raise MalformedInput(f"{key!r} must be a list")
    return [_number(v, f"entries of {key!r}") for v in values]


def matrix_from_dict(obj: Any) -> JacobiMatrix:
    if not isinstance(obj, dict):
        raise MalformedInput("matrix file must hold a JSON object")
    return JacobiMatrix(_number_list(obj, "b"), _number_list(obj, "a"))


def spectra_to_dict(data: ThreeSpectra, extended: bool = False) -> dict[str, Any]:
    out: dict[str, Any] = {"N": data.N, "site": data.site, "lambda": _floats(data.lam)}
    if extended:
        out["lambda_lo"] = _floats(data.lam_lo)
    mu = []
    for m in data.mu:
        entry = {"value": m.value, "sigma": m.sigma}
        if extended:
            entry["lo"] = m.lo
        mu.append(entry)
    out["mu"] = mu
    return out


def _integer(obj: dict, key: str) -> int:
    if key not in obj:
        raise MalformedInput(f"missing key {key!r}")
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or int(v) != v:
        raise MalformedInput(f"{key!r} must be an integer, got {v!r}")
    return int(v)


def spectra_from_dict(obj: Any) -> ThreeSpectra:
    if not isinstance(obj, dict):
        raise MalformedInput("spectra file must hold a JSON object")
    N = _integer(obj, "N")
    site = _integer(obj, "site")
    lam = _number_list(obj, "lambda")
    lam_lo = _number_list(obj, "lambda_lo") if "lambda_lo" in obj else None
    raw_mu = obj.get("mu")
    if not isinstance(raw_mu, list):
        raise MalformedInput("'mu' must be a list of {value, sigma} objects")
    mu = []
    for entry in raw_mu:
        if not isinstance(entry, dict) or "value" not in entry or "sigma" not in entry:
            raise MalformedInput("'mu' entries must be objects with 'value' and 'sigma'")
        mu.append(
            SignedEigenvalue(
                _number(entry["value"], "mu value"),
                _number(entry["sigma"], "mu sigma"),
                _number(entry.get("lo", 0.0), "mu lo"),
            )
        )
    return ThreeSpectra(N, site, lam, tuple(mu), lam_lo)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def read_json(path: str) -> Any:
    """Parse JSON from ``path``; ``-`` reads standard input."""
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def write_text(text: str, path: str | None) -> None:
    """Write to ``path``, or standard output when it is ``None`` or ``-``."""
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
