"""Input validation helpers.

All public entry points funnel array-likes through these so that shape and
finiteness failures raise :class:`DegenerateInput` with a usable message
instead of surfacing as numpy broadcasting accidents.
"""
from __future__ import annotations

import numpy as np

from .exceptions import DegenerateInput


def as_complex_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array with finite entries."""
    try:
        M = np.asarray(A, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise DegenerateInput(f"{name}: cannot interpret as a complex matrix: {exc}") from None
    if M.ndim != 2:
        raise DegenerateInput(f"{name}: expected 2-D array, got ndim={M.ndim}")
    if M.size and not (np.all(np.isfinite(M.real)) and np.all(np.isfinite(M.imag))):
        raise DegenerateInput(f"{name}: entries must be finite (no NaN/Inf)")
    return M


def as_square_matrix(A, name: str = "matrix") -> np.ndarray:
    M = as_complex_matrix(A, name)
    if M.shape[0] != M.shape[1]:
        raise DegenerateInput(f"{name}: expected square matrix, got shape {M.shape}")
    if M.shape[0] == 0:
        raise DegenerateInput(f"{name}: empty matrix")
    return M


def as_complex_vector(b, length: int | None = None, name: str = "vector") -> np.ndarray:
    try:
        v = np.asarray(b, dtype=complex).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise DegenerateInput(f"{name}: cannot interpret as a complex vector: {exc}") from None
    if v.size and not (np.all(np.isfinite(v.real)) and np.all(np.isfinite(v.imag))):
        raise DegenerateInput(f"{name}: entries must be finite")
    if length is not None and v.size != length:
        raise DegenerateInput(f"{name}: expected length {length}, got {v.size}")
    return v


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise DegenerateInput(f"{name} must be a positive finite number, got {value}")
    return value


def check_sites(omega, d: int) -> list[int]:
    """Validate a 0-based site index collection against dimension d."""
    sites = [int(i) for i in omega]
    if not sites:
        raise DegenerateInput("site set must be nonempty")
    if len(set(sites)) != len(sites):
        raise DegenerateInput(f"site indices must be distinct, got {sites}")
    for i in sites:
        if not 0 <= i < d:
            raise DegenerateInput(f"site index {i} out of range for dimension {d}")
    return sites
