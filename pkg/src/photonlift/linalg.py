"""Small dense-matrix checks shared by the other modules."""

from __future__ import annotations

import numpy as np

from .errors import ShapeError, ValidationError

UNITARY_ATOL = 1e-9


def unitarity_error(a) -> float:
    """Max-norm of ``a^dagger a - I``."""
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])), initial=0.0))


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


def require_unitary(a, atol: float = UNITARY_ATOL, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a complex array, raising ``ValidationError`` unless unitary within ``atol``."""
    a = as_square_matrix(a, name)
    err = unitarity_error(a)
    if err > atol:
        raise ValidationError(f"{name} is not unitary: max|A^dagger A - I| = {err:.3e} > {atol:.1e}")
    return a
