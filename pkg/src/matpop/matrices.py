"""Input validation for the dense nonnegative matrices and vectors the models use."""

from __future__ import annotations

import numpy as np

from .errors import ModelError


def as_matrix(values, *, name: str = "matrix") -> np.ndarray:
    """Coerce to a read-only square float64 array with finite entries >= 0.

    Raises ModelError when the input is ragged, non-square, empty, or has
    negative or non-finite entries.
    """
    try:
        m = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"{name} is not a rectangular array of numbers: {exc}") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ModelError(f"{name} must be square and nonempty, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ModelError(f"{name} has non-finite entries")
    if (m < 0).any():
        raise ModelError(f"{name} has negative entries")
    m.setflags(write=False)
    return m


def as_population_vector(values, n: int, *, name: str = "population vector") -> np.ndarray:
    """Coerce to a read-only length-n float64 vector that is >= 0 and not all zero."""
    try:
        v = np.array(values, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelError(f"{name} is not a vector of numbers: {exc}") from None
    if v.ndim != 1 or v.shape[0] != n:
        raise ModelError(f"{name} must have length {n}, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ModelError(f"{name} has non-finite entries")
    if (v < 0).any():
        raise ModelError(f"{name} has negative entries")
    if not (v > 0).any():
        raise ModelError(f"{name} is zero")
    v.setflags(write=False)
    return v
