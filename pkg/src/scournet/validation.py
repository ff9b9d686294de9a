"""Input validation helpers for array-facing entry points."""

import numpy as np

from .errors import ShapeError, ValidationError


def check_feature_matrix(X, expected_width: int | None = None, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-d float64 matrix, optionally pinning the width."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ShapeError(f"{name} must be 2-d (samples x features), got shape {X.shape}")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise ShapeError(f"{name} needs at least one row and one column, got {X.shape}")
    if expected_width is not None and X.shape[1] != expected_width:
        raise ShapeError(f"{name} has {X.shape[1]} features, expected {expected_width}")
    if not np.isfinite(X).all():
        raise ValidationError(f"{name} contains non-finite values")
    return X


def check_target_vector(y, n_rows: int | None = None, name: str = "y") -> np.ndarray:
    """Coerce to a finite 1-d float64 vector, optionally pinning the length."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 2 and y.shape[1] == 1:
        y = y.ravel()
    if y.ndim != 1:
        raise ShapeError(f"{name} must be 1-d, got shape {y.shape}")
    if y.shape[0] < 1:
        raise ShapeError(f"{name} must not be empty")
    if n_rows is not None and y.shape[0] != n_rows:
        raise ShapeError(f"{name} has {y.shape[0]} entries, expected {n_rows}")
    if not np.isfinite(y).all():
        raise ValidationError(f"{name} contains non-finite values")
    return y
