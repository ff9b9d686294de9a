"""Dense float64 matrix/vector helpers used by every other module.

Matrices are plain 2-d ``numpy.ndarray`` objects in row-major order
(batches stack as rows), vectors are 1-d arrays.  The functions here add
the shape discipline the rest of the library relies on: every operand is
validated and mismatches raise :class:`ShapeError` naming both shapes.
"""

import numpy as np

from .errors import ShapeError

Matrix = np.ndarray
Vector = np.ndarray


def as_matrix(values) -> Matrix:
    """Coerce to a 2-d float64 array with at least one row and column."""
    a = np.asarray(values, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got {a.ndim}-d shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"matrix must have at least one row and column, got {a.shape}")
    return a


def as_vector(values) -> Vector:
    """Coerce to a 1-d float64 array with at least one entry."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeError(f"expected a 1-d vector, got {v.ndim}-d shape {v.shape}")
    if v.shape[0] < 1:
        raise ShapeError("vector must have at least one entry")
    return v


def identity(n: int) -> Matrix:
    return np.eye(n, dtype=np.float64)


def matmul(a, b) -> Matrix:
    """Matrix product; requires a.cols == b.rows."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot multiply {a.shape} by {b.shape}: {a.shape[1]} columns vs {b.shape[0]} rows"
        )
    return a @ b


def transpose(a) -> Matrix:
    return as_matrix(a).T


_ELEMENTWISE = {
    "add": np.add,
    "sub": np.subtract,
    "hadamard": np.multiply,
}


def elementwise(op: str, a, b) -> Matrix:
    """Apply ``add``, ``sub`` or ``hadamard`` to equal-shaped matrices."""
    if op not in _ELEMENTWISE:
        raise ValueError(f"unknown elementwise op {op!r}, expected one of {sorted(_ELEMENTWISE)}")
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"elementwise {op} needs equal shapes, got {a.shape} and {b.shape}")
    return _ELEMENTWISE[op](a, b)
