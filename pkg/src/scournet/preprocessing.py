"""Feature and target standardization.

Centers and scales are fit on training data only.  Scaling uses the
sample (n-1) standard deviation; degenerate columns (constant, or a
single row) keep scale 1 so the transform stays invertible.
"""

import numpy as np

from .errors import ShapeError
from .validation import check_feature_matrix, check_target_vector


class Standardizer:
    """Column-wise z-scoring of the inputs and the regression target.

    Transformer-style API: ``fit(X, y)`` then ``transform``/``transform_target``
    map into standardized space and the ``inverse_*`` methods map back
    exactly (round trips are identity to floating-point resolution).
    """

    def __init__(self):
        self.feature_center_ = None
        self.feature_scale_ = None
        self.target_center_ = None
        self.target_scale_ = None

    @property
    def is_fitted(self) -> bool:
        return self.feature_center_ is not None

    def fit(self, X, y) -> "Standardizer":
        X = check_feature_matrix(X, name="X")
        y = check_target_vector(y, n_rows=X.shape[0], name="y")
        self.feature_center_ = X.mean(axis=0)
        self.feature_scale_ = _safe_scale(X)
        self.target_center_ = float(y.mean())
        self.target_scale_ = float(_safe_scale(y.reshape(-1, 1))[0])
        return self

    def _require_fitted(self):
        if not self.is_fitted:
            raise ValueError("standardizer is not fitted; call fit(X, y) first")

    def transform(self, X) -> np.ndarray:
        self._require_fitted()
        X = check_feature_matrix(X, expected_width=self.feature_center_.shape[0], name="X")
        return (X - self.feature_center_) / self.feature_scale_

    def inverse_transform(self, X_std) -> np.ndarray:
        self._require_fitted()
        X_std = np.asarray(X_std, dtype=np.float64)
        if X_std.ndim != 2 or X_std.shape[1] != self.feature_center_.shape[0]:
            raise ShapeError(f"expected (n, {self.feature_center_.shape[0]}) matrix, "
                             f"got {X_std.shape}")
        return X_std * self.feature_scale_ + self.feature_center_

    def transform_target(self, y) -> np.ndarray:
        self._require_fitted()
        y = np.asarray(y, dtype=np.float64)
        return (y - self.target_center_) / self.target_scale_

    def inverse_transform_target(self, y_std) -> np.ndarray:
        self._require_fitted()
        y_std = np.asarray(y_std, dtype=np.float64)
        return y_std * self.target_scale_ + self.target_center_


def _safe_scale(X: np.ndarray) -> np.ndarray:
    # sample std; constant columns and single rows fall back to scale 1
    if X.shape[0] < 2:
        return np.ones(X.shape[1], dtype=np.float64)
    std = X.std(axis=0, ddof=1)
    return np.where(std > 0.0, std, 1.0)
