"""Regression evaluation: correlation coefficient, RMSE and MAE.

All three compare observed and predicted scour in meters.  Correlation
is the Pearson product-moment coefficient; asking for it on a constant
vector is an error rather than a silent NaN.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError, UndefinedCorrelationError


@dataclass(frozen=True)
class MetricsReport:
    cc: float       # Pearson correlation, in [-1, 1]
    rmse: float     # meters
    mae: float      # meters
    n: int

    def to_dict(self) -> dict:
        return {"cc": self.cc, "rmse_m": self.rmse, "mae_m": self.mae, "n": self.n}


def _paired(actual, predicted, min_n: int = 1):
    a = np.asarray(actual, dtype=np.float64).ravel()
    p = np.asarray(predicted, dtype=np.float64).ravel()
    if a.shape != p.shape:
        raise ShapeError(f"actual has {a.shape[0]} entries, predicted has {p.shape[0]}")
    if a.shape[0] < min_n:
        raise DomainError(f"need at least {min_n} pairs, got {a.shape[0]}")
    return a, p


def rmse(actual, predicted) -> float:
    """Root mean square error, sqrt(mean((a - p)^2))."""
    a, p = _paired(actual, predicted)
    d = a - p
    return float(np.sqrt(np.mean(d * d)))


def mae(actual, predicted) -> float:
    """Mean absolute error."""
    a, p = _paired(actual, predicted)
    return float(np.mean(np.abs(a - p)))


def correlation(actual, predicted) -> float:
    """Pearson product-moment correlation; constant vectors are an error."""
    a, p = _paired(actual, predicted, min_n=2)
    da = a - a.mean()
    dp = p - p.mean()
    ssa = float(da @ da)
    ssp = float(dp @ dp)
    if ssa == 0.0 or ssp == 0.0:
        which = "actual" if ssa == 0.0 else "predicted"
        raise UndefinedCorrelationError(
            f"correlation undefined: {which} vector is constant (zero variance)"
        )
    r = float(da @ dp) / np.sqrt(ssa * ssp)
    return float(min(1.0, max(-1.0, r)))


def report(actual, predicted) -> MetricsReport:
    """All three measures plus the pair count."""
    a, p = _paired(actual, predicted, min_n=2)
    return MetricsReport(cc=correlation(a, p), rmse=rmse(a, p), mae=mae(a, p), n=a.shape[0])
