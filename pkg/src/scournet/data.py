"""Scour measurement records: CSV ingestion, splitting, summary statistics
and a statistics-matched synthetic generator.

The on-disk schema is a UTF-8 CSV with the exact header

    ps,pw,skew,v,h,d50,sigma,scour

Units: pw, h and scour in meters; v in meters/second; d50 in millimeters;
skew in degrees; ps and sigma dimensionless.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ParseError, SchemaError, ValidationError

FEATURE_NAMES = ("ps", "pw", "skew", "v", "h", "d50", "sigma")
TARGET_NAME = "scour"
COLUMNS = FEATURE_NAMES + (TARGET_NAME,)


@dataclass(frozen=True)
class ScourRecord:
    """One field measurement: seven hydraulic features plus observed scour depth."""

    ps: float      # pier shape factor, dimensionless, [0.7, 1.3]
    pw: float      # pier width, m
    skew: float    # pier skew to approach flow, degrees
    v: float       # flow velocity, m/s
    h: float       # flow depth, m
    d50: float     # median grain size, mm
    sigma: float   # gradation of bed material, dimensionless
    scour: float   # observed scour depth, m

    def violations(self) -> list[str]:
        """Return the invariant constraints this record breaks (empty if valid)."""
        bad = []
        for name in COLUMNS:
            if not math.isfinite(getattr(self, name)):
                bad.append(f"{name} finite")
        if bad:
            return bad
        if not 0.7 <= self.ps <= 1.3:
            bad.append("ps in [0.7, 1.3]")
        if not self.pw > 0:
            bad.append("pw > 0")
        if not 0 <= self.skew <= 90:
            bad.append("skew in [0, 90]")
        if not self.v >= 0:
            bad.append("v >= 0")
        if not self.h >= 0:
            bad.append("h >= 0")
        if not self.d50 > 0:
            bad.append("d50 > 0")
        if not self.sigma >= 1:
            bad.append("sigma >= 1")
        if not self.scour >= 0:
            bad.append("scour >= 0")
        return bad

    def values(self) -> tuple:
        return tuple(getattr(self, name) for name in COLUMNS)


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of scour records."""

    records: tuple
    provenance: str = "file"      # "file" or "synthetic"
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise ValidationError("empty dataset")
        if self.provenance not in ("file", "synthetic"):
            raise ValidationError(f"unknown provenance {self.provenance!r}")

    def __len__(self) -> int:
        return len(self.records)

    def features(self) -> np.ndarray:
        """All records as a (n, 7) float64 matrix in schema column order."""
        return np.array([[getattr(r, n) for n in FEATURE_NAMES] for r in self.records],
                        dtype=np.float64)

    def targets(self) -> np.ndarray:
        """Observed scour depths in meters, shape (n,)."""
        return np.array([r.scour for r in self.records], dtype=np.float64)


@dataclass(frozen=True)
class ColumnStats:
    name: str
    min: float
    max: float
    mean: float
    std: float


@dataclass(frozen=True)
class FeatureStats:
    """Per-column min/max/mean/std; ``std_kind`` flags the estimator used."""

    columns: tuple
    std_kind: str = "sample"
    by_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "by_name", {c.name: c for c in self.columns})

    def column(self, name: str) -> ColumnStats:
        return self.by_name[name]


def load_csv(path) -> Dataset:
    """Read a dataset, validating schema, numeric cells and record invariants.

    Row numbers in error messages are file line numbers (header is line 1).
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: file is empty, expected header {','.join(COLUMNS)}")
    header = tuple(cell.strip() for cell in rows[0])
    if header != COLUMNS:
        missing = [c for c in COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {missing}; header must be "
                              f"{','.join(COLUMNS)}")
        raise SchemaError(f"{path}: header {list(header)} must be exactly {list(COLUMNS)}")

    records = []
    bad_rows = []
    for line_no, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(COLUMNS):
            raise ParseError(f"{path}: row {line_no}: expected {len(COLUMNS)} values, "
                             f"got {len(row)}")
        values = {}
        for col, cell in zip(COLUMNS, row):
            try:
                values[col] = float(cell)
            except ValueError:
                raise ParseError(f"{path}: row {line_no}, column {col!r}: "
                                 f"not a number: {cell!r}") from None
        record = ScourRecord(**values)
        broken = record.violations()
        if broken:
            bad_rows.append(f"row {line_no}: violates {', '.join(broken)}")
        records.append(record)

    if not records:
        raise ValidationError(f"{path}: empty dataset")
    if bad_rows:
        raise ValidationError(f"{path}: invalid records\n  " + "\n  ".join(bad_rows))
    return Dataset(tuple(records), provenance="file")


def write_csv(ds: Dataset, path) -> None:
    """Write a dataset; float cells use shortest round-trip formatting."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(COLUMNS) + "\n")
        for r in ds.records:
            fh.write(",".join(repr(float(v)) for v in r.values()) + "\n")


def split(ds: Dataset, n_train: int, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded uniform shuffle, then prefix/suffix split into (train, test)."""
    n = len(ds)
    if not 0 < n_train < n:
        raise DomainError(f"n_train must be in (0, {n}), got {n_train}")
    perm = np.random.default_rng(seed).permutation(n)
    train = tuple(ds.records[i] for i in perm[:n_train])
    test = tuple(ds.records[i] for i in perm[n_train:])
    return (Dataset(train, ds.provenance, ds.seed), Dataset(test, ds.provenance, ds.seed))


def summarize(ds: Dataset) -> FeatureStats:
    """Per-column min/max/mean and sample (n-1) standard deviation.

    A single-record dataset reports std 0 for every column.
    """
    if len(ds) == 0:
        raise DomainError("cannot summarize an empty dataset")
    table = np.array([r.values() for r in ds.records], dtype=np.float64)
    stds = table.std(axis=0, ddof=1) if len(ds) > 1 else np.zeros(len(COLUMNS))
    cols = tuple(
        ColumnStats(name, float(table[:, j].min()), float(table[:, j].max()),
                    float(table[:, j].mean()), float(stds[j]))
        for j, name in enumerate(COLUMNS)
    )
    return FeatureStats(cols, std_kind="sample")


def fit_standardizer(train: Dataset):
    """Fit a feature/target standardizer on a training dataset."""
    from .preprocessing import Standardizer

    return Standardizer().fit(train.features(), train.targets())


# Column-wise distributions matched to the field data's training statistics,
# constants calibrated once against the published min/max/mean/std and frozen.
_PS_LEVELS = np.array([0.7, 1.0, 1.3])
_SKEW_ZERO_FRACTION = 0.6
_SKEW_EXP_SCALE = 23.75
_V_MEAN, _V_STD = 1.64, 0.89
_CLIPS = {
    "pw": (0.30, 5.50), "skew": (0.0, 85.0), "v": (0.20, 4.50),
    "h": (0.30, 22.50), "d50": (0.12, 95.0), "sigma": (1.20, 20.30),
    "scour": (0.10, 7.10),
}
_LOGNORMAL_MOMENTS = {"pw": (1.56, 1.16), "h": (4.55, 4.02),
                      "d50": (18.98, 26.76), "sigma": (3.65, 3.29)}


def _lognormal(rng, mean, std, n):
    s2 = math.log(1.0 + (std / mean) ** 2)
    mu = math.log(mean) - s2 / 2.0
    return rng.lognormal(mu, math.sqrt(s2), n)


def synth_generate(n: int, seed: int) -> Dataset:
    """Generate ``n`` synthetic records with feature moments near the field data.

    The target is planted as a smooth nonlinear function of the features,

        scour = 2.0 * ps * pw^0.65 * h^0.35 * Fr^0.43 * (1 + 0.1/sqrt(sigma)),
        Fr    = v / sqrt(9.81*h + 0.01),

    perturbed by 10% multiplicative Gaussian noise and clipped to the
    observed scour range, so a nonlinear learner has genuine signal.
    """
    if n < 2:
        raise DomainError(f"synthetic datasets need n >= 2, got {n}")
    rng = np.random.default_rng(seed)

    ps = _PS_LEVELS[rng.integers(0, 3, n)]
    pw = np.clip(_lognormal(rng, *_LOGNORMAL_MOMENTS["pw"], n), *_CLIPS["pw"])
    zero_skew = rng.random(n) < _SKEW_ZERO_FRACTION
    skew_draw = np.clip(rng.exponential(_SKEW_EXP_SCALE, n), *_CLIPS["skew"])
    skew = np.where(zero_skew, 0.0, skew_draw)
    v = np.clip(rng.normal(_V_MEAN, _V_STD, n), *_CLIPS["v"])
    h = np.clip(_lognormal(rng, *_LOGNORMAL_MOMENTS["h"], n), *_CLIPS["h"])
    d50 = np.clip(_lognormal(rng, *_LOGNORMAL_MOMENTS["d50"], n), *_CLIPS["d50"])
    sigma = np.clip(_lognormal(rng, *_LOGNORMAL_MOMENTS["sigma"], n), *_CLIPS["sigma"])

    froude = v / np.sqrt(9.81 * h + 0.01)
    scour = (2.0 * ps * pw ** 0.65 * h ** 0.35 * froude ** 0.43
             * (1.0 + 0.1 / np.sqrt(sigma)))
    scour = scour * (1.0 + 0.1 * rng.normal(0.0, 1.0, n))
    scour = np.clip(scour, *_CLIPS["scour"])

    records = tuple(
        ScourRecord(float(ps[i]), float(pw[i]), float(skew[i]), float(v[i]),
                    float(h[i]), float(d50[i]), float(sigma[i]), float(scour[i]))
        for i in range(n)
    )
    return Dataset(records, provenance="synthetic", seed=seed)
