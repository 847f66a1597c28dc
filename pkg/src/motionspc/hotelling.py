"""Hotelling's T-squared control charting: Phase I fitting, monitoring, limits.

Phase I fits a mean vector and covariance matrix to baseline feature
vectors and derives an upper control limit from an F-distribution (or,
optionally, Beta-distribution) quantile. Phase II scores incoming
vectors against the frozen model; values above the UCL are warnings.
The lower control limit is identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import (
    DegenerateCovariance,
    DimensionMismatch,
    InsufficientData,
    InvalidShape,
)
from .landmarks import FeatureMatrix

DEFAULT_ALPHA = 0.0027  # 3-sigma-equivalent false-alarm rate

# Relative eigenvalue cutoff below which the covariance is treated as
# rank-deficient and a pseudo-inverse is used.
EIGENVALUE_RTOL = 1e-10


def ucl(p: int, n: int, alpha: float, limit_family: str = "f") -> float:
    """Upper control limit for individual observations.

    "f" uses [p(n-1)/(n-p)] * F_quantile(1-alpha; p, n-p); "beta" uses the
    retrospective limit [(n-1)^2/n] * Beta_quantile(1-alpha; p/2, (n-p-1)/2).
    """
    if p < 1 or n <= p:
        raise InvalidShape(f"need n > p >= 1, got p={p}, n={n}")
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0,1), got {alpha}")
    if limit_family == "f":
        return float(p * (n - 1) / (n - p) * stats.f.ppf(1 - alpha, p, n - p))
    if limit_family == "beta":
        if n <= p + 1:
            raise InvalidShape(f"beta limit needs n > p + 1, got p={p}, n={n}")
        return float(
            (n - 1) ** 2 / n * stats.beta.ppf(1 - alpha, p / 2, (n - p - 1) / 2)
        )
    raise ValueError(f"unknown limit family {limit_family!r}")


LCL = 0.0


@dataclass(frozen=True)
class PhaseIModel:
    """Frozen baseline model: mean, covariance, stored inverse, and limits."""

    mean: np.ndarray
    covariance: np.ndarray
    inverse: np.ndarray
    inverse_method: str  # "exact" or "pseudo"
    p: int
    n: int
    alpha: float
    ucl: float
    lcl: float
    estimator: str  # "sample" or "successive-differences"
    limit_family: str
    feature_kind: str


@dataclass(frozen=True)
class TsquaredSeries:
    values: np.ndarray
    frame_indices: tuple[int, ...]
    phase: str  # "I" or "II"

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class WarningEvent:
    """A T-squared value strictly above the upper control limit."""

    frame_index: int
    tsquared: float
    ucl: float

    @property
    def excess_ratio(self) -> float:
        return self.tsquared / self.ucl


def _covariance(data: np.ndarray, estimator: str) -> np.ndarray:
    n = data.shape[0]
    if estimator == "sample":
        centered = data - data.mean(axis=0)
        return centered.T @ centered / (n - 1)
    if estimator == "successive-differences":
        d = np.diff(data, axis=0)
        return d.T @ d / (2 * (n - 1))
    raise ValueError(f"unknown covariance estimator {estimator!r}")


def _invert(cov: np.ndarray) -> tuple[np.ndarray, str]:
    """Eigendecomposition inverse; small eigenvalues are discarded."""
    eigvals, eigvecs = np.linalg.eigh(cov)
    largest = eigvals.max()
    if largest <= 0:
        raise DegenerateCovariance("covariance matrix has no positive eigenvalues")
    keep = eigvals > EIGENVALUE_RTOL * largest
    method = "exact" if keep.all() else "pseudo"
    inv_vals = np.where(keep, 1.0 / np.where(keep, eigvals, 1.0), 0.0)
    inverse = (eigvecs * inv_vals) @ eigvecs.T
    return inverse, method


def fit_phase1(
    data: FeatureMatrix | np.ndarray,
    alpha: float = DEFAULT_ALPHA,
    estimator: str = "sample",
    limit_family: str = "f",
    feature_kind: str = "positions",
) -> PhaseIModel:
    """Fit the baseline mean, covariance, inverse, and control limits."""
    values = data.values if isinstance(data, FeatureMatrix) else np.asarray(data, float)
    if values.ndim != 2:
        raise InvalidShape("phase I data must be a 2-d matrix")
    n, p = values.shape
    if n < 2:
        raise InsufficientData(f"need at least 2 baseline rows, got {n}")
    if n <= p:
        raise InsufficientData(
            f"need more baseline rows than features for control limits (n={n}, p={p})"
        )
    mean = values.mean(axis=0)
    cov = _covariance(values, estimator)
    if not np.any(cov):
        raise DegenerateCovariance("all baseline rows are identical")
    inverse, method = _invert(cov)
    return PhaseIModel(
        mean=mean,
        covariance=cov,
        inverse=inverse,
        inverse_method=method,
        p=p,
        n=n,
        alpha=alpha,
        ucl=ucl(p, n, alpha, limit_family),
        lcl=LCL,
        estimator=estimator,
        limit_family=limit_family,
        feature_kind=feature_kind,
    )


def tsquared(model: PhaseIModel, x) -> float:
    """Quadratic-form distance (x - mean)' S^-1 (x - mean)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (model.p,):
        raise DimensionMismatch(f"expected a {model.p}-vector, got shape {x.shape}")
    d = x - model.mean
    return max(0.0, float(d @ model.inverse @ d))


def tsquared_series(
    model: PhaseIModel, data: FeatureMatrix | np.ndarray, phase: str = "I"
) -> TsquaredSeries:
    """Elementwise T-squared over the rows of a feature matrix."""
    if isinstance(data, FeatureMatrix):
        values = data.values
        frame_indices = data.frame_indices
    else:
        values = np.asarray(data, dtype=float)
        frame_indices = tuple(range(values.shape[0]))
    if values.ndim != 2 or values.shape[1] != model.p:
        raise DimensionMismatch(
            f"expected {model.p} columns, got shape {values.shape}"
        )
    d = values - model.mean
    t = np.einsum("ij,jk,ik->i", d, model.inverse, d)
    # Clip tiny negative round-off from the quadratic form.
    t = np.maximum(t, 0.0)
    return TsquaredSeries(values=t, frame_indices=frame_indices, phase=phase)


@dataclass
class MonitorLog:
    """Per-vector problems encountered while monitoring (stream continues)."""

    errors: list[tuple[int, str]] = field(default_factory=list)


def monitor_phase2(
    model: PhaseIModel,
    incoming,
    frame_indices=None,
    log: MonitorLog | None = None,
) -> tuple[TsquaredSeries, list[WarningEvent]]:
    """Score incoming vectors in order against a frozen Phase I model.

    Emits a WarningEvent for each value strictly above the UCL. Vectors of
    the wrong dimension are recorded in ``log`` (if given) and skipped.
    """
    values = []
    indices = []
    warnings = []
    for i, x in enumerate(incoming):
        idx = frame_indices[i] if frame_indices is not None else i
        try:
            t = tsquared(model, x)
        except DimensionMismatch as exc:
            if log is None:
                raise
            log.errors.append((idx, str(exc)))
            continue
        values.append(t)
        indices.append(idx)
        if t > model.ucl:
            warnings.append(WarningEvent(frame_index=idx, tsquared=t, ucl=model.ucl))
    series = TsquaredSeries(
        values=np.array(values), frame_indices=tuple(indices), phase="II"
    )
    return series, warnings


def warning_count(series: TsquaredSeries | np.ndarray, ucl_value: float) -> int:
    """Number of T-squared values strictly above the UCL."""
    values = series.values if isinstance(series, TsquaredSeries) else np.asarray(series)
    return int(np.sum(values > ucl_value))
