"""Summary statistics, Pearson correlation, and S-vs-L task comparison.

Summary tables use the sample (1/(n-1)) standard deviation; the motion
RMSD in motionspc.motion uses the population convention. Both are noted
in the serialized output schema.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySeries, LengthMismatch, MissingClass, ZeroVariance
from .landmarks import ObjectSize, TaskCode


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    median: float
    std_dev: float
    min: float
    max: float
    warnings: int | None = None


def summarize(values, ucl: float | None = None) -> SummaryStats:
    """Count/mean/median/std/min/max of a series, plus warnings above UCL."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptySeries("cannot summarize an empty series")
    warnings = int(np.sum(arr > ucl)) if ucl is not None else None
    return SummaryStats(
        count=int(arr.size),
        mean=float(arr.mean()),
        median=float(np.median(arr)),
        std_dev=float(arr.std(ddof=1)) if arr.size > 1 else 0.0,
        min=float(arr.min()),
        max=float(arr.max()),
        warnings=warnings,
    )


@dataclass(frozen=True)
class CorrelationReport:
    pcc: float
    n_pairs: int
    series_labels: tuple[str, str]


def pearson(a, b, labels: tuple[str, str] = ("a", "b")) -> CorrelationReport:
    """Product-moment correlation between two aligned series."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise LengthMismatch(f"series lengths differ: {a.shape} vs {b.shape}")
    if a.size < 2:
        raise LengthMismatch("need at least 2 pairs")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt((da @ da) * (db @ db))
    if denom == 0:
        raise ZeroVariance("at least one series is constant")
    pcc = float((da @ db) / denom)
    # Guard round-off outside [-1, 1].
    pcc = min(1.0, max(-1.0, pcc))
    return CorrelationReport(pcc=pcc, n_pairs=int(a.size), series_labels=labels)


@dataclass(frozen=True)
class ComparisonReport:
    mean_pcc_small: float
    mean_pcc_large: float
    percent_difference: float  # (mean_S - mean_L) / mean_L * 100
    n_small: int
    n_large: int


def compare_task_correlations(
    reports: dict[TaskCode, CorrelationReport],
) -> ComparisonReport:
    """Mean PCC per object-size class and their relative difference."""
    small = [r.pcc for t, r in reports.items() if t.size is ObjectSize.SMALL]
    large = [r.pcc for t, r in reports.items() if t.size is ObjectSize.LARGE]
    if not small or not large:
        raise MissingClass("need at least one S-task and one L-task report")
    mean_s = float(np.mean(small))
    mean_l = float(np.mean(large))
    if mean_l == 0:
        raise ZeroVariance("mean L-task correlation is zero; ratio undefined")
    return ComparisonReport(
        mean_pcc_small=mean_s,
        mean_pcc_large=mean_l,
        percent_difference=(mean_s - mean_l) / mean_l * 100.0,
        n_small=len(small),
        n_large=len(large),
    )
