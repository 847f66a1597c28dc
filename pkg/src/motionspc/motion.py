"""Per-frame motion quantification at configurable frame steps.

A step of s compares frame t with frame t-(s+1); the lag s+1 is the
number of frames between compared positions. Motion amount is the sum
over the selected landmarks of the Euclidean norms of their displacement
vectors. Velocity divides motion amount by landmark count and elapsed
time; acceleration is the lag-difference of velocity over elapsed time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySeries, MissingLandmark, StreamTooShort
from .landmarks import (
    FeatureMatrix,
    LandmarkFrame,
    LandmarkSelection,
    LandmarkStream,
    column_labels_for,
    select_features,
)

DEFAULT_STEPS = (0, 2, 4)


@dataclass(frozen=True)
class StepSpec:
    """Frame-progression parameter; lag = step + 1 frames between samples."""

    step: int

    def __post_init__(self):
        if self.step < 0:
            raise ValueError("step must be non-negative")

    @property
    def lag(self) -> int:
        return self.step + 1


@dataclass(frozen=True)
class MotionRecord:
    """Motion quantities for the later frame t of a (t-lag, t) pair."""

    frame_index: int
    motion_vectors: dict[int, tuple[float, float, float]]
    motion_amount: float
    velocity: float
    acceleration: float | None


@dataclass(frozen=True)
class MotionSeries:
    step: StepSpec
    records: tuple[MotionRecord, ...]
    selection: LandmarkSelection
    fps: float

    def __len__(self) -> int:
        return len(self.records)

    @property
    def amounts(self) -> np.ndarray:
        return np.array([r.motion_amount for r in self.records])

    @property
    def velocities(self) -> np.ndarray:
        return np.array([r.velocity for r in self.records])

    @property
    def accelerations(self) -> np.ndarray:
        return np.array(
            [r.acceleration for r in self.records if r.acceleration is not None]
        )

    @property
    def frame_indices(self) -> tuple[int, ...]:
        return tuple(r.frame_index for r in self.records)


def motion_vectors(
    frame_t: LandmarkFrame,
    frame_prev: LandmarkFrame,
    selection: LandmarkSelection,
) -> dict[int, tuple[float, float, float]]:
    """Componentwise position difference frame_t - frame_prev per landmark."""
    out = {}
    for lid in selection.ids:
        if lid not in frame_t.landmarks or lid not in frame_prev.landmarks:
            raise MissingLandmark(f"landmark {lid} absent from compared frames")
        a = frame_t.landmarks[lid]
        b = frame_prev.landmarks[lid]
        out[lid] = (a[0] - b[0], a[1] - b[1], a[2] - b[2])
    return out


def motion_amount(vectors: dict[int, tuple[float, float, float]]) -> float:
    """Sum of Euclidean norms of the per-landmark motion vectors."""
    return float(
        sum(np.linalg.norm(np.asarray(v, dtype=float)) for v in vectors.values())
    )


def motion_series(
    stream: LandmarkStream,
    selection: LandmarkSelection,
    step: StepSpec | int,
    gap_policy: str = "carry_forward",
    visibility_threshold: float = 0.5,
) -> MotionSeries:
    """Motion amount/velocity/acceleration for every frame pair at the step.

    An n-frame stream yields exactly n - lag records, one per
    t in [lag, n-1]. Acceleration is defined from t >= 2*lag.
    """
    if isinstance(step, int):
        step = StepSpec(step)
    lag = step.lag
    n = len(stream.frames)
    if n <= lag:
        raise StreamTooShort(
            f"need more than {lag} frames for step {step.step}, got {n}"
        )
    features = select_features(
        stream, selection, gap_policy=gap_policy, visibility_threshold=visibility_threshold
    )
    k = len(selection)
    positions = features.values.reshape(n, k, 3)
    diffs = positions[lag:] - positions[:-lag]  # (n-lag, k, 3)
    norms = np.linalg.norm(diffs, axis=2)  # (n-lag, k)
    amounts = norms.sum(axis=1)
    dt = lag / stream.fps
    velocities = amounts / (k * dt)

    records = []
    for row in range(n - lag):
        accel = None
        if row >= lag:
            accel = float((velocities[row] - velocities[row - lag]) / dt)
        vectors = {
            lid: tuple(float(c) for c in diffs[row, j])
            for j, lid in enumerate(selection.ids)
        }
        records.append(
            MotionRecord(
                frame_index=features.frame_indices[row + lag],
                motion_vectors=vectors,
                motion_amount=float(amounts[row]),
                velocity=float(velocities[row]),
                acceleration=accel,
            )
        )
    return MotionSeries(step=step, records=tuple(records), selection=selection, fps=stream.fps)


def motion_vector_matrix(
    stream: LandmarkStream,
    selection: LandmarkSelection,
    step: StepSpec | int,
    gap_policy: str = "carry_forward",
    visibility_threshold: float = 0.5,
) -> FeatureMatrix:
    """Flattened (n-lag) x (3*|selection|) matrix of per-landmark motion vectors."""
    if isinstance(step, int):
        step = StepSpec(step)
    lag = step.lag
    n = len(stream.frames)
    if n <= lag:
        raise StreamTooShort(
            f"need more than {lag} frames for step {step.step}, got {n}"
        )
    features = select_features(
        stream, selection, gap_policy=gap_policy, visibility_threshold=visibility_threshold
    )
    diffs = features.values[lag:] - features.values[:-lag]
    return FeatureMatrix(
        values=diffs,
        frame_indices=features.frame_indices[lag:],
        column_labels=column_labels_for(selection),
    )


def rmsd(series) -> float:
    """Root mean square deviation of a motion-amount series about its mean.

    Uses the population (1/n) convention.
    """
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        raise EmptySeries("rmsd of an empty series")
    return float(np.sqrt(np.mean((values - values.mean()) ** 2)))
