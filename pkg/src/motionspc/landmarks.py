"""Landmark stream data model, task codes, and feature-matrix construction.

Landmarks follow the 33-point full-body pose topology (indices 0-32).
Coordinates stay in the estimator's normalized image units throughout; no
metric calibration is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import EmptyStream, InvalidTaskCode, MissingLandmark

N_LANDMARKS = 33

# Canonical names for the body-joint indices used by the task selections.
LANDMARK_NAMES = {
    11: "left_shoulder",
    12: "right_shoulder",
    13: "left_elbow",
    14: "right_elbow",
    15: "left_wrist",
    16: "right_wrist",
    17: "left_pinky",
    18: "right_pinky",
    19: "left_index",
    20: "right_index",
    21: "left_thumb",
    22: "right_thumb",
    25: "left_knee",
    26: "right_knee",
}

AXES = ("x", "y", "z")

DEFAULT_FPS = 30.0
DEFAULT_VISIBILITY_THRESHOLD = 0.5


def landmark_name(index: int) -> str:
    return LANDMARK_NAMES.get(index, f"landmark_{index}")


class ObjectSize(Enum):
    LARGE = "L"
    SMALL = "S"


class Guidance(Enum):
    GUIDED = "G"
    UNGUIDED = "U"


class Action(Enum):
    INSERT = "I"
    PLACE = "P"


@dataclass(frozen=True)
class TaskCode:
    """Three-letter task label: object size x guidance x action."""

    size: ObjectSize
    guidance: Guidance
    action: Action

    def __str__(self) -> str:
        return self.size.value + self.guidance.value + self.action.value


def parse_task_code(code: str) -> TaskCode:
    """Decode a 3-character task code such as "SGI" or "LUP"."""
    if not isinstance(code, str) or len(code) != 3:
        raise InvalidTaskCode(f"task code must be 3 characters, got {code!r}")
    try:
        return TaskCode(ObjectSize(code[0]), Guidance(code[1]), Action(code[2]))
    except ValueError:
        raise InvalidTaskCode(
            f"task code {code!r} must be one character from each of "
            "{L,S}, {G,U}, {I,P}"
        ) from None


ALL_TASK_CODES = tuple(
    TaskCode(s, g, a) for s in ObjectSize for g in Guidance for a in Action
)


@dataclass(frozen=True)
class LandmarkSelection:
    """Ordered (ascending-index) set of landmark ids monitored for a task."""

    ids: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        if not self.ids:
            raise ValueError("selection must be non-empty")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("selection ids must be unique")
        object.__setattr__(self, "ids", tuple(sorted(self.ids)))
        for i in self.ids:
            if not 0 <= i < N_LANDMARKS:
                raise ValueError(f"landmark index {i} outside [0, {N_LANDMARKS - 1}]")

    def __len__(self) -> int:
        return len(self.ids)

    @property
    def n_features(self) -> int:
        return 3 * len(self.ids)


SMALL_TASK_SELECTION = LandmarkSelection(
    ids=(13, 14, 15, 16, 17, 18, 19, 20, 21, 22), label="small-object joints"
)
LARGE_TASK_SELECTION = LandmarkSelection(
    ids=(11, 12, 13, 14, 25, 26), label="large-object joints"
)


def selection_for_task(task: TaskCode) -> LandmarkSelection:
    """Landmark subset for a task; only object size matters."""
    if task.size is ObjectSize.SMALL:
        return SMALL_TASK_SELECTION
    return LARGE_TASK_SELECTION


@dataclass(frozen=True)
class LandmarkFrame:
    """3D landmark positions for one video frame.

    ``landmarks`` maps landmark id -> (x, y, z) in normalized units.
    ``filled`` marks ids whose position was carried forward by the gap
    policy rather than observed.
    """

    frame_index: int
    timestamp_s: float
    landmarks: dict[int, tuple[float, float, float]]
    visibility: dict[int, float] | None = None
    filled: frozenset[int] = frozenset()

    def position(self, landmark_id: int) -> np.ndarray:
        try:
            return np.asarray(self.landmarks[landmark_id], dtype=float)
        except KeyError:
            raise MissingLandmark(
                f"landmark {landmark_id} absent from frame {self.frame_index}"
            ) from None


@dataclass(frozen=True)
class LandmarkStream:
    """Ordered landmark frames plus recording metadata."""

    fps: float
    frames: tuple[LandmarkFrame, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        object.__setattr__(self, "frames", tuple(self.frames))

    def __len__(self) -> int:
        return len(self.frames)

    @property
    def task_code(self) -> str | None:
        return self.metadata.get("task_code")


@dataclass(frozen=True)
class FeatureMatrix:
    """n x p matrix of per-frame feature vectors with column provenance.

    Columns are laid out (landmark ascending) x (x, y, z), so
    p = 3 * |selection| always.
    """

    values: np.ndarray
    frame_indices: tuple[int, ...]
    column_labels: tuple[tuple[int, str], ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("feature matrix must be 2-dimensional")
        if values.shape[0] != len(self.frame_indices):
            raise ValueError("row count must match frame_indices")
        if values.shape[1] != len(self.column_labels):
            raise ValueError("column count must match column_labels")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def column_labels_for(selection: LandmarkSelection) -> tuple[tuple[int, str], ...]:
    return tuple((i, axis) for i in selection.ids for axis in AXES)


def fill_gaps(
    stream: LandmarkStream,
    selection: LandmarkSelection,
    visibility_threshold: float = DEFAULT_VISIBILITY_THRESHOLD,
) -> LandmarkStream:
    """Carry forward the last observed position for occluded landmarks.

    A landmark counts as observed when present and (if visibility is
    reported) at or above the threshold. A required landmark with no prior
    observation raises MissingLandmark.
    """
    if not stream.frames:
        raise EmptyStream("cannot gap-fill an empty stream")
    last_seen: dict[int, tuple[float, float, float]] = {}
    new_frames = []
    for frame in stream.frames:
        filled = set(frame.filled)
        landmarks = dict(frame.landmarks)
        for lid in selection.ids:
            observed = lid in landmarks
            if observed and frame.visibility is not None:
                observed = frame.visibility.get(lid, 1.0) >= visibility_threshold
            if observed:
                last_seen[lid] = landmarks[lid]
            else:
                if lid not in last_seen:
                    raise MissingLandmark(
                        f"landmark {lid} has no prior observation at "
                        f"frame {frame.frame_index}"
                    )
                landmarks[lid] = last_seen[lid]
                filled.add(lid)
        new_frames.append(
            LandmarkFrame(
                frame_index=frame.frame_index,
                timestamp_s=frame.timestamp_s,
                landmarks=landmarks,
                visibility=frame.visibility,
                filled=frozenset(filled),
            )
        )
    return LandmarkStream(fps=stream.fps, frames=tuple(new_frames), metadata=dict(stream.metadata))


def select_features(
    stream: LandmarkStream,
    selection: LandmarkSelection,
    gap_policy: str = "carry_forward",
    visibility_threshold: float = DEFAULT_VISIBILITY_THRESHOLD,
) -> FeatureMatrix:
    """Build the n x (3*|selection|) position feature matrix from a stream."""
    if not stream.frames:
        raise EmptyStream("cannot build features from an empty stream")
    if gap_policy == "carry_forward":
        stream = fill_gaps(stream, selection, visibility_threshold)
    elif gap_policy != "off":
        raise ValueError(f"unknown gap policy {gap_policy!r}")
    n = len(stream.frames)
    values = np.empty((n, selection.n_features), dtype=float)
    for row, frame in enumerate(stream.frames):
        for j, lid in enumerate(selection.ids):
            if lid not in frame.landmarks:
                raise MissingLandmark(
                    f"landmark {lid} absent from frame {frame.frame_index}"
                )
            values[row, 3 * j : 3 * j + 3] = frame.landmarks[lid]
    return FeatureMatrix(
        values=values,
        frame_indices=tuple(f.frame_index for f in stream.frames),
        column_labels=column_labels_for(selection),
    )


@dataclass
class ValidationReport:
    """Findings from structural stream validation; empty issues means clean."""

    issues: list[str] = field(default_factory=list)
    missing_rates: dict[int, float] = field(default_factory=dict)
    n_frames: int = 0

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_stream(
    stream: LandmarkStream,
    selection: LandmarkSelection | None = None,
    coordinate_bound: float = 10.0,
) -> ValidationReport:
    """Check frame ordering, coordinate sanity, and per-landmark coverage."""
    report = ValidationReport(n_frames=len(stream.frames))
    if stream.fps <= 0 or stream.fps > 1000:
        report.issues.append(f"implausible fps {stream.fps}")
    if not stream.frames:
        report.issues.append("stream has no frames")
        return report
    prev_index = None
    for frame in stream.frames:
        if prev_index is not None and frame.frame_index <= prev_index:
            report.issues.append(
                f"non-monotonic frame index {frame.frame_index} after {prev_index}"
            )
        prev_index = frame.frame_index
        for lid, pos in frame.landmarks.items():
            if any(not np.isfinite(c) for c in pos):
                report.issues.append(
                    f"non-finite coordinate for landmark {lid} at frame {frame.frame_index}"
                )
            elif any(abs(c) > coordinate_bound for c in pos):
                report.issues.append(
                    f"coordinate outside |{coordinate_bound}| for landmark {lid} "
                    f"at frame {frame.frame_index}"
                )
    if selection is not None:
        ids = selection.ids
    else:
        ids = tuple(sorted(set().union(*(f.landmarks.keys() for f in stream.frames))))
    n = len(stream.frames)
    for lid in ids:
        missing = sum(1 for f in stream.frames if lid not in f.landmarks)
        if missing:
            report.missing_rates[lid] = missing / n
    return report
