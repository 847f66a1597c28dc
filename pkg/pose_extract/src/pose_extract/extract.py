"""Video-to-landmark-stream extraction.

Decodes a video with OpenCV and runs a 33-landmark pose estimator on each
frame, writing one frame record per decoded frame to a line-delimited
``.lmks.jsonl`` document (the motionspc stream format, written here
directly so this adapter stays decoupled from the analysis toolchain).
Frames are written incrementally, so extraction can feed a live monitor
through a pipe. Output never contains image data.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Protocol

import cv2

FORMAT_VERSION = "motionspc/1"
N_LANDMARKS = 33

_COMPACT = {"separators": (",", ":")}


class ExtractionError(Exception):
    pass


class UnreadableVideo(ExtractionError):
    pass


class EstimatorUnavailable(ExtractionError):
    pass


class PoseBackend(Protocol):
    """A per-frame 33-landmark pose estimator."""

    name: str
    settings: dict

    def detect(self, frame_bgr) -> list[tuple[int, float, float, float, float]] | None:
        """Landmark tuples (id, x, y, z, visibility) or None if no person."""


class MediaPipeBackend:
    """Off-the-shelf estimator backend (requires the mediapipe package)."""

    name = "mediapipe"

    def __init__(self, model_complexity: int = 1, smooth_landmarks: bool = True):
        try:
            import mediapipe as mp
        except ImportError:
            raise EstimatorUnavailable(
                "mediapipe is not installed; install pose-extract[mediapipe] "
                "or use the synthetic backend"
            ) from None
        self.settings = {
            "model_complexity": model_complexity,
            "smooth_landmarks": smooth_landmarks,
            "version": mp.__version__,
        }
        self._pose = mp.solutions.pose.Pose(
            model_complexity=model_complexity, smooth_landmarks=smooth_landmarks
        )

    def detect(self, frame_bgr):
        rgb = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2RGB)
        result = self._pose.process(rgb)
        if result.pose_landmarks is None:
            return None
        return [
            (i, lm.x, lm.y, lm.z, lm.visibility)
            for i, lm in enumerate(result.pose_landmarks.landmark)
        ]


# Fixed skeleton used by the synthetic backend, in normalized image units.
_BASE_SKELETON = {i: (0.5, 0.1 + 0.025 * i, 0.0) for i in range(N_LANDMARKS)}


class SyntheticBackend:
    """Deterministic stand-in for environments without a pose model.

    Emits the full 33-landmark skeleton with a small periodic sway driven
    by the frame counter and a visibility score tied to mean frame
    brightness, so output depends on the actual decoded pixels while
    remaining fully reproducible. Dark frames count as no-person.
    """

    name = "synthetic"

    def __init__(self, sway: float = 0.02, darkness_floor: float = 5.0):
        self.settings = {"sway": sway, "darkness_floor": darkness_floor}
        self._sway = sway
        self._floor = darkness_floor
        self._frame = 0

    def detect(self, frame_bgr):
        t = self._frame
        self._frame += 1
        brightness = float(frame_bgr.mean())
        if brightness < self._floor:
            return None
        visibility = min(1.0, brightness / 255.0 + 0.5)
        dx = self._sway * math.sin(2 * math.pi * t / 30.0)
        return [
            (i, x + dx, y, z, visibility)
            for i, (x, y, z) in _BASE_SKELETON.items()
        ]


BACKENDS = {"mediapipe": MediaPipeBackend, "synthetic": SyntheticBackend}


@dataclass(frozen=True)
class ExtractionJob:
    video_path: str
    output_path: str
    fps_override: float | None = None
    visibility_floor: float | None = None
    anonymize: bool = True


def _frame_records(
    job: ExtractionJob, backend: PoseBackend
) -> Iterator[tuple[dict, float]]:
    capture = cv2.VideoCapture(str(job.video_path))
    if not capture.isOpened():
        raise UnreadableVideo(f"cannot open video {job.video_path}")
    fps = job.fps_override or capture.get(cv2.CAP_PROP_FPS) or 30.0
    index = 0
    try:
        while True:
            ok, frame = capture.read()
            if not ok:
                break
            detections = backend.detect(frame)
            record = {"frame_index": index}
            if detections is None:
                record["landmarks"] = []
                record["no_person"] = True
            else:
                entries = []
                for lid, x, y, z, vis in detections:
                    if job.visibility_floor is not None and vis < job.visibility_floor:
                        continue
                    entries.append([lid, x, y, z, vis])
                record["landmarks"] = entries
            yield record, fps
            index += 1
    finally:
        capture.release()


def extract(job: ExtractionJob, backend: PoseBackend | None = None, out=None) -> int:
    """Run the extraction; returns the number of frame records written.

    ``out`` may be a writable text file object (for piping to a live
    monitor); otherwise ``job.output_path`` is written.
    """
    if backend is None:
        backend = SyntheticBackend()
    records = _frame_records(job, backend)
    try:
        first, fps = next(records)
    except StopIteration:
        raise UnreadableVideo(f"video {job.video_path} contains no frames") from None
    header = {
        "version": FORMAT_VERSION,
        "fps": fps,
        "source": Path(job.video_path).name if job.anonymize else str(job.video_path),
        "unit_label": "normalized",
        "estimator": backend.name,
        "estimator_settings": backend.settings,
    }

    def write_all(handle) -> int:
        handle.write(json.dumps(header, **_COMPACT) + "\n")
        handle.write(json.dumps(first, **_COMPACT) + "\n")
        handle.flush()
        count = 1
        for record, _ in records:
            handle.write(json.dumps(record, **_COMPACT) + "\n")
            handle.flush()
            count += 1
        return count

    if out is not None:
        return write_all(out)
    with open(job.output_path, "w") as handle:
        return write_all(handle)
