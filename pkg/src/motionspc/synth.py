"""Seeded synthetic landmark streams for tests and calibration runs.

Randomness comes from numpy's PCG64 generator seeded directly with the
spec'd 64-bit seed; Gaussian jitter is produced by applying the standard
normal inverse CDF to uniform draws, so the draw sequence is fully
determined by (seed, n_frames, selection size). Draw order is frame-major,
then landmark (ascending id), then axis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import FrameOutOfRange, InvalidSpec
from .landmarks import (
    DEFAULT_FPS,
    LandmarkFrame,
    LandmarkSelection,
    LandmarkStream,
)

# Plausible normalized-image-unit standing pose for the joint landmarks.
DEFAULT_BASE_POSE = {
    11: (0.55, 0.40, -0.05),
    12: (0.45, 0.40, -0.05),
    13: (0.60, 0.52, -0.02),
    14: (0.40, 0.52, -0.02),
    15: (0.62, 0.62, 0.00),
    16: (0.38, 0.62, 0.00),
    17: (0.64, 0.66, 0.01),
    18: (0.36, 0.66, 0.01),
    19: (0.64, 0.67, 0.01),
    20: (0.36, 0.67, 0.01),
    21: (0.63, 0.65, 0.01),
    22: (0.37, 0.65, 0.01),
    25: (0.53, 0.75, -0.03),
    26: (0.47, 0.75, -0.03),
}


@dataclass(frozen=True)
class Burst:
    """A sustained displacement applied to some landmarks over a frame span."""

    start_frame: int
    duration: int
    amplitude: tuple[float, float, float]
    landmark_ids: tuple[int, ...]


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    n_frames: int
    selection: LandmarkSelection
    fps: float = DEFAULT_FPS
    base_pose: dict[int, tuple[float, float, float]] | None = None
    jitter_std: float = 0.01
    bursts: tuple[Burst, ...] = ()
    task_code: str | None = None

    def __post_init__(self):
        if self.n_frames < 2:
            raise InvalidSpec("n_frames must be >= 2")
        if self.jitter_std < 0:
            raise InvalidSpec("jitter_std must be non-negative")
        for b in self.bursts:
            if not 0 <= b.start_frame < self.n_frames:
                raise InvalidSpec(f"burst start {b.start_frame} outside stream")
            if b.duration < 1:
                raise InvalidSpec("burst duration must be >= 1")


def _resolve_pose(spec: SynthSpec) -> dict[int, tuple[float, float, float]]:
    pose = dict(spec.base_pose) if spec.base_pose is not None else {}
    for lid in spec.selection.ids:
        if lid not in pose:
            pose[lid] = DEFAULT_BASE_POSE.get(lid, (0.5, 0.5, 0.0))
    return pose


def generate(spec: SynthSpec) -> LandmarkStream:
    """Deterministic stream: base pose + Gaussian jitter + burst displacements."""
    pose = _resolve_pose(spec)
    ids = spec.selection.ids
    k = len(ids)
    base = np.array([pose[lid] for lid in ids], dtype=float)  # (k, 3)

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    uniforms = rng.random((spec.n_frames, k, 3))
    jitter = spec.jitter_std * ndtri(uniforms) if spec.jitter_std > 0 else np.zeros_like(uniforms)

    positions = base[None, :, :] + jitter
    for burst in spec.bursts:
        rows = slice(burst.start_frame, min(burst.start_frame + burst.duration, spec.n_frames))
        cols = [ids.index(lid) for lid in burst.landmark_ids if lid in ids]
        for c in cols:
            positions[rows, c, :] += np.asarray(burst.amplitude, dtype=float)

    frames = []
    for t in range(spec.n_frames):
        landmarks = {lid: tuple(float(c) for c in positions[t, j]) for j, lid in enumerate(ids)}
        frames.append(
            LandmarkFrame(
                frame_index=t,
                timestamp_s=t / spec.fps,
                landmarks=landmarks,
            )
        )
    metadata = {"source": f"synthetic seed={spec.seed}", "unit_label": "normalized"}
    if spec.task_code:
        metadata["task_code"] = spec.task_code
    return LandmarkStream(fps=spec.fps, frames=tuple(frames), metadata=metadata)


def inject_anomaly(
    stream: LandmarkStream,
    frame: int,
    displacement: dict[int, tuple[float, float, float]],
) -> LandmarkStream:
    """New stream with the displacement added at exactly one frame."""
    if not 0 <= frame < len(stream.frames):
        raise FrameOutOfRange(f"frame {frame} outside stream of {len(stream.frames)}")
    frames = list(stream.frames)
    target = frames[frame]
    landmarks = dict(target.landmarks)
    for lid, delta in displacement.items():
        if lid in landmarks:
            x, y, z = landmarks[lid]
            landmarks[lid] = (x + delta[0], y + delta[1], z + delta[2])
    frames[frame] = LandmarkFrame(
        frame_index=target.frame_index,
        timestamp_s=target.timestamp_s,
        landmarks=landmarks,
        visibility=target.visibility,
        filled=target.filled,
    )
    return LandmarkStream(fps=stream.fps, frames=tuple(frames), metadata=dict(stream.metadata))
