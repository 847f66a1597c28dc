import numpy as np
import pytest

from motionspc.landmarks import LandmarkFrame, LandmarkSelection, LandmarkStream


def make_stream(positions, fps=30.0, ids=None, metadata=None):
    """Stream from an (n, k, 3) array (or nested lists) of landmark positions."""
    positions = np.asarray(positions, dtype=float)
    if positions.ndim == 2:  # single landmark
        positions = positions[:, None, :]
    n, k, _ = positions.shape
    ids = tuple(ids) if ids is not None else tuple(range(11, 11 + k))
    frames = tuple(
        LandmarkFrame(
            frame_index=t,
            timestamp_s=t / fps,
            landmarks={lid: tuple(positions[t, j]) for j, lid in enumerate(ids)},
        )
        for t in range(n)
    )
    return LandmarkStream(fps=fps, frames=frames, metadata=metadata or {})


def selection_of(ids):
    return LandmarkSelection(ids=tuple(ids), label="test")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
