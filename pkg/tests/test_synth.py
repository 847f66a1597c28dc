import numpy as np
import pytest

from motionspc.errors import FrameOutOfRange, InvalidSpec
from motionspc.landmarks import SMALL_TASK_SELECTION
from motionspc.motion import motion_series
from motionspc.streamio import write_stream
from motionspc.synth import Burst, SynthSpec, generate, inject_anomaly

SEL = SMALL_TASK_SELECTION


class TestGenerate:
    def test_deterministic_bytes(self):
        spec = SynthSpec(seed=42, n_frames=50, selection=SEL)
        assert write_stream(generate(spec)) == write_stream(generate(spec))

    def test_different_seeds_differ(self):
        a = generate(SynthSpec(seed=1, n_frames=10, selection=SEL))
        b = generate(SynthSpec(seed=2, n_frames=10, selection=SEL))
        assert write_stream(a) != write_stream(b)

    def test_zero_jitter_static(self):
        stream = generate(SynthSpec(seed=0, n_frames=30, selection=SEL, jitter_std=0.0))
        series = motion_series(stream, SEL, 0)
        assert np.all(series.amounts == 0)

    def test_single_frame_burst_two_motion_spikes(self):
        burst = Burst(start_frame=10, duration=1, amplitude=(0.3, 0.4, 0.0),
                      landmark_ids=(13,))
        stream = generate(SynthSpec(seed=0, n_frames=30, selection=SEL,
                                    jitter_std=0.0, bursts=(burst,)))
        series = motion_series(stream, SEL, 0)
        nonzero = {r.frame_index: r.motion_amount for r in series.records
                   if r.motion_amount > 0}
        assert set(nonzero) == {10, 11}  # entry and exit of the displacement
        assert nonzero[10] == pytest.approx(0.5)
        assert nonzero[11] == pytest.approx(0.5)

    def test_invalid_specs(self):
        with pytest.raises(InvalidSpec):
            SynthSpec(seed=0, n_frames=1, selection=SEL)
        with pytest.raises(InvalidSpec):
            SynthSpec(seed=0, n_frames=10, selection=SEL, jitter_std=-1)
        with pytest.raises(InvalidSpec):
            SynthSpec(seed=0, n_frames=10, selection=SEL,
                      bursts=(Burst(20, 1, (0, 0, 0), (13,)),))


class TestInjectAnomaly:
    def test_zero_displacement_no_change(self):
        stream = generate(SynthSpec(seed=5, n_frames=20, selection=SEL))
        out = inject_anomaly(stream, 5, {13: (0.0, 0.0, 0.0)})
        assert write_stream(out) == write_stream(stream)

    def test_original_unmodified(self):
        stream = generate(SynthSpec(seed=5, n_frames=20, selection=SEL))
        before = write_stream(stream)
        inject_anomaly(stream, 5, {13: (1.0, 0.0, 0.0)})
        assert write_stream(stream) == before

    def test_non_selected_landmark_leaves_series_unchanged(self):
        stream = generate(SynthSpec(seed=5, n_frames=20, selection=SEL))
        out = inject_anomaly(stream, 5, {11: (1.0, 0.0, 0.0)})  # 11 not in S selection
        a = motion_series(stream, SEL, 0).amounts
        b = motion_series(out, SEL, 0).amounts
        assert np.array_equal(a, b)

    def test_out_of_range(self):
        stream = generate(SynthSpec(seed=5, n_frames=20, selection=SEL))
        with pytest.raises(FrameOutOfRange):
            inject_anomaly(stream, 20, {13: (1.0, 0.0, 0.0)})
