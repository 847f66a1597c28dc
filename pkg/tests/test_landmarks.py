import numpy as np
import pytest

from conftest import make_stream, selection_of
from motionspc.errors import EmptyStream, InvalidTaskCode, MissingLandmark
from motionspc.landmarks import (
    LARGE_TASK_SELECTION,
    SMALL_TASK_SELECTION,
    Action,
    Guidance,
    LandmarkFrame,
    LandmarkSelection,
    LandmarkStream,
    ObjectSize,
    parse_task_code,
    select_features,
    selection_for_task,
    validate_stream,
)

ALL_CODES = [s + g + a for s in "LS" for g in "GU" for a in "IP"]


class TestTaskCode:
    def test_parse_sgi(self):
        t = parse_task_code("SGI")
        assert (t.size, t.guidance, t.action) == (
            ObjectSize.SMALL, Guidance.GUIDED, Action.INSERT,
        )

    def test_parse_lup(self):
        t = parse_task_code("LUP")
        assert (t.size, t.guidance, t.action) == (
            ObjectSize.LARGE, Guidance.UNGUIDED, Action.PLACE,
        )

    @pytest.mark.parametrize("code", ALL_CODES)
    def test_round_trip(self, code):
        assert str(parse_task_code(code)) == code

    @pytest.mark.parametrize("bad", ["XGI", "SG", "SGIP", "sgi", "S-I", ""])
    def test_invalid(self, bad):
        with pytest.raises(InvalidTaskCode):
            parse_task_code(bad)


class TestSelection:
    def test_small(self):
        sel = selection_for_task(parse_task_code("SGI"))
        assert sel.ids == tuple(range(13, 23))
        assert sel.n_features == 30

    def test_large(self):
        sel = selection_for_task(parse_task_code("LUP"))
        assert sel.ids == (11, 12, 13, 14, 25, 26)
        assert sel.n_features == 18

    def test_guidance_and_action_irrelevant(self):
        for g in "GU":
            for a in "IP":
                assert selection_for_task(parse_task_code("S" + g + a)) == SMALL_TASK_SELECTION
                assert selection_for_task(parse_task_code("L" + g + a)) == LARGE_TASK_SELECTION

    def test_small_large_overlap(self):
        assert set(SMALL_TASK_SELECTION.ids) & set(LARGE_TASK_SELECTION.ids) == {13, 14}

    def test_selection_sorted_and_unique(self):
        sel = LandmarkSelection(ids=(14, 11, 13))
        assert sel.ids == (11, 13, 14)
        with pytest.raises(ValueError):
            LandmarkSelection(ids=(11, 11))
        with pytest.raises(ValueError):
            LandmarkSelection(ids=())


class TestSelectFeatures:
    def test_shape_small_task(self, rng):
        stream = make_stream(rng.random((1100, 10, 3)), ids=SMALL_TASK_SELECTION.ids)
        fm = select_features(stream, SMALL_TASK_SELECTION)
        assert fm.values.shape == (1100, 30)

    def test_single_frame_single_landmark(self):
        stream = make_stream([[[0.1, 0.2, 0.3]]], ids=[13])
        fm = select_features(stream, selection_of([13]))
        assert fm.values.shape == (1, 3)
        assert fm.values[0].tolist() == [0.1, 0.2, 0.3]

    def test_missing_landmark_without_gap_policy(self, rng):
        stream = make_stream(rng.random((5, 10, 3)), ids=SMALL_TASK_SELECTION.ids)
        frames = list(stream.frames)
        broken = dict(frames[2].landmarks)
        del broken[15]
        frames[2] = LandmarkFrame(2, frames[2].timestamp_s, broken)
        stream = LandmarkStream(fps=30.0, frames=tuple(frames))
        with pytest.raises(MissingLandmark):
            select_features(stream, SMALL_TASK_SELECTION, gap_policy="off")

    def test_gap_policy_carries_forward(self, rng):
        stream = make_stream(rng.random((5, 10, 3)), ids=SMALL_TASK_SELECTION.ids)
        frames = list(stream.frames)
        broken = dict(frames[2].landmarks)
        del broken[15]
        frames[2] = LandmarkFrame(2, frames[2].timestamp_s, broken)
        stream = LandmarkStream(fps=30.0, frames=tuple(frames))
        fm = select_features(stream, SMALL_TASK_SELECTION)
        col = 3 * SMALL_TASK_SELECTION.ids.index(15)
        assert np.array_equal(fm.values[2, col:col + 3], fm.values[1, col:col + 3])

    def test_gap_with_no_prior_observation(self):
        stream = make_stream([[[0.1, 0.2, 0.3]]], ids=[13])
        with pytest.raises(MissingLandmark):
            select_features(stream, selection_of([13, 14]))

    def test_empty_stream(self):
        with pytest.raises((EmptyStream, ValueError)):
            stream = LandmarkStream(fps=30.0, frames=())
            select_features(stream, selection_of([13]))

    def test_column_order_independent_of_map_order(self):
        pos = {13: (0.1, 0.2, 0.3), 14: (0.4, 0.5, 0.6)}
        shuffled = {14: pos[14], 13: pos[13]}
        f1 = LandmarkFrame(0, 0.0, pos)
        f2 = LandmarkFrame(0, 0.0, shuffled)
        sel = selection_of([13, 14])
        a = select_features(LandmarkStream(fps=30, frames=(f1,)), sel)
        b = select_features(LandmarkStream(fps=30, frames=(f2,)), sel)
        assert np.array_equal(a.values, b.values)
        assert a.column_labels == tuple((i, ax) for i in (13, 14) for ax in "xyz")

    def test_visibility_below_threshold_triggers_gap(self):
        frames = (
            LandmarkFrame(0, 0.0, {13: (0.1, 0.1, 0.1)}, visibility={13: 0.9}),
            LandmarkFrame(1, 1 / 30, {13: (0.5, 0.5, 0.5)}, visibility={13: 0.2}),
        )
        stream = LandmarkStream(fps=30.0, frames=frames)
        fm = select_features(stream, selection_of([13]))
        assert np.array_equal(fm.values[1], fm.values[0])


class TestValidateStream:
    def test_clean(self, rng):
        stream = make_stream(rng.random((10, 3, 3)), ids=[11, 12, 13])
        assert validate_stream(stream).ok

    def test_non_monotonic(self):
        frames = (
            LandmarkFrame(0, 0.0, {13: (0, 0, 0)}),
            LandmarkFrame(2, 2 / 30, {13: (0, 0, 0)}),
            LandmarkFrame(1, 1 / 30, {13: (0, 0, 0)}),
        )
        stream = LandmarkStream(fps=30.0, frames=frames)
        report = validate_stream(stream)
        assert any("non-monotonic" in s for s in report.issues)

    def test_missing_rate(self):
        frames = []
        for t in range(20):
            lm = {13: (0.0, 0.0, 0.0)}
            if t != 7:
                lm[14] = (0.0, 0.0, 0.0)
            frames.append(LandmarkFrame(t, t / 30, lm))
        report = validate_stream(LandmarkStream(fps=30.0, frames=tuple(frames)))
        assert report.missing_rates == {14: 0.05}
