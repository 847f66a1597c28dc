import xml.etree.ElementTree as ET

import numpy as np
import pytest

from motionspc.charts import ChartSpec, render_control_chart, render_trajectory
from motionspc.errors import EmptySeries, EmptyStream
from motionspc.hotelling import TsquaredSeries
from motionspc.landmarks import LandmarkStream, SMALL_TASK_SELECTION
from motionspc.synth import SynthSpec, generate

SVG = "{http://www.w3.org/2000/svg}"


def series_of(values):
    values = np.asarray(values, dtype=float)
    return TsquaredSeries(values=values, frame_indices=tuple(range(len(values))), phase="I")


def count(svg_text, tag, cls=None):
    root = ET.fromstring(svg_text)
    nodes = root.iter(SVG + tag)
    if cls is None:
        return sum(1 for _ in nodes)
    return sum(1 for n in nodes if n.get("class") == cls)


class TestControlChart:
    def test_no_markers_below_ucl(self):
        svg = render_control_chart(series_of([1, 2, 3]), ucl=10.0)
        assert count(svg, "circle", "warning") == 0
        assert count(svg, "polyline") == 1
        assert count(svg, "line") == 1

    def test_marker_per_exceedance(self):
        svg = render_control_chart(series_of([1, 12, 3, 15]), ucl=10.0)
        assert count(svg, "circle", "warning") == 2

    def test_deterministic(self):
        a = render_control_chart(series_of([1, 12, 3]), ucl=10.0)
        b = render_control_chart(series_of([1, 12, 3]), ucl=10.0)
        assert a == b

    def test_valid_xml(self):
        ET.fromstring(render_control_chart(series_of([1, 2]), ucl=5.0))

    def test_empty_series(self):
        with pytest.raises(EmptySeries):
            render_control_chart(series_of([]), ucl=5.0)


class TestTrajectory:
    def stream(self, jitter=0.01):
        return generate(SynthSpec(seed=9, n_frames=25, selection=SMALL_TASK_SELECTION,
                                  jitter_std=jitter))

    def test_one_polyline_per_landmark_per_panel(self):
        svg = render_trajectory(self.stream(), SMALL_TASK_SELECTION)
        assert count(svg, "polyline", "trajectory") == 3 * len(SMALL_TASK_SELECTION.ids)

    def test_static_stream_renders(self):
        svg = render_trajectory(self.stream(jitter=0.0), SMALL_TASK_SELECTION)
        ET.fromstring(svg)

    def test_three_panels_always(self):
        svg = render_trajectory(self.stream(), SMALL_TASK_SELECTION)
        root = ET.fromstring(svg)
        panel_labels = [n.text for n in root.iter(SVG + "text")]
        assert {"x-y", "x-z", "y-z"} <= set(panel_labels)

    def test_empty_stream(self):
        with pytest.raises((EmptyStream, ValueError)):
            render_trajectory(LandmarkStream(fps=30, frames=()), SMALL_TASK_SELECTION)

    def test_deterministic(self):
        a = render_trajectory(self.stream(), SMALL_TASK_SELECTION)
        b = render_trajectory(self.stream(), SMALL_TASK_SELECTION)
        assert a == b
