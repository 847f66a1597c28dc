import json

import pytest

from motionspc.cli import main
from motionspc.landmarks import SMALL_TASK_SELECTION, parse_task_code, selection_for_task
from motionspc.streamio import read_stream, write_stream_to
from motionspc.synth import Burst, SynthSpec, generate


def synth_file(tmp_path, name="stream.lmks.jsonl", seed=7, n=300, bursts=(),
               jitter=0.01, task="SGI"):
    selection = selection_for_task(parse_task_code(task))
    stream = generate(SynthSpec(seed=seed, n_frames=n, selection=selection,
                                jitter_std=jitter, bursts=tuple(bursts), task_code=task))
    path = tmp_path / name
    write_stream_to(stream, path)
    return path


class TestSynthCommand:
    def test_writes_valid_stream(self, tmp_path):
        out = tmp_path / "s.lmks.jsonl"
        assert main(["synth", "-o", str(out), "--frames", "50", "--task", "SGI",
                     "--seed", "3"]) == 0
        stream = read_stream(out)
        assert len(stream) == 50
        assert stream.task_code == "SGI"

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            main(["synth", "-o", str(out), "--frames", "40", "--task", "LGI",
                  "--seed", "11"])
        assert a.read_bytes() == b.read_bytes()


class TestAnalyzeCommand:
    def test_count_law_blocks(self, tmp_path):
        path = synth_file(tmp_path, n=1100)
        out = tmp_path / "out"
        assert main(["analyze", str(path), "--out-dir", str(out)]) == 0
        doc = json.loads((out / "results.json").read_text())
        counts = [s["motion_amount"]["count"] for s in doc["steps"]]
        assert counts == [1099, 1097, 1095]
        assert (out / "results.txt").exists()

    def test_deterministic_bytes(self, tmp_path):
        path = synth_file(tmp_path, n=400)
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        main(["analyze", str(path), "--out-dir", str(out1)])
        main(["analyze", str(path), "--out-dir", str(out2)])
        assert (out1 / "results.json").read_bytes() == (out2 / "results.json").read_bytes()

    def test_parallel_matches_serial(self, tmp_path):
        path = synth_file(tmp_path, n=400)
        serial, parallel = tmp_path / "s", tmp_path / "p"
        main(["analyze", str(path), "--out-dir", str(serial)])
        main(["analyze", str(path), "--out-dir", str(parallel), "--parallel"])
        assert (serial / "results.json").read_bytes() == (parallel / "results.json").read_bytes()

    def test_missing_file_exit_1(self, tmp_path, capsys):
        assert main(["analyze", str(tmp_path / "nope.lmks.jsonl")]) == 1
        assert "nope" in capsys.readouterr().err

    def test_too_short_exit_2(self, tmp_path):
        path = synth_file(tmp_path, n=3)
        assert main(["analyze", str(path), "--out-dir", str(tmp_path / "o")]) == 2

    def test_effective_config_echoed(self, tmp_path):
        path = synth_file(tmp_path, n=400)
        out = tmp_path / "out"
        main(["analyze", str(path), "--out-dir", str(out), "--alpha", "0.01",
              "--steps", "0,2"])
        doc = json.loads((out / "results.json").read_text())
        assert doc["config"]["alpha"] == 0.01
        assert doc["config"]["steps"] == [0, 2]


class TestChartCommand:
    def test_files_and_determinism(self, tmp_path):
        path = synth_file(tmp_path, n=200)
        out1, out2 = tmp_path / "c1", tmp_path / "c2"
        assert main(["chart", str(path), "--out-dir", str(out1)]) == 0
        main(["chart", str(path), "--out-dir", str(out2)])
        for step in (0, 2, 4):
            name = f"SGI_{step}_chart.svg"
            assert (out1 / name).exists()
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()
        assert (out1 / "SGI_trajectory.svg").exists()


class TestMonitorCommand:
    def test_in_control_quiet(self, tmp_path, capsys):
        baseline = synth_file(tmp_path, "base.lmks.jsonl", seed=1, n=600)
        live = synth_file(tmp_path, "live.lmks.jsonl", seed=2, n=100)
        code = main(["monitor", str(live), "--baseline", str(baseline),
                     "--alpha", "0.0001", "--steps", "0"])
        assert code == 0
        assert capsys.readouterr().out == ""

    def test_injected_anomaly_single_warning(self, tmp_path, capsys):
        baseline = synth_file(tmp_path, "base.lmks.jsonl", seed=1, n=600)
        burst = Burst(start_frame=50, duration=1, amplitude=(0.5, 0.5, 0.5),
                      landmark_ids=SMALL_TASK_SELECTION.ids)
        live = synth_file(tmp_path, "live.lmks.jsonl", seed=2, n=100, bursts=[burst])
        code = main(["monitor", str(live), "--baseline", str(baseline),
                     "--alpha", "0.0001", "--steps", "0",
                     "--feature-kind", "positions"])
        assert code == 0
        events = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert len(events) == 1
        assert events[0]["frame_index"] == 50
        assert events[0]["tsquared"] > events[0]["ucl"]

    def test_unfittable_baseline_exit_2(self, tmp_path):
        baseline = synth_file(tmp_path, "base.lmks.jsonl", n=10)  # n < p
        live = synth_file(tmp_path, "live.lmks.jsonl", seed=2, n=50)
        assert main(["monitor", str(live), "--baseline", str(baseline)]) == 2


class TestCorrelateCommand:
    def test_single_stream(self, tmp_path):
        path = synth_file(tmp_path, n=400)
        out = tmp_path / "out"
        assert main(["correlate", str(path), "--out-dir", str(out)]) == 0
        doc = json.loads((out / "correlations.json").read_text())
        correlations = doc["streams"]["stream.lmks.jsonl"]["correlations"]
        for step in (0, 2, 4):
            assert abs(correlations[f"step_{step}"]["pcc"]) <= 1

    def test_s_vs_l_comparison(self, tmp_path):
        paths = []
        for i, task in enumerate(["SGI", "SUP", "LGI", "LUP"]):
            paths.append(str(synth_file(tmp_path, f"{task}.lmks.jsonl", seed=i,
                                        n=400, task=task)))
        out = tmp_path / "out"
        assert main(["correlate", *paths, "--out-dir", str(out)]) == 0
        doc = json.loads((out / "correlations.json").read_text())
        assert "comparison" in doc
        assert "percent_difference" in doc["comparison"]

    def test_static_stream_zero_variance_reported(self, tmp_path):
        path = synth_file(tmp_path, n=100, jitter=0.0)
        out = tmp_path / "out"
        assert main(["correlate", str(path), "--out-dir", str(out)]) == 0
        doc = json.loads((out / "correlations.json").read_text())
        correlations = doc["streams"]["stream.lmks.jsonl"]["correlations"]
        assert all("error" in v for v in correlations.values())


class TestValidateCommand:
    def test_clean_stream(self, tmp_path, capsys):
        path = synth_file(tmp_path, n=50)
        assert main(["validate", str(path)]) == 0
        assert "issues: 0" in capsys.readouterr().out
