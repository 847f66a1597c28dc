"""Command-line entry point: analyze, monitor, chart, synth, correlate, validate.

Exit codes: 0 success, 1 usage/parse errors, 2 analysis errors. All
randomness flows from the configured seed; outputs are byte-identical for
identical inputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import charts, hotelling, motion, pipeline, synth, taskstats
from .errors import MotionSpcError, ParseError, StreamTooShort
from .landmarks import (
    LandmarkSelection,
    parse_task_code,
    selection_for_task,
    validate_stream,
)
from .streamio import (
    STREAM_EXTENSION,
    AnalysisConfig,
    ResultBundle,
    read_config,
    read_stream,
    render_results_table,
    write_results,
    write_stream,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ANALYSIS = 2


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--task", help="3-letter task code, e.g. SGI")
    p.add_argument("--landmarks", help="comma-separated landmark ids (overrides --task)")
    p.add_argument("--steps", help="comma-separated steps, default 0,2,4")
    p.add_argument("--alpha", type=float)
    p.add_argument("--estimator", choices=["sample", "successive-differences"])
    p.add_argument("--limit-family", choices=["f", "beta"], dest="limit_family")
    p.add_argument("--feature-kind", choices=["motion-vectors", "positions"], dest="feature_kind")
    p.add_argument("--phase1-fraction", type=float, dest="phase1_fraction")
    p.add_argument("--seed", type=int)
    p.add_argument("--parallel", action="store_true")


def _effective_config(args) -> AnalysisConfig:
    config = read_config(args.config) if args.config else AnalysisConfig()
    overrides = {}
    if getattr(args, "task", None):
        overrides["task_code"] = args.task
    if getattr(args, "landmarks", None):
        overrides["landmark_ids"] = tuple(int(s) for s in args.landmarks.split(","))
    if getattr(args, "steps", None):
        overrides["steps"] = tuple(int(s) for s in args.steps.split(","))
    for name in ("alpha", "estimator", "limit_family", "feature_kind",
                 "phase1_fraction", "seed"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    if overrides:
        config = dataclasses.replace(config, **overrides)
    if config.task_code is not None:
        parse_task_code(config.task_code)  # fail fast on bad codes
    return config


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_analyze(args) -> int:
    config = _effective_config(args)
    stream = read_stream(args.stream)
    bundle = pipeline.analyze_stream(stream, config, parallel=args.parallel)
    out = _out_dir(args)
    (out / "results.json").write_bytes(write_results(bundle))
    (out / "results.txt").write_text(render_results_table(bundle))
    print(f"wrote {out / 'results.json'}")
    return EXIT_OK


def cmd_correlate(args) -> int:
    config = _effective_config(args)
    out = _out_dir(args)
    per_stream = {}
    task_reports: dict = {}
    for path in args.streams:
        stream = read_stream(path)
        stream_config = config
        if config.task_code is None and stream.task_code:
            stream_config = dataclasses.replace(config, task_code=stream.task_code)
        correlations = pipeline.correlate_stream(stream, stream_config)
        per_stream[Path(path).name] = {
            "task_code": stream_config.task_code,
            "correlations": correlations,
        }
        code = stream_config.task_code
        if code is not None:
            pccs = [v["pcc"] for v in correlations.values() if "pcc" in v]
            if pccs:
                task_reports[parse_task_code(code)] = taskstats.CorrelationReport(
                    pcc=sum(pccs) / len(pccs),
                    n_pairs=len(pccs),
                    series_labels=("motion_amount", "tsquared"),
                )
    doc = {"streams": per_stream}
    try:
        comparison = taskstats.compare_task_correlations(task_reports)
        doc["comparison"] = {
            "mean_pcc_small": comparison.mean_pcc_small,
            "mean_pcc_large": comparison.mean_pcc_large,
            "percent_difference": comparison.percent_difference,
        }
    except MotionSpcError:
        pass
    (out / "correlations.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {out / 'correlations.json'}")
    return EXIT_OK


def cmd_chart(args) -> int:
    config = _effective_config(args)
    stream = read_stream(args.stream)
    selection = pipeline.resolve_selection(stream, config)
    task = config.task_code or stream.task_code or "stream"
    out = _out_dir(args)
    for step in config.steps:
        features = pipeline.step_feature_matrix(stream, selection, step, config)
        model = hotelling.fit_phase1(
            features, alpha=config.alpha, estimator=config.estimator,
            limit_family=config.limit_family, feature_kind=config.feature_kind,
        )
        series = hotelling.tsquared_series(model, features, phase="I")
        svg = charts.render_control_chart(
            series, model.ucl,
            charts.ChartSpec(title=f"{task} step {step}", y_label="T-squared"),
        )
        (out / f"{task}_{step}_chart.svg").write_text(svg)
    svg = charts.render_trajectory(
        stream, selection, charts.ChartSpec(title=f"{task} trajectories", width=1080, height=400)
    )
    (out / f"{task}_trajectory.svg").write_text(svg)
    print(f"wrote charts to {out}")
    return EXIT_OK


def cmd_synth(args) -> int:
    config = _effective_config(args)
    if config.landmark_ids is not None:
        selection = LandmarkSelection(ids=config.landmark_ids, label="explicit")
    elif config.task_code is not None:
        selection = selection_for_task(parse_task_code(config.task_code))
    else:
        selection = selection_for_task(parse_task_code("SGI"))
    bursts = []
    for text in args.burst or []:
        fields = text.split(":")
        if len(fields) not in (3, 4):
            raise ParseError(
                f"burst must be start:duration:dx,dy,dz[:ids], got {text!r}"
            )
        amplitude = tuple(float(v) for v in fields[2].split(","))
        ids = (
            tuple(int(v) for v in fields[3].split(","))
            if len(fields) == 4
            else selection.ids
        )
        bursts.append(
            synth.Burst(
                start_frame=int(fields[0]),
                duration=int(fields[1]),
                amplitude=amplitude,
                landmark_ids=ids,
            )
        )
    spec = synth.SynthSpec(
        seed=config.seed,
        n_frames=args.frames,
        selection=selection,
        fps=args.fps,
        jitter_std=args.jitter_std,
        bursts=tuple(bursts),
        task_code=config.task_code,
    )
    data = write_stream(synth.generate(spec))
    if args.output == "-":
        sys.stdout.buffer.write(data)
    else:
        Path(args.output).write_bytes(data)
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_monitor(args) -> int:
    config = _effective_config(args)
    step = config.steps[0]
    if args.baseline:
        baseline = read_stream(args.baseline)
        live = read_stream(sys.stdin if args.live == "-" else args.live)
    else:
        whole = read_stream(sys.stdin if args.live == "-" else args.live)
        baseline, live = pipeline.split_stream(whole, config.phase1_fraction)
    try:
        model = pipeline.fit_monitor_model(baseline, config, step)
    except MotionSpcError as exc:
        print(f"error: cannot fit baseline model: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS
    selection = pipeline.resolve_selection(baseline, config)
    features = pipeline.phase2_matrix(live, selection, config, step, prefix=baseline)
    log = hotelling.MonitorLog()
    series, warnings = hotelling.monitor_phase2(
        model, features.values, frame_indices=features.frame_indices, log=log
    )
    for idx, message in log.errors:
        print(json.dumps({"frame_index": idx, "error": message}), file=sys.stderr)
    for event in warnings:
        print(
            json.dumps(
                {
                    "frame_index": event.frame_index,
                    "tsquared": event.tsquared,
                    "ucl": event.ucl,
                    "excess_ratio": event.excess_ratio,
                }
            ),
            flush=True,
        )
    return EXIT_OK


def cmd_validate(args) -> int:
    stream = read_stream(args.stream)
    report = validate_stream(stream)
    for issue in report.issues:
        print(f"issue: {issue}")
    for lid, rate in sorted(report.missing_rates.items()):
        print(f"missing-rate: landmark {lid}: {rate:.4f}")
    print(f"frames: {report.n_frames}; issues: {len(report.issues)}")
    return EXIT_OK if report.ok else EXIT_ANALYSIS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motionspc",
        description="Joint-motion quantification and T-squared control-chart monitoring",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="retrospective per-step analysis of a stream")
    p.add_argument("stream")
    p.add_argument("--out-dir", default=".", dest="out_dir")
    _add_config_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("monitor", help="fit a baseline, then emit warnings for live frames")
    p.add_argument("live", help=f"live stream path ({STREAM_EXTENSION}) or - for stdin")
    p.add_argument("--baseline", help="baseline stream; omit to split the live input")
    _add_config_flags(p)
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("chart", help="render control-chart and trajectory SVGs")
    p.add_argument("stream")
    p.add_argument("--out-dir", default=".", dest="out_dir")
    _add_config_flags(p)
    p.set_defaults(func=cmd_chart)

    p = sub.add_parser("synth", help="generate a seeded synthetic stream")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--frames", type=int, default=1100)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--jitter-std", type=float, default=0.01, dest="jitter_std")
    p.add_argument("--burst", action="append",
                   help="start:duration:dx,dy,dz[:ids], repeatable")
    _add_config_flags(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("correlate", help="motion-amount vs T-squared correlation")
    p.add_argument("streams", nargs="+")
    p.add_argument("--out-dir", default=".", dest="out_dir")
    _add_config_flags(p)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("validate", help="structural validation of a stream file")
    p.add_argument("stream")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StreamTooShort, MotionSpcError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
