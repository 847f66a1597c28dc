"""End-to-end analysis wiring: stream -> motion series, control charts, stats.

The CLI is a thin shell over these functions; everything here is a pure
function of (stream, config).
"""

from __future__ import annotations

from . import hotelling, motion, taskstats
from .errors import DegenerateCovariance, MotionSpcError, ZeroVariance
from .landmarks import (
    LandmarkSelection,
    LandmarkStream,
    parse_task_code,
    selection_for_task,
)
from .streamio import AnalysisConfig, ResultBundle, StepResult, _stats_dict


def resolve_selection(stream: LandmarkStream, config: AnalysisConfig) -> LandmarkSelection:
    """Selection from explicit ids, config task code, or stream metadata."""
    if config.landmark_ids is not None:
        return LandmarkSelection(ids=tuple(config.landmark_ids), label="explicit")
    code = config.task_code or stream.task_code
    if code is None:
        raise MotionSpcError(
            "no landmark selection: provide landmark_ids, a task code, or "
            "stream metadata with task_code"
        )
    return selection_for_task(parse_task_code(code))


def step_feature_matrix(stream, selection, step, config: AnalysisConfig):
    """Feature matrix monitored at a step, per the configured feature kind."""
    if config.feature_kind == "motion-vectors":
        return motion.motion_vector_matrix(
            stream, selection, step,
            gap_policy=config.gap_policy,
            visibility_threshold=config.visibility_threshold,
        )
    if config.feature_kind == "positions":
        from .landmarks import select_features

        return select_features(
            stream, selection,
            gap_policy=config.gap_policy,
            visibility_threshold=config.visibility_threshold,
        )
    raise ValueError(f"unknown feature kind {config.feature_kind!r}")


def _model_dict(model: hotelling.PhaseIModel) -> dict:
    return {
        "p": model.p,
        "n": model.n,
        "alpha": model.alpha,
        "ucl": model.ucl,
        "lcl": model.lcl,
        "estimator": model.estimator,
        "inverse_method": model.inverse_method,
        "limit_family": model.limit_family,
        "feature_kind": model.feature_kind,
    }


def analyze_step(stream, selection, step: int, config: AnalysisConfig) -> StepResult:
    """Retrospective (Phase I) analysis of one stream at one step."""
    series = motion.motion_series(
        stream, selection, step,
        gap_policy=config.gap_policy,
        visibility_threshold=config.visibility_threshold,
    )
    features = step_feature_matrix(stream, selection, step, config)
    model = hotelling.fit_phase1(
        features,
        alpha=config.alpha,
        estimator=config.estimator,
        limit_family=config.limit_family,
        feature_kind=config.feature_kind,
    )
    tsq = hotelling.tsquared_series(model, features, phase="I")
    warning_frames = tuple(
        int(fi) for fi, t in zip(tsq.frame_indices, tsq.values) if t > model.ucl
    )
    accel = series.accelerations
    return StepResult(
        step=step,
        motion_amount=_stats_dict(taskstats.summarize(series.amounts)),
        velocity=_stats_dict(taskstats.summarize(series.velocities)),
        acceleration=_stats_dict(taskstats.summarize(accel)) if accel.size else None,
        tsquared=_stats_dict(taskstats.summarize(tsq.values, ucl=model.ucl)),
        rmsd=motion.rmsd(series.amounts),
        model=_model_dict(model),
        warning_frames=warning_frames,
    )


def analyze_stream(stream: LandmarkStream, config: AnalysisConfig, parallel: bool = False) -> ResultBundle:
    """Full per-step retrospective analysis of a stream."""
    selection = resolve_selection(stream, config)
    if parallel:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor() as pool:
            steps = tuple(
                pool.map(lambda s: analyze_step(stream, selection, s, config), config.steps)
            )
    else:
        steps = tuple(analyze_step(stream, selection, s, config) for s in config.steps)
    metadata = {
        "task_code": config.task_code or stream.task_code,
        "n_frames": len(stream),
        "fps": stream.fps,
        "unit_label": stream.metadata.get("unit_label", config.unit_label),
        "selection": list(selection.ids),
    }
    return ResultBundle(metadata=metadata, config=config.to_dict(), steps=steps)


def correlate_stream(stream: LandmarkStream, config: AnalysisConfig) -> dict:
    """Per-step Pearson correlation between motion amount and T-squared.

    Both series are computed over motion vectors at the step's lag, so they
    index the same frame set by construction.
    """
    selection = resolve_selection(stream, config)
    out = {}
    for step in config.steps:
        key = f"step_{step}"
        try:
            series = motion.motion_series(
                stream, selection, step,
                gap_policy=config.gap_policy,
                visibility_threshold=config.visibility_threshold,
            )
            features = motion.motion_vector_matrix(
                stream, selection, step,
                gap_policy=config.gap_policy,
                visibility_threshold=config.visibility_threshold,
            )
            model = hotelling.fit_phase1(
                features,
                alpha=config.alpha,
                estimator=config.estimator,
                limit_family=config.limit_family,
                feature_kind="motion-vectors",
            )
            tsq = hotelling.tsquared_series(model, features, phase="I")
            report = taskstats.pearson(
                series.amounts, tsq.values, labels=("motion_amount", "tsquared")
            )
            out[key] = {"pcc": report.pcc, "n_pairs": report.n_pairs}
        except (ZeroVariance, DegenerateCovariance) as exc:
            out[key] = {"error": f"zero variance: {exc}"}
    return out


def fit_monitor_model(
    baseline: LandmarkStream, config: AnalysisConfig, step: int
) -> hotelling.PhaseIModel:
    selection = resolve_selection(baseline, config)
    features = step_feature_matrix(baseline, selection, step, config)
    return hotelling.fit_phase1(
        features,
        alpha=config.alpha,
        estimator=config.estimator,
        limit_family=config.limit_family,
        feature_kind=config.feature_kind,
    )


def split_stream(stream: LandmarkStream, fraction: float) -> tuple[LandmarkStream, LandmarkStream]:
    """Two-part split of one recording: offline fitting part, online part."""
    cut = int(len(stream) * fraction)
    cut = max(2, min(cut, len(stream) - 1))
    first = LandmarkStream(fps=stream.fps, frames=stream.frames[:cut], metadata=dict(stream.metadata))
    second = LandmarkStream(fps=stream.fps, frames=stream.frames[cut:], metadata=dict(stream.metadata))
    return first, second


def phase2_matrix(
    live: LandmarkStream,
    selection: LandmarkSelection,
    config: AnalysisConfig,
    step: int,
    prefix: LandmarkStream | None = None,
):
    """Feature rows for Phase II frames, optionally seeded with the tail of
    the baseline so motion vectors are defined from the first live frame."""
    if config.feature_kind == "positions" or prefix is None:
        return step_feature_matrix(live, selection, step, config)
    lag = step + 1
    tail = prefix.frames[-lag:]
    joined = LandmarkStream(
        fps=live.fps, frames=tail + live.frames, metadata=dict(live.metadata)
    )
    # The first lag rows consume the prefix tail, so the resulting rows are
    # exactly one motion vector per live frame.
    return step_feature_matrix(joined, selection, step, config)
