"""Landmark-stream file format, analysis config, and result serialization.

Stream files are line-delimited JSON (extension ``.lmks.jsonl``): the
first line is a header object, every following line one frame object with
landmarks as ``[id, x, y, z, visibility]`` tuples sorted by id. Key order
is fixed and floats use shortest round-trip decimals, so serialization is
canonical: equal inputs give byte-identical output.
"""

from __future__ import annotations

import dataclasses
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, SchemaVersionError, SerializationError
from .landmarks import LandmarkFrame, LandmarkStream

FORMAT_VERSION = "motionspc/1"
STREAM_EXTENSION = ".lmks.jsonl"

_COMPACT = {"separators": (",", ":")}


def _dumps(obj) -> str:
    return json.dumps(obj, **_COMPACT)


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs for a full analysis run; flags override file values in the CLI."""

    task_code: str | None = None
    landmark_ids: tuple[int, ...] | None = None
    steps: tuple[int, ...] = (0, 2, 4)
    alpha: float = 0.0027
    estimator: str = "sample"
    limit_family: str = "f"
    feature_kind: str = "motion-vectors"
    phase1_fraction: float = 0.5
    visibility_threshold: float = 0.5
    gap_policy: str = "carry_forward"
    unit_label: str = "normalized"
    seed: int = 0

    def __post_init__(self):
        if not self.steps:
            raise ValueError("steps must be non-empty")
        if any(s < 0 for s in self.steps):
            raise ValueError("steps must be non-negative")
        if not 0 < self.phase1_fraction < 1:
            raise ValueError("phase1_fraction must be in (0,1)")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["steps"] = list(self.steps)
        if self.landmark_ids is not None:
            d["landmark_ids"] = list(self.landmark_ids)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ParseError(f"unknown config fields: {sorted(unknown)}")
        d = dict(d)
        if "steps" in d:
            d["steps"] = tuple(d["steps"])
        if d.get("landmark_ids") is not None:
            d["landmark_ids"] = tuple(d["landmark_ids"])
        return cls(**d)


def read_config(source) -> AnalysisConfig:
    text = _read_text(source)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"config is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object")
    try:
        return AnalysisConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad config: {exc}") from None


def write_config(config: AnalysisConfig) -> bytes:
    return (json.dumps(config.to_dict(), indent=2) + "\n").encode()


def _read_text(source) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text()
    data = source.read()
    return data.decode() if isinstance(data, bytes) else data


def _major_version(version: str) -> str:
    return version.split("/", 1)[0]


def read_stream(source) -> LandmarkStream:
    """Parse a line-delimited stream document into a LandmarkStream."""
    text = _read_text(source)
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty document", line=1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header JSON: {exc}", line=1) from None
    if not isinstance(header, dict):
        raise ParseError("header must be a JSON object", line=1)
    version = header.get("version")
    if version is None:
        raise ParseError("header missing required field 'version'", line=1)
    if _major_version(version) != _major_version(FORMAT_VERSION):
        raise SchemaVersionError(
            f"unsupported version {version!r} (reader supports {FORMAT_VERSION})",
            line=1,
        )
    if "fps" not in header:
        raise ParseError("header missing required field 'fps'", line=1)
    fps = header["fps"]
    if not isinstance(fps, (int, float)) or fps <= 0:
        raise ParseError(f"fps must be a positive number, got {fps!r}", line=1)

    metadata = {
        k: header[k]
        for k in ("task_code", "participant", "source", "unit_label")
        if header.get(k) is not None
    }

    frames = []
    prev_index = None
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            rec = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad frame JSON: {exc}", line=lineno) from None
        if "frame_index" not in rec:
            raise ParseError("frame record missing 'frame_index'", line=lineno)
        idx = rec["frame_index"]
        if prev_index is not None and idx <= prev_index:
            raise ParseError(
                f"frame_index {idx} not increasing (previous {prev_index})",
                line=lineno,
            )
        prev_index = idx
        landmarks = {}
        visibility = {}
        for entry in rec.get("landmarks", []):
            if len(entry) not in (4, 5):
                raise ParseError(
                    f"landmark entry must be [id,x,y,z(,visibility)], got {entry!r}",
                    line=lineno,
                )
            lid = int(entry[0])
            landmarks[lid] = (float(entry[1]), float(entry[2]), float(entry[3]))
            if len(entry) == 5 and entry[4] is not None:
                visibility[lid] = float(entry[4])
        filled = frozenset(rec.get("filled", []))
        frames.append(
            LandmarkFrame(
                frame_index=idx,
                timestamp_s=idx / fps,
                landmarks=landmarks,
                visibility=visibility or None,
                filled=filled,
            )
        )
    return LandmarkStream(fps=float(fps), frames=tuple(frames), metadata=metadata)


def write_stream(stream: LandmarkStream) -> bytes:
    """Canonical byte serialization of a LandmarkStream."""
    if not stream.frames:
        raise SerializationError("refusing to serialize a stream with no frames")
    header = {"version": FORMAT_VERSION, "fps": stream.fps}
    for key in ("task_code", "participant", "source", "unit_label"):
        if stream.metadata.get(key) is not None:
            header[key] = stream.metadata[key]
    out = io.StringIO()
    out.write(_dumps(header) + "\n")
    for frame in stream.frames:
        rec = {"frame_index": frame.frame_index}
        entries = []
        for lid in sorted(frame.landmarks):
            x, y, z = frame.landmarks[lid]
            entry = [lid, x, y, z]
            if frame.visibility is not None and lid in frame.visibility:
                entry.append(frame.visibility[lid])
            entries.append(entry)
        rec["landmarks"] = entries
        if frame.filled:
            rec["filled"] = sorted(frame.filled)
        out.write(_dumps(rec) + "\n")
    return out.getvalue().encode()


def write_stream_to(stream: LandmarkStream, path) -> None:
    Path(path).write_bytes(write_stream(stream))


# ---------------------------------------------------------------------------
# Result bundles
# ---------------------------------------------------------------------------

def _stats_dict(stats) -> dict:
    d = {
        "count": stats.count,
        "mean": stats.mean,
        "median": stats.median,
        "std_dev": stats.std_dev,
        "min": stats.min,
        "max": stats.max,
    }
    if stats.warnings is not None:
        d["warnings"] = stats.warnings
    return d


@dataclass(frozen=True)
class StepResult:
    """Per-step analysis outputs in summary-table form."""

    step: int
    motion_amount: dict
    velocity: dict
    acceleration: dict | None
    tsquared: dict
    rmsd: float
    model: dict  # p, n, alpha, ucl, estimator, inverse_method, limit_family, feature_kind
    warning_frames: tuple[int, ...] = ()


@dataclass(frozen=True)
class ResultBundle:
    metadata: dict
    config: dict
    steps: tuple[StepResult, ...]
    correlations: dict = field(default_factory=dict)


def write_results(bundle: ResultBundle) -> bytes:
    doc = {
        "version": FORMAT_VERSION,
        "metadata": bundle.metadata,
        "config": bundle.config,
        "std_dev_convention": "sample (1/(n-1)); rmsd uses population (1/n)",
        "steps": [
            {
                "step": s.step,
                "motion_amount": s.motion_amount,
                "velocity": s.velocity,
                **({"acceleration": s.acceleration} if s.acceleration else {}),
                "tsquared": s.tsquared,
                "rmsd": s.rmsd,
                "model": s.model,
                "warning_frames": list(s.warning_frames),
            }
            for s in bundle.steps
        ],
    }
    if bundle.correlations:
        doc["correlations"] = bundle.correlations
    return (json.dumps(doc, indent=2) + "\n").encode()


def read_results(source) -> dict:
    return json.loads(_read_text(source))


_TABLE_ROWS = ("count", "mean", "median", "std_dev", "min", "max", "warnings")


def render_results_table(bundle: ResultBundle) -> str:
    """Plain-text rendering: one block per series kind, steps as columns."""
    steps = bundle.steps
    lines = []
    task = bundle.metadata.get("task_code", "?")
    lines.append(f"Task {task}  (unit: {bundle.metadata.get('unit_label', '?')})")
    for kind in ("motion_amount", "velocity", "acceleration", "tsquared"):
        blocks = [getattr(s, kind) for s in steps]
        if any(b is None for b in blocks):
            continue
        lines.append("")
        lines.append(kind.replace("_", " ").title())
        header = ["Statistic"] + [f"Step {s.step}" for s in steps]
        rows = [header]
        for row in _TABLE_ROWS:
            if not any(row in b for b in blocks):
                continue
            cells = [row]
            for b in blocks:
                v = b.get(row)
                if v is None:
                    cells.append("-")
                elif isinstance(v, int):
                    cells.append(str(v))
                else:
                    cells.append(f"{v:.6f}")
            rows.append(cells)
        widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
        for r in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)))
    lines.append("")
    lines.append("RMSD per step: " + ", ".join(f"step {s.step}: {s.rmsd:.6f}" for s in steps))
    if bundle.correlations:
        lines.append("Correlations: " + _dumps(bundle.correlations))
    return "\n".join(lines) + "\n"
