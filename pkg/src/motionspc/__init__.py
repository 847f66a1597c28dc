"""Joint-motion quantification and Hotelling's T-squared monitoring for
pose-landmark streams."""

from .landmarks import (
    LARGE_TASK_SELECTION,
    SMALL_TASK_SELECTION,
    FeatureMatrix,
    LandmarkFrame,
    LandmarkSelection,
    LandmarkStream,
    TaskCode,
    parse_task_code,
    select_features,
    selection_for_task,
    validate_stream,
)
from .motion import (
    MotionRecord,
    MotionSeries,
    StepSpec,
    motion_amount,
    motion_series,
    motion_vector_matrix,
    motion_vectors,
    rmsd,
)
from .hotelling import (
    PhaseIModel,
    TsquaredSeries,
    WarningEvent,
    fit_phase1,
    monitor_phase2,
    tsquared,
    tsquared_series,
    ucl,
    warning_count,
)
from .taskstats import (
    ComparisonReport,
    CorrelationReport,
    SummaryStats,
    compare_task_correlations,
    pearson,
    summarize,
)
from .streamio import (
    AnalysisConfig,
    ResultBundle,
    read_config,
    read_stream,
    write_config,
    write_results,
    write_stream,
)
from .synth import Burst, SynthSpec, generate, inject_anomaly
from .charts import ChartSpec, render_control_chart, render_trajectory

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
