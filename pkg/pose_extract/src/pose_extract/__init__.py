from .extract import (
    BACKENDS,
    EstimatorUnavailable,
    ExtractionError,
    ExtractionJob,
    MediaPipeBackend,
    SyntheticBackend,
    UnreadableVideo,
    extract,
)

__version__ = "0.1.0"
