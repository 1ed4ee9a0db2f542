from .validate import CleanRecord, read_dataset, validate
from .features import (
    BINARY_FEATURES,
    FEATURE_NAMES,
    FeatureStream,
    N_FEATURES,
    SCHEMA_HASH,
    build_matrix,
    extract_features,
    schema_hash,
)
from .dataset import (
    DatasetSplit,
    NormalizerStats,
    apply_normalizer,
    fit_normalizer,
    read_matrix,
    temporal_split,
    write_matrix,
)

__all__ = [
    "BINARY_FEATURES", "CleanRecord", "DatasetSplit", "FEATURE_NAMES",
    "FeatureStream", "N_FEATURES", "NormalizerStats", "SCHEMA_HASH",
    "apply_normalizer", "build_matrix", "extract_features", "fit_normalizer",
    "read_dataset", "read_matrix", "schema_hash", "temporal_split",
    "validate", "write_matrix",
]
