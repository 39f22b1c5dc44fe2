from approxem.experiments.batch import BatchResult, aggregate_rows, read_batch_csv, run_batch, run_replicate, write_batch_csv
from approxem.experiments.families import DEFAULT_GEOMETRY, FamilyGeometry, family_ids, make_family
from approxem.experiments.init import InitSpec, initialize, initialize_bg, isolated_label
from approxem.experiments.metrics import (
    MetricReport,
    best_permutation,
    gaussian_kl,
    match_and_score,
    relative_squared_errors,
)
from approxem.experiments.truth import bg_params_from_values, resolve_truth

__all__ = [
    "BatchResult",
    "aggregate_rows",
    "read_batch_csv",
    "run_batch",
    "run_replicate",
    "write_batch_csv",
    "DEFAULT_GEOMETRY",
    "FamilyGeometry",
    "family_ids",
    "make_family",
    "InitSpec",
    "initialize",
    "initialize_bg",
    "isolated_label",
    "MetricReport",
    "best_permutation",
    "gaussian_kl",
    "match_and_score",
    "relative_squared_errors",
    "bg_params_from_values",
    "resolve_truth",
]
