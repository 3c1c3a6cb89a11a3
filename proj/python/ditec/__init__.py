"""Trace-transform image descriptors and the classifiers used to evaluate them.

Arrays are NumPy float64 unless noted. Configuration strings use the same
``key = value`` format as the command-line tool's ``--config`` files.
"""

from ._ditec import (
    DataError,
    compress_channel,
    contribution_mask,
    cross_validate,
    dct2,
    default_config,
    diagonal_bin_count,
    evaluate,
    extract_features,
    extract_image,
    full_descriptor_length,
    greedy_fss,
    ingest,
    mask_metrics,
    metrics,
    misclassification_graph,
    mu_kurtosis,
    read_image,
    reduction_factor,
    trace_transform,
)

__all__ = [
    "DataError",
    "compress_channel",
    "contribution_mask",
    "cross_validate",
    "dct2",
    "default_config",
    "diagonal_bin_count",
    "evaluate",
    "extract_features",
    "extract_image",
    "full_descriptor_length",
    "greedy_fss",
    "ingest",
    "mask_metrics",
    "metrics",
    "misclassification_graph",
    "mu_kurtosis",
    "read_image",
    "reduction_factor",
    "trace_transform",
]
