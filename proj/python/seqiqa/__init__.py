# Copyright 2026 The seqiqa Authors.
# SPDX-License-Identifier: Apache-2.0
"""Blind image quality prediction from ordered multi-scale patch sequences."""

from ._seqiqa import (
    Error,
    FormatError,
    Model,
    ValidationError,
    build_sequence,
    compute_grid,
    compute_metrics,
    pearson,
    read_feature_file,
    spatial_activity,
    spearman,
    stat_feature_dim,
    stat_features,
    synth_mos,
)

__all__ = [
    "Error",
    "FormatError",
    "Model",
    "ValidationError",
    "build_sequence",
    "compute_grid",
    "compute_metrics",
    "pearson",
    "read_feature_file",
    "spatial_activity",
    "spearman",
    "stat_feature_dim",
    "stat_features",
    "synth_mos",
]
