// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seqiqa {

/// Pearson linear correlation (population moments). Throws ValidationError on
/// length mismatch or fewer than two samples, DegenerateInput when either side
/// has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Spearman rank correlation: Pearson over fractional ranks.
double spearman(std::span<const double> x, std::span<const double> y);

/// Root-mean-squared error of [0, 1] scores, reported on the 0-100 scale.
double rmse(std::span<const double> pred_unit, std::span<const double> target_unit);

struct Metrics {
  std::optional<double> scc;
  std::optional<double> pcc;
  double rmse = 0.0;
  std::string degenerate;  // why scc / pcc are missing, if they are
};

/// All three metrics. Degenerate correlations are left empty with a reason
/// instead of propagating NaN.
Metrics compute_metrics(std::span<const double> pred_unit, std::span<const double> target_unit);

}  // namespace seqiqa
