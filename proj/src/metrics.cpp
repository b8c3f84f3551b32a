// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqiqa/errors.hpp"

namespace seqiqa {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  if (x.size() < 2) throw ValidationError("pearson: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("correlation undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> fractional_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

double rmse(std::span<const double> pred_unit, std::span<const double> target_unit) {
  if (pred_unit.size() != target_unit.size()) throw ValidationError("rmse: length mismatch");
  if (pred_unit.empty()) throw ValidationError("rmse: empty input");
  double ss = 0.0;
  for (std::size_t i = 0; i < pred_unit.size(); ++i) {
    const double e = 100.0 * pred_unit[i] - 100.0 * target_unit[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(pred_unit.size()));
}

Metrics compute_metrics(std::span<const double> pred_unit, std::span<const double> target_unit) {
  Metrics m;
  m.rmse = rmse(pred_unit, target_unit);
  if (pred_unit.size() < 2) {
    m.degenerate = "fewer than two samples";
    return m;
  }
  try {
    m.scc = spearman(pred_unit, target_unit);
  } catch (const DegenerateInput& e) {
    m.degenerate = std::string("scc: ") + e.what();
  }
  try {
    m.pcc = pearson(pred_unit, target_unit);
  } catch (const DegenerateInput& e) {
    if (!m.degenerate.empty()) m.degenerate += "; ";
    m.degenerate += std::string("pcc: ") + e.what();
  }
  return m;
}

}  // namespace seqiqa
