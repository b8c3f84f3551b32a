// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "seqiqa/core_types.hpp"

namespace seqiqa {

/// Row-major real-valued field, one value per pixel.
struct RealField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

using LumaField = RealField;

/// BT.601 luma (0.299 R + 0.587 G + 0.114 B); single-channel input passes through.
LumaField to_luma(const ImageBuffer& image);

/// Gradient magnitude of the 3x3 Sobel pair over interior pixels only, so the
/// result is (width - 2) x (height - 2). Throws DimensionTooSmall below 3x3.
RealField sobel_magnitude(const LumaField& luma);

/// Population standard deviation. The sum runs over sorted values, which makes
/// the result independent of the field's traversal order.
double population_stddev(std::vector<double> values);

/// Spatial activity: population std of the Sobel magnitude of the luma.
double spatial_activity(const ImageBuffer& patch);
double spatial_activity(const LumaField& luma);

enum class Ordering { AscendingSi, Raster, Random };

/// Stable ascending sort by SI; ties keep source_index order.
std::vector<FeatureVector> order_by_si(std::vector<FeatureVector> vectors);

/// Applies `ordering` within one scale group. Raster sorts by source_index;
/// Random draws a permutation from `rng`.
std::vector<FeatureVector> apply_ordering(std::vector<FeatureVector> vectors, Ordering ordering,
                                          Rng& rng);

}  // namespace seqiqa
