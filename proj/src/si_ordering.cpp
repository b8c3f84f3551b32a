// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/si_ordering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "seqiqa/errors.hpp"

namespace seqiqa {

LumaField to_luma(const ImageBuffer& image) {
  LumaField luma{image.width(), image.height(), {}};
  luma.values.resize(static_cast<std::size_t>(image.width()) * image.height());
  const auto data = image.data();
  if (image.channels() == 1) {
    std::transform(data.begin(), data.end(), luma.values.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
    return luma;
  }
  // Integer numerator, one rounding: gray pixels map to their exact value.
  for (std::size_t i = 0; i < luma.values.size(); ++i) {
    const int weighted = 299 * data[3 * i] + 587 * data[3 * i + 1] + 114 * data[3 * i + 2];
    luma.values[i] = weighted / 1000.0;
  }
  return luma;
}

RealField sobel_magnitude(const LumaField& luma) {
  if (luma.width < 3 || luma.height < 3) {
    throw DimensionTooSmall("Sobel needs at least 3x3, got " + std::to_string(luma.width) +
                            "x" + std::to_string(luma.height));
  }
  RealField out{luma.width - 2, luma.height - 2, {}};
  out.values.resize(static_cast<std::size_t>(out.width) * out.height);
  // Outer taps are added first so that mirrored neighbourhoods produce
  // bit-identical sums with opposite sign.
  for (int y = 1; y < luma.height - 1; ++y) {
    for (int x = 1; x < luma.width - 1; ++x) {
      const double right = (luma.at(x + 1, y - 1) + luma.at(x + 1, y + 1)) + 2.0 * luma.at(x + 1, y);
      const double left = (luma.at(x - 1, y - 1) + luma.at(x - 1, y + 1)) + 2.0 * luma.at(x - 1, y);
      const double bottom = (luma.at(x - 1, y + 1) + luma.at(x + 1, y + 1)) + 2.0 * luma.at(x, y + 1);
      const double top = (luma.at(x - 1, y - 1) + luma.at(x + 1, y - 1)) + 2.0 * luma.at(x, y - 1);
      const double gx = right - left;
      const double gy = bottom - top;
      out.at(x - 1, y - 1) = std::sqrt(gx * gx + gy * gy);
    }
  }
  return out;
}

double population_stddev(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  for (double& v : values) v = (v - mean) * (v - mean);
  std::sort(values.begin(), values.end());
  double ss = 0.0;
  for (double v : values) ss += v;
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double spatial_activity(const LumaField& luma) {
  return population_stddev(sobel_magnitude(luma).values);
}

double spatial_activity(const ImageBuffer& patch) { return spatial_activity(to_luma(patch)); }

std::vector<FeatureVector> order_by_si(std::vector<FeatureVector> vectors) {
  std::stable_sort(vectors.begin(), vectors.end(), [](const auto& a, const auto& b) {
    if (a.si != b.si) return a.si < b.si;
    return a.source_index < b.source_index;
  });
  return vectors;
}

std::vector<FeatureVector> apply_ordering(std::vector<FeatureVector> vectors, Ordering ordering,
                                          Rng& rng) {
  switch (ordering) {
    case Ordering::AscendingSi:
      return order_by_si(std::move(vectors));
    case Ordering::Raster:
      std::stable_sort(vectors.begin(), vectors.end(), [](const auto& a, const auto& b) {
        return a.source_index < b.source_index;
      });
      return vectors;
    case Ordering::Random:
      std::stable_sort(vectors.begin(), vectors.end(), [](const auto& a, const auto& b) {
        return a.source_index < b.source_index;
      });
      rng.shuffle(std::span<FeatureVector>(vectors));
      return vectors;
  }
  return vectors;
}

}  // namespace seqiqa
