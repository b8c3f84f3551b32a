// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/core_types.hpp"

#include <cmath>
#include <numbers>

#include "seqiqa/errors.hpp"

namespace seqiqa {

ImageBuffer::ImageBuffer(int width, int height, int channels)
    : ImageBuffer(width, height, channels,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                            std::max(height, 0) * std::max(channels, 0))) {}

ImageBuffer::ImageBuffer(int width, int height, int channels,
                         std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1) {
    throw ValidationError("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  if (channels != 1 && channels != 3) {
    throw ValidationError("image must have 1 or 3 channels, got " +
                          std::to_string(channels));
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw ValidationError("image data length does not match dimensions");
  }
}

ImageBuffer ImageBuffer::crop(int x, int y, int size_x, int size_y) const {
  if (x < 0 || y < 0 || x + size_x > width_ || y + size_y > height_) {
    throw GridMismatch("crop window outside image bounds");
  }
  ImageBuffer out(size_x, size_y, channels_);
  const std::size_t row_bytes = static_cast<std::size_t>(size_x) * channels_;
  for (int row = 0; row < size_y; ++row) {
    const auto* src = data_.data() + index(x, y + row, 0);
    std::copy(src, src + row_bytes, out.data_.data() + row * row_bytes);
  }
  return out;
}

std::string_view to_string(ScaleGroup group) {
  return group == ScaleGroup::Low ? "low" : "high";
}

std::size_t FeatureSequence::count(ScaleGroup group) const noexcept {
  std::size_t n = 0;
  for (const auto& v : vectors) n += v.scale_group == group;
  return n;
}

FeatureSequence FeatureSequence::filtered(ScaleGroup group) const {
  FeatureSequence out{image_id, dim, {}};
  for (const auto& v : vectors) {
    if (v.scale_group == group) out.vectors.push_back(v);
  }
  return out;
}

void FeatureSequence::validate() const {
  bool seen_high = false;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (v.values.size() != dim) {
      throw DimMismatch("feature vector " + std::to_string(i) + " of '" + image_id +
                        "' has length " + std::to_string(v.values.size()) +
                        ", expected " + std::to_string(dim));
    }
    if (!std::isfinite(v.si) || v.si < 0.0) {
      throw ValidationError("spatial activity must be finite and non-negative");
    }
    for (double x : v.values) {
      if (!std::isfinite(x)) throw ValidationError("non-finite feature value");
    }
    if (v.scale_group == ScaleGroup::High) {
      seen_high = true;
    } else if (seen_high) {
      throw ValidationError("LOW-group vector follows a HIGH-group vector in '" +
                            image_id + "'");
    }
  }
}

double rescale_mos(double mos_raw) {
  if (!(mos_raw >= 0.0 && mos_raw <= 100.0)) {
    throw ValidationError("MOS must lie in [0, 100], got " + std::to_string(mos_raw));
  }
  return mos_raw / 100.0;
}

double unscale_mos(double mos_unit) { return mos_unit * 100.0; }

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("Rng::below requires n > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

}  // namespace seqiqa
