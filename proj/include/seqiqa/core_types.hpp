// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqiqa {

/// Interleaved 8-bit raster, row-major. Channels is 1 (gray) or 3 (RGB).
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels);
  ImageBuffer(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t at(int x, int y, int c = 0) const {
    return data_[index(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  /// Copy of the `size_x` x `size_y` window whose top-left corner is (x, y).
  ImageBuffer crop(int x, int y, int size_x, int size_y) const;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

enum class ScaleGroup : std::uint8_t { Low = 0, High = 1 };

std::string_view to_string(ScaleGroup group);

struct Patch {
  ImageBuffer pixels;
  int origin_x = 0;
  int origin_y = 0;
  ScaleGroup scale_group = ScaleGroup::High;
  int source_index = 0;  // row-major grid position
};

struct FeatureVector {
  std::vector<double> values;
  double si = 0.0;
  ScaleGroup scale_group = ScaleGroup::High;
  int source_index = 0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Ordered per-patch features of one image. LOW-group vectors come first.
struct FeatureSequence {
  std::string image_id;
  std::size_t dim = 0;
  std::vector<FeatureVector> vectors;

  std::size_t size() const noexcept { return vectors.size(); }
  std::size_t count(ScaleGroup group) const noexcept;

  /// Copy holding only the vectors of `group`, in their current order.
  FeatureSequence filtered(ScaleGroup group) const;

  /// Checks dims, finiteness, SI >= 0 and LOW-before-HIGH grouping.
  void validate() const;

  friend bool operator==(const FeatureSequence&, const FeatureSequence&) = default;
};

/// Maps a 0-100 opinion score onto [0, 1].
double rescale_mos(double mos_raw);
/// Inverse of rescale_mos.
double unscale_mos(double mos_unit);

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All derived draws (uniform reals, normals, bounded integers,
/// shuffles) are implemented here rather than through <random> distributions,
/// whose algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer on [0, n), unbiased.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent child stream seeded from this one.
  Rng split() { return Rng(next_u64()); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace seqiqa
