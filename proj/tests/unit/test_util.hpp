// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seqiqa/core_types.hpp"
#include "seqiqa/layers.hpp"

namespace seqiqa::testing {

inline ImageBuffer random_image(int w, int h, int ch, std::uint64_t seed) {
  Rng rng(seed);
  ImageBuffer img(w, h, ch);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

inline ImageBuffer constant_image(int w, int h, int ch, std::uint8_t value) {
  return ImageBuffer(w, h, ch, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * ch, value));
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.uniform(-1.0, 1.0);
  return m;
}

inline SequenceInput random_sequence(std::size_t T, std::size_t D, Rng& rng, double scale = 1.0) {
  SequenceInput s;
  s.steps = random_matrix(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(D), rng, scale);
  s.active.assign(T, 1);
  return s;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("seqiqa_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({1e-6, std::abs(a), std::abs(b)});
}

}  // namespace seqiqa::testing
