// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "seqiqa/core_types.hpp"
#include "seqiqa/manifest.hpp"

namespace seqiqa {

enum class SynthVariant {
  /// Noise over the whole image.
  Plain,
  /// Noise confined to a random non-empty subset of a 3x3 block layout. The
  /// score ignores how many blocks are affected, so an order-blind average
  /// over patches confounds noise extent with noise strength.
  OrderSensitive,
};

struct SynthConfig {
  int count = 200;
  std::uint64_t seed = 7;
  int size = 512;
  SynthVariant variant = SynthVariant::Plain;
};

inline constexpr double kSynthMaxNoise = 30.0;
inline constexpr double kSynthMaxBlur = 4.0;
inline constexpr double kSynthMosFloor = 20.0;

/// Ground-truth score: 100 - 80 * (0.5 * sigma / 30 + 0.5 * blur / 4). Equals
/// 100 for a clean image and kSynthMosFloor at maximum distortion.
double synth_mos(double noise_sigma, double blur_radius);

struct SynthImageParams {
  double noise_sigma = 0.0;
  double blur_radius = 0.0;
  std::uint16_t noisy_blocks = 0x1ff;  // bit b set: block b (row-major 3x3) is noisy
};

/// Seeded clean texture: colour gradient, a fine and a coarse grating and
/// low-contrast rectangles.
ImageBuffer synth_base_texture(int size, Rng& rng);

/// Separable box blur; a fractional radius gives the outermost taps
/// proportional weight. Edges are clamped.
ImageBuffer box_blur(const ImageBuffer& image, double radius);

/// Blur then additive Gaussian noise (restricted to the chosen blocks).
ImageBuffer degrade(const ImageBuffer& clean, const SynthImageParams& params, Rng& rng);

/// Writes `images/*.png`, `manifest.csv` (unsplit) and `synth_params.csv`
/// under `out_dir` and returns the manifest.
DatasetManifest generate_synthetic_dataset(const SynthConfig& cfg,
                                           const std::filesystem::path& out_dir);

}  // namespace seqiqa
