// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "seqiqa/core_types.hpp"
#include "seqiqa/feature_backend.hpp"
#include "seqiqa/si_ordering.hpp"

namespace seqiqa {

struct MultiresConfig {
  bool enable_low_scale = true;
  double scale_factor = 0.5;  // only 0.5 is supported
  int patch_size = 224;
  Ordering ordering = Ordering::AscendingSi;
  std::uint64_t order_seed = 0;  // used by Ordering::Random
  /// When false, a downscaled image smaller than the patch skips the LOW
  /// group with a warning; when true it raises LowScaleTooSmall.
  bool strict_low_scale = false;

  void validate() const;
};

/// Halves both dimensions (rounding up) by area averaging. Even interiors use
/// the 2x2 box mean; a trailing odd row/column averages the 1x2, 2x1 or 1x1
/// remainder. Means are rounded to the nearest integer, ties upward.
ImageBuffer downscale_half(const ImageBuffer& image);

/// LOW group (patches of the half-scale image) followed by HIGH group
/// (patches of `image`), each ordered independently per `cfg.ordering`.
FeatureSequence build_sequence(const ImageBuffer& image, const std::string& image_id,
                               const MultiresConfig& cfg, const FeatureBackend& backend);

}  // namespace seqiqa
