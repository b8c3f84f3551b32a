// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/multires.hpp"

#include <iostream>

#include "seqiqa/errors.hpp"
#include "seqiqa/patch_sampler.hpp"

namespace seqiqa {

void MultiresConfig::validate() const {
  if (scale_factor != 0.5) throw ValidationError("scale_factor must be 0.5");
  if (patch_size < 3) throw ValidationError("patch_size must be at least 3");
}

ImageBuffer downscale_half(const ImageBuffer& image) {
  if (image.width() < 2 || image.height() < 2) {
    throw DimensionTooSmall("downscale_half needs at least 2x2 pixels");
  }
  const int out_w = (image.width() + 1) / 2;
  const int out_h = (image.height() + 1) / 2;
  const int channels = image.channels();
  ImageBuffer out(out_w, out_h, channels);
  for (int y = 0; y < out_h; ++y) {
    const int y1 = std::min(2 * y + 2, image.height());
    for (int x = 0; x < out_w; ++x) {
      const int x1 = std::min(2 * x + 2, image.width());
      const int count = (y1 - 2 * y) * (x1 - 2 * x);
      for (int c = 0; c < channels; ++c) {
        int sum = 0;
        for (int sy = 2 * y; sy < y1; ++sy) {
          for (int sx = 2 * x; sx < x1; ++sx) sum += image.at(sx, sy, c);
        }
        // round(sum / count), halves away from zero, in exact integer arithmetic
        out.at(x, y, c) = static_cast<std::uint8_t>((2 * sum + count) / (2 * count));
      }
    }
  }
  return out;
}

namespace {

std::vector<FeatureVector> encode_group(const ImageBuffer& image, ScaleGroup group,
                                        const MultiresConfig& cfg,
                                        const FeatureBackend& backend, Rng& order_rng) {
  const PatchGrid grid = compute_grid(image.width(), image.height(), cfg.patch_size);
  std::vector<FeatureVector> vectors;
  vectors.reserve(grid.positions.size());
  for (const Patch& patch : extract_patches(image, grid, group)) {
    FeatureVector v = extract_features(backend, patch);
    if (v.values.size() != backend.dim()) {
      throw DimMismatch("backend produced a vector of the wrong length");
    }
    v.si = spatial_activity(patch.pixels);
    vectors.push_back(std::move(v));
  }
  return apply_ordering(std::move(vectors), cfg.ordering, order_rng);
}

}  // namespace

FeatureSequence build_sequence(const ImageBuffer& image, const std::string& image_id,
                               const MultiresConfig& cfg, const FeatureBackend& backend) {
  cfg.validate();
  FeatureSequence seq{image_id, backend.dim(), {}};
  Rng order_rng(cfg.order_seed);

  if (cfg.enable_low_scale) {
    ImageBuffer low = downscale_half(image);
    if (low.width() < cfg.patch_size || low.height() < cfg.patch_size) {
      const std::string msg = "half-scale image of '" + image_id + "' (" +
                              std::to_string(low.width()) + "x" +
                              std::to_string(low.height()) + ") is smaller than the patch";
      if (cfg.strict_low_scale) throw LowScaleTooSmall(msg);
      std::clog << "warning: " << msg << "; LOW group skipped\n";
    } else {
      seq.vectors = encode_group(low, ScaleGroup::Low, cfg, backend, order_rng);
    }
  }
  auto high = encode_group(image, ScaleGroup::High, cfg, backend, order_rng);
  seq.vectors.insert(seq.vectors.end(), std::make_move_iterator(high.begin()),
                     std::make_move_iterator(high.end()));
  return seq;
}

}  // namespace seqiqa
