// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/patch_sampler.hpp"

#include <string>

#include "seqiqa/errors.hpp"

namespace seqiqa {

std::vector<int> axis_origins(int length, int patch) {
  if (patch < 1) throw ValidationError("patch size must be positive");
  if (length < patch) {
    throw DimensionTooSmall("dimension " + std::to_string(length) +
                            " is smaller than patch size " + std::to_string(patch));
  }
  const int n = (length + patch - 1) / patch;
  if (n == 1) return {0};

  const int span = length - patch;
  const int stride = span / (n - 1);
  std::vector<int> origins(n);
  for (int i = 0; i < n - 1; ++i) origins[i] = i * stride;
  origins[n - 1] = span;

  if (origins[n - 1] - origins[n - 2] > patch) {
    for (int i = 0; i < n; ++i) {
      origins[i] = static_cast<int>(static_cast<long long>(i) * span / (n - 1));
    }
  }
  return origins;
}

PatchGrid compute_grid(int width, int height, int patch_size) {
  if (width < patch_size || height < patch_size) {
    throw DimensionTooSmall("image " + std::to_string(width) + "x" + std::to_string(height) +
                            " is smaller than patch size " + std::to_string(patch_size));
  }
  const auto xs = axis_origins(width, patch_size);
  const auto ys = axis_origins(height, patch_size);

  PatchGrid grid;
  grid.image_width = width;
  grid.image_height = height;
  grid.patch_size = patch_size;
  grid.cols = static_cast<int>(xs.size());
  grid.rows = static_cast<int>(ys.size());
  grid.stride_x = grid.cols > 1 ? (width - patch_size) / (grid.cols - 1) : 0;
  grid.stride_y = grid.rows > 1 ? (height - patch_size) / (grid.rows - 1) : 0;
  grid.positions.reserve(xs.size() * ys.size());
  for (int y : ys) {
    for (int x : xs) grid.positions.push_back({x, y});
  }
  return grid;
}

std::vector<Patch> extract_patches(const ImageBuffer& image, const PatchGrid& grid,
                                   ScaleGroup scale_group) {
  if (image.width() != grid.image_width || image.height() != grid.image_height) {
    throw GridMismatch("grid computed for " + std::to_string(grid.image_width) + "x" +
                       std::to_string(grid.image_height) + ", image is " +
                       std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  std::vector<Patch> patches;
  patches.reserve(grid.positions.size());
  int index = 0;
  for (const auto& pos : grid.positions) {
    patches.push_back(Patch{image.crop(pos.x, pos.y, grid.patch_size, grid.patch_size),
                            pos.x, pos.y, scale_group, index++});
  }
  return patches;
}

}  // namespace seqiqa
