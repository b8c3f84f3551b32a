// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "seqiqa/core_types.hpp"

namespace seqiqa {

struct GridPosition {
  int x = 0;
  int y = 0;
  friend bool operator==(const GridPosition&, const GridPosition&) = default;
};

/// Regular overlapping tiling of a W x H image by P x P patches.
struct PatchGrid {
  int image_width = 0;
  int image_height = 0;
  int patch_size = 0;
  int stride_x = 0;  // 0 when there is a single column
  int stride_y = 0;
  int cols = 0;
  int rows = 0;
  std::vector<GridPosition> positions;  // row-major
};

/// Origins along one axis of length `length` for patch size `patch`.
///
/// n = ceil(length / patch) patches with stride floor((length - patch) / (n - 1));
/// the last origin is pinned to length - patch so the trailing edge is covered.
/// When the floor leaves a gap wider than the patch before that last origin,
/// origins fall back to floor(i * (length - patch) / (n - 1)).
std::vector<int> axis_origins(int length, int patch);

/// Throws DimensionTooSmall when the image is smaller than the patch.
PatchGrid compute_grid(int width, int height, int patch_size);

/// Copies the grid's patches out of `image` in row-major order.
/// Throws GridMismatch when the grid was computed for other dimensions.
std::vector<Patch> extract_patches(const ImageBuffer& image, const PatchGrid& grid,
                                   ScaleGroup scale_group);

}  // namespace seqiqa
