// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "seqiqa/core_types.hpp"

namespace seqiqa {

/// Decodes a PNG or binary PNM (P5/P6) file into an 8-bit gray or RGB buffer.
/// Alpha is dropped, palettes are expanded and 16-bit samples are reduced.
/// Throws FormatError for undecodable content.
ImageBuffer read_image(const std::filesystem::path& path);

void write_png(const ImageBuffer& image, const std::filesystem::path& path);

}  // namespace seqiqa
