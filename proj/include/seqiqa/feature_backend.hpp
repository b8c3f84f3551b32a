// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seqiqa/core_types.hpp"

namespace seqiqa {

enum class BackendKind { FileLoader, StatFeatures };

/// Per-patch feature extractor.
class FeatureBackend {
 public:
  virtual ~FeatureBackend() = default;
  virtual BackendKind kind() const = 0;
  virtual std::size_t dim() const = 0;
  /// Feature values for one patch; SI and grid metadata are the caller's job.
  virtual std::vector<double> extract(const ImageBuffer& patch) const = 0;
};

/// Values only; `si` is left at zero.
FeatureVector extract_features(const FeatureBackend& backend, const Patch& patch);

inline constexpr std::size_t kStatCellsPerSide = 4;
inline constexpr std::size_t kStatFeatureDim = kStatCellsPerSide * kStatCellsPerSide * 3;

/// 4x4 cells in row-major order; per cell: luma mean, luma population std and
/// mean Sobel magnitude over the cell's own interior. Patch sides must be
/// multiples of 4 with cells of at least 3x3 pixels, otherwise
/// DimensionTooSmall.
std::vector<double> stat_features(const ImageBuffer& patch);

class StatFeatureBackend final : public FeatureBackend {
 public:
  BackendKind kind() const override { return BackendKind::StatFeatures; }
  std::size_t dim() const override { return kStatFeatureDim; }
  std::vector<double> extract(const ImageBuffer& patch) const override {
    return stat_features(patch);
  }
};

/// Serves features computed elsewhere (e.g. a CNN run through ONNX) from FSEQ
/// files. Direct extraction throws UnsupportedMode.
class FileFeatureBackend final : public FeatureBackend {
 public:
  explicit FileFeatureBackend(std::size_t dim = 2048) : dim_(dim) {}

  BackendKind kind() const override { return BackendKind::FileLoader; }
  std::size_t dim() const override { return dim_; }
  std::vector<double> extract(const ImageBuffer& patch) const override;

  /// Throws DimMismatch when the file's dim differs from this backend's.
  FeatureSequence load(const std::filesystem::path& path) const;

 private:
  std::size_t dim_;
};

// FSEQ interchange format, all integers and floats little-endian:
//
//   "FSEQ"            4 bytes
//   version           u16 (= 1)
//   id_length         u32, followed by id_length bytes of UTF-8 image id
//   group_count       u32
//   per group:
//     scale tag       u8 (0 = LOW, 1 = HIGH)
//     n               u32 vector count
//     dim             u32
//     si[n]           f32
//     values[n * dim] f32, row-major
//
// Writers always emit LOW then HIGH, empty groups included.
inline constexpr std::uint16_t kFeatureFileVersion = 1;

std::vector<std::uint8_t> encode_feature_file(const FeatureSequence& seq);
/// Throws FormatError carrying the byte offset of the first bad field.
FeatureSequence decode_feature_file(std::span<const std::uint8_t> bytes);

void write_feature_file(const FeatureSequence& seq, const std::filesystem::path& path);
FeatureSequence read_feature_file(const std::filesystem::path& path);

}  // namespace seqiqa
