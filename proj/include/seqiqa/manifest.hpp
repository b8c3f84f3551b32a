// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace seqiqa {

enum class Split { Unassigned, Train, Test };

std::string_view to_string(Split split);
/// Accepts "train", "test" and "" (unassigned).
Split parse_split(std::string_view text);

struct ManifestEntry {
  std::string image_id;
  std::string path;  // image or feature file, relative to the manifest directory
  double mos_raw = 0.0;  // 0-100
  Split split = Split::Unassigned;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// CSV dataset index with header `image_id,path,mos,split`.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  /// Unique ids, MOS within [0, 100]. Throws ValidationError.
  void validate() const;

  std::vector<ManifestEntry> select(Split split) const;
  std::filesystem::path resolve(const ManifestEntry& entry) const;
};

DatasetManifest parse_manifest(std::string_view csv, std::filesystem::path base_dir = {});
std::string format_manifest(const DatasetManifest& manifest);

DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Shortest text that parses back to exactly `value`.
std::string format_real(double value);

}  // namespace seqiqa
