// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/manifest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "seqiqa/errors.hpp"

namespace seqiqa {
namespace {

constexpr std::string_view kHeader = "image_id,path,mos,split";

// Splits one CSV record. Double quotes delimit fields containing commas;
// a doubled quote inside a quoted field is a literal quote.
std::vector<std::string> split_record(std::string_view line, std::size_t line_offset) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw FormatError("unterminated quoted field", line_offset + line.size());
  return fields;
}

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Unassigned: break;
  }
  return "";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "test") return Split::Test;
  if (text.empty()) return Split::Unassigned;
  throw ValidationError("split must be 'train' or 'test', got '" + std::string(text) + "'");
}

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void DatasetManifest::validate() const {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.image_id.empty()) throw ValidationError("empty image_id in manifest");
    if (!seen.insert(e.image_id).second) {
      throw ValidationError("duplicate image_id '" + e.image_id + "'");
    }
    if (!(e.mos_raw >= 0.0 && e.mos_raw <= 100.0)) {
      throw ValidationError("MOS of '" + e.image_id + "' outside [0, 100]");
    }
  }
}

std::vector<ManifestEntry> DatasetManifest::select(Split split) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back(e);
  }
  return out;
}

std::filesystem::path DatasetManifest::resolve(const ManifestEntry& entry) const {
  std::filesystem::path p(entry.path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

DatasetManifest parse_manifest(std::string_view csv, std::filesystem::path base_dir) {
  DatasetManifest manifest;
  manifest.base_dir = std::move(base_dir);
  std::size_t offset = 0;
  bool header_seen = false;
  while (offset < csv.size()) {
    std::size_t end = csv.find('\n', offset);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(offset, end - offset);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t line_offset = offset;
    offset = end + 1;
    if (line.empty()) continue;

    if (!header_seen) {
      if (line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
      if (line != kHeader) {
        throw FormatError("manifest header must be '" + std::string(kHeader) + "'", line_offset);
      }
      header_seen = true;
      continue;
    }

    auto fields = split_record(line, line_offset);
    if (fields.size() != 4) {
      throw FormatError("manifest row needs 4 fields, got " + std::to_string(fields.size()),
                        line_offset);
    }
    ManifestEntry entry;
    entry.image_id = fields[0];
    entry.path = fields[1];
    const auto& mos = fields[2];
    auto [ptr, ec] = std::from_chars(mos.data(), mos.data() + mos.size(), entry.mos_raw);
    if (ec != std::errc() || ptr != mos.data() + mos.size()) {
      throw FormatError("bad MOS value '" + mos + "'", line_offset);
    }
    try {
      entry.split = parse_split(fields[3]);
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), line_offset);
    }
    manifest.entries.push_back(std::move(entry));
  }
  if (!header_seen) throw FormatError("empty manifest", 0);
  manifest.validate();
  return manifest;
}

std::string format_manifest(const DatasetManifest& manifest) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& e : manifest.entries) {
    out += quote_field(e.image_id) + ',' + quote_field(e.path) + ',' + format_real(e.mos_raw) +
           ',' + std::string(to_string(e.split)) + '\n';
  }
  return out;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open manifest '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest(buffer.str(), path.parent_path());
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << format_manifest(manifest);
}

}  // namespace seqiqa
