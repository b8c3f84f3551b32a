// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/feature_backend.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "seqiqa/errors.hpp"
#include "seqiqa/si_ordering.hpp"

namespace seqiqa {

FeatureVector extract_features(const FeatureBackend& backend, const Patch& patch) {
  return FeatureVector{backend.extract(patch.pixels), 0.0, patch.scale_group,
                       patch.source_index};
}

std::vector<double> stat_features(const ImageBuffer& patch) {
  constexpr int kCells = static_cast<int>(kStatCellsPerSide);
  if (patch.width() < 8 || patch.height() < 8) {
    throw DimensionTooSmall("stat features need at least an 8x8 patch");
  }
  if (patch.width() % kCells != 0 || patch.height() % kCells != 0) {
    throw DimensionTooSmall("patch sides must be multiples of 4 for the stat feature grid");
  }
  const int cell_w = patch.width() / kCells;
  const int cell_h = patch.height() / kCells;
  if (cell_w < 3 || cell_h < 3) {
    throw DimensionTooSmall("stat feature cells must be at least 3x3 pixels");
  }

  const LumaField luma = to_luma(patch);
  std::vector<double> features;
  features.reserve(kStatFeatureDim);
  LumaField cell{cell_w, cell_h, std::vector<double>(static_cast<std::size_t>(cell_w) * cell_h)};
  for (int cy = 0; cy < kCells; ++cy) {
    for (int cx = 0; cx < kCells; ++cx) {
      for (int y = 0; y < cell_h; ++y) {
        for (int x = 0; x < cell_w; ++x) cell.at(x, y) = luma.at(cx * cell_w + x, cy * cell_h + y);
      }
      const double n = static_cast<double>(cell.values.size());
      double sum = 0.0;
      for (double v : cell.values) sum += v;
      const double mean = sum / n;
      double ss = 0.0;
      for (double v : cell.values) ss += (v - mean) * (v - mean);

      const RealField edges = sobel_magnitude(cell);
      double edge_sum = 0.0;
      for (double v : edges.values) edge_sum += v;

      features.push_back(mean);
      features.push_back(std::sqrt(ss / n));
      features.push_back(edge_sum / static_cast<double>(edges.values.size()));
    }
  }
  return features;
}

std::vector<double> FileFeatureBackend::extract(const ImageBuffer&) const {
  throw UnsupportedMode("the file-loader backend serves precomputed features only");
}

FeatureSequence FileFeatureBackend::load(const std::filesystem::path& path) const {
  FeatureSequence seq = read_feature_file(path);
  if (seq.dim != dim_) {
    throw DimMismatch("feature file '" + path.string() + "' has dim " + std::to_string(seq.dim) +
                      ", backend expects " + std::to_string(dim_));
  }
  return seq;
}

namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u16(std::uint16_t v) { put_le(v, 2); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void f32(double v) { put_le(std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void put_le(std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  std::uint8_t u8(const char* what) { return static_cast<std::uint8_t>(get_le(1, what)); }
  std::uint16_t u16(const char* what) { return static_cast<std::uint16_t>(get_le(2, what)); }
  std::uint32_t u32(const char* what) { return get_le(4, what); }
  float f32(const char* what) { return std::bit_cast<float>(get_le(4, what)); }
  std::string raw(std::size_t n, const char* what) {
    need(n, what);
    std::string out(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return out;
  }
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw FormatError(std::string("truncated feature file: ") + what, pos_);
  }

 private:
  std::uint32_t get_le(int n, const char* what) {
    need(static_cast<std::size_t>(n), what);
    std::uint32_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_feature_file(const FeatureSequence& seq) {
  seq.validate();
  ByteWriter w;
  w.raw("FSEQ");
  w.u16(kFeatureFileVersion);
  w.u32(static_cast<std::uint32_t>(seq.image_id.size()));
  w.raw(seq.image_id);
  w.u32(2);
  for (ScaleGroup group : {ScaleGroup::Low, ScaleGroup::High}) {
    const std::size_t n = seq.count(group);
    w.u8(static_cast<std::uint8_t>(group));
    w.u32(static_cast<std::uint32_t>(n));
    w.u32(static_cast<std::uint32_t>(seq.dim));
    for (const auto& v : seq.vectors) {
      if (v.scale_group == group) w.f32(v.si);
    }
    for (const auto& v : seq.vectors) {
      if (v.scale_group != group) continue;
      for (double x : v.values) w.f32(x);
    }
  }
  return w.take();
}

FeatureSequence decode_feature_file(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.raw(std::min<std::size_t>(4, r.remaining()), "magic") != "FSEQ") {
    throw FormatError("bad magic, expected FSEQ", 0);
  }
  const std::size_t version_at = r.offset();
  const auto version = r.u16("version");
  if (version != kFeatureFileVersion) {
    throw FormatError("unsupported feature file version " + std::to_string(version), version_at);
  }
  const auto id_length = r.u32("image id length");
  FeatureSequence seq;
  seq.image_id = r.raw(id_length, "image id");
  const auto group_count = r.u32("group count");

  bool have_dim = false;
  bool seen_high = false;
  for (std::uint32_t g = 0; g < group_count; ++g) {
    const std::size_t tag_at = r.offset();
    const auto tag = r.u8("scale tag");
    if (tag > 1) throw FormatError("unknown scale tag " + std::to_string(tag), tag_at);
    const auto group = static_cast<ScaleGroup>(tag);
    if (group == ScaleGroup::Low && seen_high) {
      throw FormatError("LOW group after HIGH group", tag_at);
    }
    seen_high = seen_high || group == ScaleGroup::High;

    const auto n = r.u32("vector count");
    const std::size_t dim_at = r.offset();
    const auto dim = r.u32("dim");
    if (!have_dim || (seq.vectors.empty() && n > 0)) {
      seq.dim = dim;
      have_dim = true;
    } else if (n > 0 && dim != seq.dim) {
      throw FormatError("group dim " + std::to_string(dim) + " differs from " +
                            std::to_string(seq.dim),
                        dim_at);
    }
    // Size check up front so a corrupt count cannot trigger a huge allocation.
    const std::uint64_t payload = 4ull * n * (1ull + dim);
    if (payload > r.remaining()) {
      throw FormatError("truncated feature file: group payload", r.offset());
    }

    const std::size_t first = seq.vectors.size();
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::size_t at = r.offset();
      const double si = r.f32("si");
      if (!std::isfinite(si) || si < 0.0) throw FormatError("invalid SI value", at);
      seq.vectors.push_back(FeatureVector{{}, si, group, static_cast<int>(i)});
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      auto& values = seq.vectors[first + i].values;
      values.resize(dim);
      for (std::uint32_t d = 0; d < dim; ++d) {
        const std::size_t at = r.offset();
        values[d] = r.f32("feature value");
        if (!std::isfinite(values[d])) throw FormatError("non-finite feature value", at);
      }
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last group", r.offset());
  return seq;
}

void write_feature_file(const FeatureSequence& seq, const std::filesystem::path& path) {
  const auto bytes = encode_feature_file(seq);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write feature file '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to '" + path.string() + "'");
}

FeatureSequence read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature file '" + path.string() + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_feature_file(bytes);
}

}  // namespace seqiqa
