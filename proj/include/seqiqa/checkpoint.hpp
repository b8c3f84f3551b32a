// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "seqiqa/baseline.hpp"
#include "seqiqa/gru_head.hpp"

namespace seqiqa {

enum class HeadKind { Rnn, Avg };

std::string_view to_string(HeadKind kind);
/// "rnn" or "avg"; throws ValidationError otherwise.
HeadKind parse_head_kind(std::string_view text);

/// A trained head together with its provenance.
struct Model {
  std::variant<GruHeadParams, BaselineParams> params;
  nlohmann::json config = nlohmann::json::object();  // effective configuration echo
  std::uint64_t seed = 0;

  HeadKind kind() const noexcept {
    return std::holds_alternative<GruHeadParams>(params) ? HeadKind::Rnn : HeadKind::Avg;
  }
  std::size_t input_dim() const;
  double predict(const SequenceInput& input) const;
  std::vector<ConstTensorRef> tensors() const;
};

// Checkpoint layout: a JSON index (written at the checkpoint path) and a raw
// blob of little-endian f32 tensors (written next to it, at path + ".bin").
// The index lists every tensor as {name, shape, dtype, offset, nbytes} and
// echoes the head kind, layer widths, training seed and configuration.
struct CheckpointData {
  std::string index;
  std::vector<std::uint8_t> blob;
};

CheckpointData encode_checkpoint(const Model& model, const std::string& blob_name);
/// Throws FormatError: offsets point into the index text for JSON problems and
/// into the blob for tensor-range problems.
Model decode_checkpoint(std::string_view index, std::span<const std::uint8_t> blob);

void save_checkpoint(const Model& model, const std::filesystem::path& path);
/// Throws ItemizedIOError when the index or blob file is missing.
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace seqiqa
