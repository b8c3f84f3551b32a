// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>

#include "seqiqa/errors.hpp"

namespace seqiqa {

using nlohmann::json;

namespace {

constexpr std::string_view kFormat = "seqiqa-checkpoint";
constexpr int kVersion = 1;

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ItemizedIOError("cannot open checkpoint file", {path.string()});
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to '" + path.string() + "'");
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("checkpoint index lacks '") + key + "'", 0);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint field '") + key + "': " + e.what(), 0);
  }
}

}  // namespace

std::string_view to_string(HeadKind kind) { return kind == HeadKind::Rnn ? "rnn" : "avg"; }

HeadKind parse_head_kind(std::string_view text) {
  if (text == "rnn") return HeadKind::Rnn;
  if (text == "avg") return HeadKind::Avg;
  throw ValidationError("head must be 'rnn' or 'avg', got '" + std::string(text) + "'");
}

std::size_t Model::input_dim() const {
  return std::visit([](const auto& p) { return static_cast<std::size_t>(p.mean.size()); }, params);
}

double Model::predict(const SequenceInput& input) const {
  return std::visit([&](const auto& p) { return seqiqa::predict(p, input); }, params);
}

std::vector<ConstTensorRef> Model::tensors() const {
  return std::visit([](const auto& p) { return p.tensors(); }, params);
}

CheckpointData encode_checkpoint(const Model& model, const std::string& blob_name) {
  CheckpointData out;
  json index;
  index["format"] = kFormat;
  index["version"] = kVersion;
  index["head"] = to_string(model.kind());
  index["input_dim"] = model.input_dim();
  if (const auto* gru = std::get_if<GruHeadParams>(&model.params)) {
    const auto shape = gru->shape();
    index["hidden"] = shape.hidden;
  } else {
    index["hidden"] = {std::get<BaselineParams>(model.params).hidden_dim()};
  }
  index["seed"] = model.seed;
  index["config"] = model.config;
  index["blob"] = blob_name;

  json tensors = json::array();
  for (const auto& t : model.tensors()) {
    const std::size_t offset = out.blob.size();
    for (double v : t.data) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      for (int i = 0; i < 4; ++i) out.blob.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
    tensors.push_back({{"name", t.name},
                       {"shape", {t.rows, t.cols}},
                       {"dtype", "f32"},
                       {"offset", offset},
                       {"nbytes", out.blob.size() - offset}});
  }
  index["tensors"] = std::move(tensors);
  index["blob_bytes"] = out.blob.size();
  out.index = index.dump(2) + "\n";
  return out;
}

namespace {

Model decode_index(const json& index, std::span<const std::uint8_t> blob) {
  if (!index.is_object() || !index.contains("format") || index["format"] != kFormat) {
    throw FormatError("not a seqiqa checkpoint index", 0);
  }
  if (field<int>(index, "version") != kVersion) {
    throw FormatError("unsupported checkpoint version", 0);
  }
  if (field<std::size_t>(index, "blob_bytes") != blob.size()) {
    throw FormatError("blob size differs from the index", std::min(blob.size(),
                      field<std::size_t>(index, "blob_bytes")));
  }

  Model model;
  model.seed = field<std::uint64_t>(index, "seed");
  model.config = index.value("config", json::object());
  const auto input_dim = field<std::size_t>(index, "input_dim");
  const auto hidden = field<std::vector<std::size_t>>(index, "hidden");
  const HeadKind kind = [&] {
    try {
      return parse_head_kind(field<std::string>(index, "head"));
    } catch (const ValidationError& e) {
      throw FormatError(e.what(), 0);
    }
  }();
  if (input_dim == 0 || input_dim > (1u << 24)) throw FormatError("implausible input_dim", 0);
  for (auto h : hidden) {
    if (h == 0 || h > (1u << 16)) throw FormatError("implausible hidden width", 0);
  }
  if (kind == HeadKind::Rnn) {
    if (hidden.size() != 4) throw FormatError("rnn head needs four hidden widths", 0);
    model.params = GruHeadParams::zeros({input_dim, {hidden[0], hidden[1], hidden[2], hidden[3]}});
  } else {
    if (hidden.size() != 1) throw FormatError("avg head needs one hidden width", 0);
    model.params = BaselineParams::zeros(input_dim, hidden[0]);
  }

  std::map<std::string, json> entries;
  const auto listed = index.value("tensors", json::array());
  if (!listed.is_array()) throw FormatError("'tensors' must be an array", 0);
  for (const auto& e : listed) entries[field<std::string>(e, "name")] = e;

  auto refs = std::visit([](auto& p) { return p.tensors(); }, model.params);
  if (entries.size() != refs.size()) throw FormatError("tensor list does not match the head", 0);
  for (auto& ref : refs) {
    auto it = entries.find(ref.name);
    if (it == entries.end()) throw FormatError("missing tensor '" + ref.name + "'", 0);
    const json& e = it->second;
    if (field<std::string>(e, "dtype") != "f32") throw FormatError("only f32 tensors are supported", 0);
    const auto shape = field<std::vector<std::size_t>>(e, "shape");
    if (shape != std::vector<std::size_t>{ref.rows, ref.cols}) {
      throw FormatError("tensor '" + ref.name + "' has unexpected shape", 0);
    }
    const auto offset = field<std::size_t>(e, "offset");
    const auto nbytes = field<std::size_t>(e, "nbytes");
    if (nbytes != 4 * ref.data.size()) {
      throw FormatError("tensor '" + ref.name + "' byte count mismatch", std::min(offset, blob.size()));
    }
    if (offset > blob.size() || blob.size() - offset < nbytes) {
      throw FormatError("tensor '" + ref.name + "' extends past the blob", std::min(offset, blob.size()));
    }
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(blob[offset + 4 * i + b]) << (8 * b);
      const float v = std::bit_cast<float>(bits);
      if (!std::isfinite(v)) {
        throw FormatError("non-finite value in tensor '" + ref.name + "'", offset + 4 * i);
      }
      ref.data[i] = v;
    }
  }
  return model;
}

}  // namespace

Model decode_checkpoint(std::string_view text, std::span<const std::uint8_t> blob) {
  json index;
  try {
    index = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based.
    throw FormatError(std::string("checkpoint index is not valid JSON: ") + e.what(),
                      std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0));
  }
  try {
    return decode_index(index, blob);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed checkpoint index: ") + e.what(), 0);
  }
}

void save_checkpoint(const Model& model, const std::filesystem::path& path) {
  const auto blob_path = std::filesystem::path(path.string() + ".bin");
  const auto data = encode_checkpoint(model, blob_path.filename().string());
  write_bytes(blob_path, data.blob);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint '" + path.string() + "'");
  out << data.index;
}

Model load_checkpoint(const std::filesystem::path& path) {
  const auto index_bytes = read_bytes(path);
  const std::string index(index_bytes.begin(), index_bytes.end());
  std::string blob_name = path.filename().string() + ".bin";
  try {
    const auto j = json::parse(index);
    if (j.is_object() && j.contains("blob") && j["blob"].is_string()) {
      blob_name = j["blob"].get<std::string>();
    }
  } catch (const json::exception&) {
    // decode_checkpoint reports the positioned error below
    return decode_checkpoint(index, {});
  }
  const auto blob = read_bytes(path.parent_path() / std::filesystem::path(blob_name).filename());
  return decode_checkpoint(index, blob);
}

}  // namespace seqiqa
