// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqiqa/checkpoint.hpp"
#include "seqiqa/feature_backend.hpp"
#include "seqiqa/manifest.hpp"
#include "seqiqa/multires.hpp"
#include "seqiqa/synth.hpp"
#include "seqiqa/trainer.hpp"

namespace seqiqa {

nlohmann::json to_json(const TrainConfig& cfg);
/// Overlays the keys present in `j` onto `cfg`; unknown keys are rejected.
void apply_json(const nlohmann::json& j, TrainConfig& cfg);

nlohmann::json to_json(const MultiresConfig& cfg);
void apply_json(const nlohmann::json& j, MultiresConfig& cfg);

std::string_view to_string(Ordering ordering);
Ordering parse_ordering(std::string_view text);

struct ExtractFailure {
  std::string image_id;
  std::string path;
  std::string reason;
};

struct ExtractReport {
  std::size_t written = 0;
  std::vector<ExtractFailure> failures;
};

/// FSEQ path for an image id inside a feature directory.
std::filesystem::path feature_path(const std::filesystem::path& feature_dir,
                                   const std::string& image_id);

/// One FSEQ file per manifest entry. Failing images are collected and the run
/// continues. Parallel over images; output does not depend on thread count.
ExtractReport cmd_extract(const DatasetManifest& manifest, const std::filesystem::path& feature_dir,
                          const MultiresConfig& cfg, const FeatureBackend& backend,
                          int threads = 0);

/// Seeded shuffle, then the first ceil(ratio * N) entries become train.
DatasetManifest cmd_split(DatasetManifest manifest, double ratio, std::uint64_t seed);

/// Loads the feature sequences of a split, targets rescaled to [0, 1]. With
/// `use_low_scale` false only the HIGH group is kept. When `feature_dir` is
/// empty the manifest paths are taken to be FSEQ files. Throws ItemizedIOError
/// listing every id whose features are missing or unreadable.
std::vector<LabeledSequence> load_split(const DatasetManifest& manifest, Split split,
                                        const std::filesystem::path& feature_dir,
                                        bool use_low_scale);

struct TrainOptions {
  TrainConfig train;
  HeadKind head = HeadKind::Rnn;
  std::array<std::size_t, 4> hidden{256, 128, 64, 32};
  std::size_t baseline_hidden = 256;
  bool use_low_scale = true;
  bool validate_on_test = false;  // report test metrics per epoch; never alters training
};

struct TrainOutcome {
  Model model;
  TrainHistory history;
};

TrainOutcome cmd_train(const DatasetManifest& manifest, const std::filesystem::path& feature_dir,
                       const TrainOptions& opts);

struct Prediction {
  std::string image_id;
  double mos = 0.0;  // 0-100
};

/// Eval-mode predictions for `split` (all entries when nullopt).
std::vector<Prediction> cmd_predict(const Model& model, const DatasetManifest& manifest,
                                    std::optional<Split> split,
                                    const std::filesystem::path& feature_dir);
std::string format_predictions(std::span<const Prediction> predictions);

struct EvalRow {
  std::string model;
  std::string split;
  std::uint64_t seed = 0;
  Metrics metrics;
};

EvalRow cmd_eval(const Model& model, const DatasetManifest& manifest, Split split,
                 const std::filesystem::path& feature_dir);
/// `model,split,seed,scc,pcc,rmse`.
std::string format_report(std::span<const EvalRow> rows);

/// Model label used in reports: "rnn", "avg", prefixed "mres+" with the LOW group.
std::string model_label(HeadKind head, bool use_low_scale);

/// Trains and evaluates {avg, rnn} x {HIGH only, LOW+HIGH} on the same split.
std::vector<EvalRow> cmd_ablate(const DatasetManifest& manifest,
                                const std::filesystem::path& feature_dir,
                                const TrainOptions& base);

}  // namespace seqiqa
