// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/pipeline.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "seqiqa/errors.hpp"
#include "seqiqa/image_io.hpp"
#include "seqiqa/parallel.hpp"

namespace seqiqa {

using nlohmann::json;

namespace {

template <class T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ValidationError("unknown configuration key '" + key + "'");
  }
}

}  // namespace

json to_json(const TrainConfig& c) {
  return {{"lr0", c.lr0},           {"lr_factor", c.lr_factor}, {"epochs", c.epochs},
          {"batch_size", c.batch_size}, {"l2", c.l2},          {"beta1", c.beta1},
          {"beta2", c.beta2},       {"adam_eps", c.adam_eps},  {"huber_delta", c.huber_delta},
          {"dropout", c.dropout},   {"seed", c.seed},          {"shuffle", c.shuffle}};
}

void apply_json(const json& j, TrainConfig& c) {
  if (!j.is_object()) throw ValidationError("training configuration must be a JSON object");
  reject_unknown(j, {"lr0", "lr_factor", "epochs", "batch_size", "l2", "beta1", "beta2",
                     "adam_eps", "huber_delta", "dropout", "seed", "shuffle"});
  take(j, "lr0", c.lr0);
  take(j, "lr_factor", c.lr_factor);
  take(j, "epochs", c.epochs);
  take(j, "batch_size", c.batch_size);
  take(j, "l2", c.l2);
  take(j, "beta1", c.beta1);
  take(j, "beta2", c.beta2);
  take(j, "adam_eps", c.adam_eps);
  take(j, "huber_delta", c.huber_delta);
  take(j, "dropout", c.dropout);
  take(j, "seed", c.seed);
  take(j, "shuffle", c.shuffle);
}

std::string_view to_string(Ordering ordering) {
  switch (ordering) {
    case Ordering::AscendingSi: return "asc-si";
    case Ordering::Raster: return "raster";
    case Ordering::Random: return "random";
  }
  return "asc-si";
}

Ordering parse_ordering(std::string_view text) {
  if (text == "asc-si") return Ordering::AscendingSi;
  if (text == "raster") return Ordering::Raster;
  if (text == "random") return Ordering::Random;
  throw ValidationError("ordering must be asc-si, raster or random");
}

json to_json(const MultiresConfig& c) {
  return {{"enable_low_scale", c.enable_low_scale}, {"scale_factor", c.scale_factor},
          {"patch_size", c.patch_size},             {"ordering", to_string(c.ordering)},
          {"order_seed", c.order_seed},             {"strict_low_scale", c.strict_low_scale}};
}

void apply_json(const json& j, MultiresConfig& c) {
  if (!j.is_object()) throw ValidationError("multires configuration must be a JSON object");
  reject_unknown(j, {"enable_low_scale", "scale_factor", "patch_size", "ordering", "order_seed",
                     "strict_low_scale"});
  take(j, "enable_low_scale", c.enable_low_scale);
  take(j, "scale_factor", c.scale_factor);
  take(j, "patch_size", c.patch_size);
  if (j.contains("ordering")) c.ordering = parse_ordering(j.at("ordering").get<std::string>());
  take(j, "order_seed", c.order_seed);
  take(j, "strict_low_scale", c.strict_low_scale);
}

std::filesystem::path feature_path(const std::filesystem::path& feature_dir,
                                   const std::string& image_id) {
  return feature_dir / (image_id + ".fseq");
}

ExtractReport cmd_extract(const DatasetManifest& manifest, const std::filesystem::path& feature_dir,
                          const MultiresConfig& cfg, const FeatureBackend& backend, int threads) {
  cfg.validate();
  std::filesystem::create_directories(feature_dir);
  const auto& entries = manifest.entries;
  std::vector<std::optional<ExtractFailure>> failures(entries.size());
  parallel_for(entries.size(), threads > 0 ? threads : default_thread_count(), [&](std::size_t i) {
    const auto& e = entries[i];
    const auto path = manifest.resolve(e);
    try {
      const ImageBuffer image = read_image(path);
      write_feature_file(build_sequence(image, e.image_id, cfg, backend),
                         feature_path(feature_dir, e.image_id));
    } catch (const std::exception& ex) {
      failures[i] = ExtractFailure{e.image_id, path.string(), ex.what()};
    }
  });
  ExtractReport report;
  for (auto& f : failures) {
    if (f) {
      report.failures.push_back(std::move(*f));
    } else {
      ++report.written;
    }
  }
  return report;
}

DatasetManifest cmd_split(DatasetManifest manifest, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("split ratio must lie in (0, 1)");
  std::vector<std::size_t> order(manifest.entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  const auto n_train = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(order.size()) - 1e-9));
  for (std::size_t k = 0; k < order.size(); ++k) {
    manifest.entries[order[k]].split = k < n_train ? Split::Train : Split::Test;
  }
  return manifest;
}

std::vector<LabeledSequence> load_split(const DatasetManifest& manifest, Split split,
                                        const std::filesystem::path& feature_dir,
                                        bool use_low_scale) {
  std::vector<LabeledSequence> out;
  std::vector<std::string> missing;
  for (const auto& e : manifest.entries) {
    if (e.split != split) continue;
    const auto path = feature_dir.empty() ? manifest.resolve(e) : feature_path(feature_dir, e.image_id);
    try {
      FeatureSequence seq = read_feature_file(path);
      if (!use_low_scale) seq = seq.filtered(ScaleGroup::High);
      if (seq.vectors.empty()) throw EmptySequence("no feature vectors");
      out.push_back({e.image_id, SequenceInput::from(seq), rescale_mos(e.mos_raw)});
    } catch (const std::exception& ex) {
      missing.push_back(e.image_id + " (" + ex.what() + ")");
    }
  }
  if (!missing.empty()) throw ItemizedIOError("missing or unreadable features", std::move(missing));
  return out;
}

TrainOutcome cmd_train(const DatasetManifest& manifest, const std::filesystem::path& feature_dir,
                       const TrainOptions& opts) {
  const auto train = load_split(manifest, Split::Train, feature_dir, opts.use_low_scale);
  if (train.empty()) throw EmptyTrainingSet("manifest has no training entries");
  std::vector<LabeledSequence> validation;
  if (opts.validate_on_test) {
    validation = load_split(manifest, Split::Test, feature_dir, opts.use_low_scale);
  }

  TrainOutcome outcome;
  json config = {{"train", to_json(opts.train)},
                 {"head", to_string(opts.head)},
                 {"use_low_scale", opts.use_low_scale}};
  if (opts.head == HeadKind::Rnn) {
    auto result = train_gru_head(train, opts.train, opts.hidden, validation);
    outcome.model.params = std::move(result.params);
    outcome.history = std::move(result.history);
  } else {
    auto result = train_baseline(train, opts.train, opts.baseline_hidden, validation);
    outcome.model.params = std::move(result.params);
    outcome.history = std::move(result.history);
  }
  outcome.model.config = std::move(config);
  outcome.model.seed = opts.train.seed;
  return outcome;
}

namespace {

bool model_uses_low_scale(const Model& model) {
  return model.config.value("use_low_scale", true);
}

}  // namespace

std::vector<Prediction> cmd_predict(const Model& model, const DatasetManifest& manifest,
                                    std::optional<Split> split,
                                    const std::filesystem::path& feature_dir) {
  std::vector<Prediction> out;
  std::vector<std::string> missing;
  for (const auto& e : manifest.entries) {
    if (split && e.split != *split) continue;
    const auto path = feature_dir.empty() ? manifest.resolve(e) : feature_path(feature_dir, e.image_id);
    try {
      FeatureSequence seq = read_feature_file(path);
      if (!model_uses_low_scale(model)) seq = seq.filtered(ScaleGroup::High);
      out.push_back({e.image_id, unscale_mos(model.predict(SequenceInput::from(seq)))});
    } catch (const std::exception& ex) {
      missing.push_back(e.image_id + " (" + ex.what() + ")");
    }
  }
  if (!missing.empty()) throw ItemizedIOError("missing or unreadable features", std::move(missing));
  return out;
}

std::string format_predictions(std::span<const Prediction> predictions) {
  std::ostringstream out;
  out << "image_id,mos_hat_0_100\n";
  for (const auto& p : predictions) out << p.image_id << ',' << format_real(p.mos) << '\n';
  return out.str();
}

std::string model_label(HeadKind head, bool use_low_scale) {
  return (use_low_scale ? "mres+" : "") + std::string(to_string(head));
}

EvalRow cmd_eval(const Model& model, const DatasetManifest& manifest, Split split,
                 const std::filesystem::path& feature_dir) {
  const auto data = load_split(manifest, split, feature_dir, model_uses_low_scale(model));
  if (data.empty()) throw ValidationError("split '" + std::string(to_string(split)) + "' is empty");
  std::vector<double> pred, target;
  for (const auto& ex : data) {
    pred.push_back(model.predict(ex.input));
    target.push_back(ex.target);
  }
  return {model_label(model.kind(), model_uses_low_scale(model)), std::string(to_string(split)),
          model.seed, compute_metrics(pred, target)};
}

std::string format_report(std::span<const EvalRow> rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string("nan"); };
  std::ostringstream out;
  out << "model,split,seed,scc,pcc,rmse\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.split << ',' << r.seed << ',' << opt(r.metrics.scc) << ','
        << opt(r.metrics.pcc) << ',' << format_real(r.metrics.rmse) << '\n';
  }
  return out.str();
}

std::vector<EvalRow> cmd_ablate(const DatasetManifest& manifest,
                                const std::filesystem::path& feature_dir,
                                const TrainOptions& base) {
  std::vector<EvalRow> rows;
  for (HeadKind head : {HeadKind::Avg, HeadKind::Rnn}) {
    for (bool low : {false, true}) {
      TrainOptions opts = base;
      opts.head = head;
      opts.use_low_scale = low;
      opts.validate_on_test = false;
      const auto outcome = cmd_train(manifest, feature_dir, opts);
      rows.push_back(cmd_eval(outcome.model, manifest, Split::Test, feature_dir));
    }
  }
  return rows;
}

}  // namespace seqiqa
