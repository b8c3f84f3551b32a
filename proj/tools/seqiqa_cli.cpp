// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "seqiqa/checkpoint.hpp"
#include "seqiqa/errors.hpp"
#include "seqiqa/feature_backend.hpp"
#include "seqiqa/manifest.hpp"
#include "seqiqa/pipeline.hpp"
#include "seqiqa/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;

  std::string manifest;
  std::string features;
  std::string out;
  std::string model;
  std::string split = "test";
  std::string predict_split = "all";
  std::string head;
  std::string ordering;
  std::string variant = "plain";
  std::string history;
  double ratio = 0.8;
  int count = 200;
  int size = 512;
  bool no_low_scale = false;
  bool strict_low_scale = false;

  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<double> lr0;
  std::optional<double> lr_factor;
  std::optional<double> l2;
  std::optional<double> dropout;
};

json load_config(const Options& o) {
  if (o.config_path.empty()) return json::object();
  std::ifstream in(o.config_path);
  if (!in) throw seqiqa::ValidationError("cannot open config file " + o.config_path);
  json j = json::parse(in);
  if (!j.is_object()) throw seqiqa::ValidationError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "train" && key != "multires" && key != "head") {
      throw seqiqa::ValidationError("unknown config section '" + key + "'");
    }
  }
  return j;
}

struct Effective {
  seqiqa::TrainOptions train;
  seqiqa::MultiresConfig multires;
};

// defaults < config file < flags
Effective resolve(const Options& o) {
  Effective e;
  const json file = load_config(o);
  if (file.contains("train")) seqiqa::apply_json(file.at("train"), e.train.train);
  if (file.contains("multires")) seqiqa::apply_json(file.at("multires"), e.multires);
  if (file.contains("head")) e.train.head = seqiqa::parse_head_kind(file.at("head").get<std::string>());

  auto& t = e.train.train;
  if (o.seed) {
    t.seed = *o.seed;
    e.multires.order_seed = *o.seed;
  }
  if (o.epochs) t.epochs = *o.epochs;
  if (o.batch_size) t.batch_size = *o.batch_size;
  if (o.lr0) t.lr0 = *o.lr0;
  if (o.lr_factor) t.lr_factor = *o.lr_factor;
  if (o.l2) t.l2 = *o.l2;
  if (o.dropout) t.dropout = *o.dropout;
  t.threads = o.threads;
  if (!o.head.empty()) e.train.head = seqiqa::parse_head_kind(o.head);
  if (!o.ordering.empty()) e.multires.ordering = seqiqa::parse_ordering(o.ordering);
  if (o.no_low_scale) e.multires.enable_low_scale = false;
  if (o.strict_low_scale) e.multires.strict_low_scale = true;
  e.train.use_low_scale = e.multires.enable_low_scale;
  t.validate();
  e.multires.validate();
  return e;
}

json echo(const std::string& command, const Effective& e) {
  return {{"command", command},
          {"train", seqiqa::to_json(e.train.train)},
          {"multires", seqiqa::to_json(e.multires)},
          {"head", seqiqa::to_string(e.train.head)}};
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw seqiqa::ValidationError("cannot write " + path.string());
  out << text;
}

void write_echo(const fs::path& out, const json& config) {
  write_text(fs::path(out.string() + ".config.json"), config.dump(2) + "\n");
}

void emit(const std::string& out, const std::string& text, const json& config) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  write_text(out, text);
  write_echo(out, config);
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw seqiqa::ValidationError(std::string(what) + " is required");
  if (!fs::is_regular_file(path)) throw seqiqa::ValidationError(std::string(what) + " not found: " + path);
}

std::optional<seqiqa::Split> split_filter(const std::string& text) {
  if (text == "all") return std::nullopt;
  return seqiqa::parse_split(text);
}

int run_synth(const Options& o) {
  seqiqa::SynthConfig cfg;
  cfg.count = o.count;
  cfg.size = o.size;
  if (o.seed) cfg.seed = *o.seed;
  if (o.variant == "plain") {
    cfg.variant = seqiqa::SynthVariant::Plain;
  } else if (o.variant == "order") {
    cfg.variant = seqiqa::SynthVariant::OrderSensitive;
  } else {
    throw seqiqa::ValidationError("variant must be plain or order");
  }
  const auto manifest = seqiqa::generate_synthetic_dataset(cfg, o.out);
  std::cout << "wrote " << manifest.entries.size() << " images to " << o.out << "\n";
  return 0;
}

int run_extract(const Options& o) {
  require_file(o.manifest, "--manifest");
  const Effective e = resolve(o);
  const auto manifest = seqiqa::read_manifest(o.manifest);
  seqiqa::StatFeatureBackend backend;
  const auto report = seqiqa::cmd_extract(manifest, o.features, e.multires, backend, o.threads);
  write_text(fs::path(o.features) / "extract.config.json", echo("extract", e).dump(2) + "\n");
  std::cout << "extracted " << report.written << " of " << manifest.entries.size() << "\n";
  for (const auto& f : report.failures) {
    std::cerr << "failed: " << f.image_id << " " << f.path << ": " << f.reason << "\n";
  }
  return report.failures.empty() ? 0 : 2;
}

int run_split(const Options& o) {
  require_file(o.manifest, "--manifest");
  const std::uint64_t seed = o.seed.value_or(0);
  const auto manifest = seqiqa::cmd_split(seqiqa::read_manifest(o.manifest), o.ratio, seed);
  const fs::path out = o.out.empty() ? fs::path(o.manifest) : fs::path(o.out);
  seqiqa::write_manifest(manifest, out);
  write_echo(out, {{"command", "split"}, {"ratio", o.ratio}, {"seed", seed}});
  return 0;
}

int run_train(const Options& o) {
  require_file(o.manifest, "--manifest");
  if (o.out.empty()) throw seqiqa::ValidationError("--out is required");
  const Effective e = resolve(o);
  const auto manifest = seqiqa::read_manifest(o.manifest);
  const auto outcome = seqiqa::cmd_train(manifest, o.features, e.train);
  seqiqa::save_checkpoint(outcome.model, o.out);
  const std::string history = o.history.empty() ? o.out + ".history.csv" : o.history;
  write_text(history, outcome.history.to_csv());
  write_echo(history, echo("train", e));
  return 0;
}

int run_predict(const Options& o) {
  require_file(o.model, "--model");
  require_file(o.manifest, "--manifest");
  const auto model = seqiqa::load_checkpoint(o.model);
  const auto manifest = seqiqa::read_manifest(o.manifest);
  const auto predictions = seqiqa::cmd_predict(model, manifest, split_filter(o.predict_split), o.features);
  json config = model.config;
  config["command"] = "predict";
  emit(o.out, seqiqa::format_predictions(predictions), config);
  return 0;
}

int run_eval(const Options& o) {
  require_file(o.model, "--model");
  require_file(o.manifest, "--manifest");
  const auto model = seqiqa::load_checkpoint(o.model);
  const auto manifest = seqiqa::read_manifest(o.manifest);
  const seqiqa::EvalRow row =
      seqiqa::cmd_eval(model, manifest, seqiqa::parse_split(o.split), o.features);
  json config = model.config;
  config["command"] = "eval";
  emit(o.out, seqiqa::format_report(std::span(&row, 1)), config);
  return 0;
}

int run_ablate(const Options& o) {
  require_file(o.manifest, "--manifest");
  const Effective e = resolve(o);
  const auto manifest = seqiqa::read_manifest(o.manifest);
  const auto rows = seqiqa::cmd_ablate(manifest, o.features, e.train);
  emit(o.out, seqiqa::format_report(rows), echo("ablate", e));
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--threads", o.threads, "Worker threads (default: SEQIQA_THREADS or all cores)");
  cmd->add_option("--config", o.config_path, "JSON config file with train/multires/head sections");
}

void add_train_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--head", o.head, "Regression head: rnn or avg");
  cmd->add_option("--epochs", o.epochs);
  cmd->add_option("--batch-size", o.batch_size);
  cmd->add_option("--lr", o.lr0, "Initial learning rate");
  cmd->add_option("--lr-factor", o.lr_factor, "Per-epoch learning-rate factor");
  cmd->add_option("--l2", o.l2);
  cmd->add_option("--dropout", o.dropout);
  cmd->add_flag("--no-low-scale", o.no_low_scale, "Use only full-resolution patches");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-based blind image quality prediction"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic rated dataset");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--count", o.count);
  synth->add_option("--size", o.size, "Image side in pixels");
  synth->add_option("--variant", o.variant, "plain or order");
  add_common(synth, o);

  auto* extract = app.add_subcommand("extract", "Write one feature sequence per image");
  extract->add_option("--manifest", o.manifest)->required();
  extract->add_option("--features", o.features, "Feature directory")->required();
  extract->add_option("--ordering", o.ordering, "asc-si, raster or random");
  extract->add_flag("--no-low-scale", o.no_low_scale);
  extract->add_flag("--strict-low-scale", o.strict_low_scale);
  add_common(extract, o);

  auto* split = app.add_subcommand("split", "Assign train/test splits");
  split->add_option("--manifest", o.manifest)->required();
  split->add_option("--out", o.out, "Output manifest (default: overwrite)");
  split->add_option("--ratio", o.ratio, "Training fraction");
  add_common(split, o);

  auto* train = app.add_subcommand("train", "Train a regression head");
  train->add_option("--manifest", o.manifest)->required();
  train->add_option("--features", o.features)->required();
  train->add_option("--out", o.out, "Checkpoint path")->required();
  train->add_option("--history", o.history, "History CSV (default: <out>.history.csv)");
  add_train_flags(train, o);
  add_common(train, o);

  auto* predict = app.add_subcommand("predict", "Predict MOS for manifest entries");
  predict->add_option("--model", o.model)->required();
  predict->add_option("--manifest", o.manifest)->required();
  predict->add_option("--features", o.features);
  predict->add_option("--split", o.predict_split, "train, test or all");
  predict->add_option("--out", o.out, "CSV output (default: stdout)");
  add_common(predict, o);

  auto* eval = app.add_subcommand("eval", "Report SCC, PCC and RMSE");
  eval->add_option("--model", o.model)->required();
  eval->add_option("--manifest", o.manifest)->required();
  eval->add_option("--features", o.features);
  eval->add_option("--split", o.split, "train or test");
  eval->add_option("--out", o.out, "Report CSV (default: stdout)");
  add_common(eval, o);

  auto* ablate = app.add_subcommand("ablate", "Compare {avg, rnn} x {multires off, on}");
  ablate->add_option("--manifest", o.manifest)->required();
  ablate->add_option("--features", o.features)->required();
  ablate->add_option("--out", o.out, "Report CSV (default: stdout)");
  add_train_flags(ablate, o);
  add_common(ablate, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) return run_synth(o);
    if (*extract) return run_extract(o);
    if (*split) return run_split(o);
    if (*train) return run_train(o);
    if (*predict) return run_predict(o);
    if (*eval) return run_eval(o);
    if (*ablate) return run_ablate(o);
  } catch (const seqiqa::ItemizedIOError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
