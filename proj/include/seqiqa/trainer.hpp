// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqiqa/baseline.hpp"
#include "seqiqa/gru_head.hpp"
#include "seqiqa/layers.hpp"
#include "seqiqa/metrics.hpp"

namespace seqiqa {

/// Training hyperparameters. Defaults follow the published protocol:
/// Adam with gradient decay 0.95 and squared-gradient decay 0.9 (note
/// beta1 > beta2), learning rate 2e-4 halved after every epoch, five epochs,
/// mini-batches of 16, coupled L2 of 1e-5 and Huber loss with delta 1/9.
struct TrainConfig {
  double lr0 = 2e-4;
  double lr_factor = 0.5;
  int epochs = 5;
  int batch_size = 16;
  double l2 = 1e-5;
  double beta1 = 0.95;
  double beta2 = 0.9;
  double adam_eps = 1e-8;
  double huber_delta = 1.0 / 9.0;
  double dropout = 0.25;
  std::uint64_t seed = 0;
  bool shuffle = true;
  int threads = 0;  // 0: default_thread_count()

  void validate() const;
  /// lr0 * lr_factor^epoch, epoch counted from 0.
  double learning_rate(int epoch) const;
};

struct HuberResult {
  double loss = 0.0;
  double d_pred = 0.0;
};

/// 0.5 e^2 for |e| <= delta, delta (|e| - delta / 2) beyond; e = pred - target.
HuberResult huber(double pred, double target, double delta);

/// First/second moments per tensor plus the shared step counter.
struct AdamState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::int64_t step = 0;
};

/// One Adam update with bias correction. Weight-role gradients get
/// `cfg.l2 * theta` added first; Frozen tensors are skipped. State is sized on
/// first use. Throws ShapeError when params and grads disagree.
void adam_step(std::span<const TensorRef> params, std::span<const ConstTensorRef> grads,
               AdamState& state, double lr, const TrainConfig& cfg);

struct Batch {
  std::vector<std::size_t> members;   // indices into the dataset
  std::vector<SequenceInput> inputs;  // zero-padded to the batch's longest sequence
};

/// Consecutive slices of `batch_size` after an optional shuffle (`rng` null
/// keeps dataset order). The last batch may be short.
std::vector<Batch> make_batches(std::span<const SequenceInput> data, std::size_t batch_size,
                                Rng* rng);

struct LabeledSequence {
  std::string image_id;
  SequenceInput input;
  double target = 0.0;  // [0, 1]
};

template <class Params>
struct BatchGradient {
  Params grad;
  double loss = 0.0;  // mean Huber loss over the batch
};

/// Gradient of the batch-mean Huber loss. Member i uses dropout stream
/// `dropout_seeds[i]`; per-member gradients are summed in member order.
template <class Params>
BatchGradient<Params> batch_gradient(const Params& params, std::span<const SequenceInput> inputs,
                                     std::span<const double> targets,
                                     std::span<const std::uint64_t> dropout_seeds,
                                     const TrainConfig& cfg);

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;
  std::optional<Metrics> validation;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  /// `epoch,lr,train_loss,val_scc,val_pcc,val_rmse`; missing values are "nan".
  std::string to_csv() const;
};

template <class Params>
struct TrainResult {
  Params params;
  TrainHistory history;
};

/// Runs the optimisation loop from `initial` (normalization mean already
/// set). Deterministic for a given cfg.seed, independent of thread count.
template <class Params>
TrainResult<Params> train_head(Params initial, std::span<const LabeledSequence> train,
                               const TrainConfig& cfg,
                               std::span<const LabeledSequence> validation = {});

/// Seeded init + zerocenter fit on `train` + train_head. Throws
/// EmptyTrainingSet or DimMismatch.
TrainResult<GruHeadParams> train_gru_head(std::span<const LabeledSequence> train,
                                          const TrainConfig& cfg,
                                          std::array<std::size_t, 4> hidden = {256, 128, 64, 32},
                                          std::span<const LabeledSequence> validation = {});

TrainResult<BaselineParams> train_baseline(std::span<const LabeledSequence> train,
                                           const TrainConfig& cfg, std::size_t hidden = 256,
                                           std::span<const LabeledSequence> validation = {});

template <class Params>
std::vector<double> predict_all(const Params& params, std::span<const LabeledSequence> data);

template <class Params>
Metrics evaluate_head(const Params& params, std::span<const LabeledSequence> data);

}  // namespace seqiqa
