// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/trainer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "seqiqa/errors.hpp"
#include "seqiqa/manifest.hpp"
#include "seqiqa/parallel.hpp"

namespace seqiqa {

void TrainConfig::validate() const {
  if (!(lr0 > 0.0) || !(lr_factor > 0.0) || !(l2 >= 0.0) || !(adam_eps > 0.0) ||
      !(huber_delta > 0.0)) {
    throw ValidationError("learning rate, decay factor, epsilon and Huber delta must be positive");
  }
  if (epochs < 1 || batch_size < 1) throw ValidationError("epochs and batch_size must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ValidationError("Adam decay factors must lie in [0, 1)");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ValidationError("dropout must lie in [0, 1)");
}

double TrainConfig::learning_rate(int epoch) const {
  return lr0 * std::pow(lr_factor, epoch);
}

HuberResult huber(double pred, double target, double delta) {
  const double e = pred - target;
  if (std::abs(e) <= delta) return {0.5 * e * e, e};
  return {delta * (std::abs(e) - 0.5 * delta), e > 0.0 ? delta : -delta};
}

void adam_step(std::span<const TensorRef> params, std::span<const ConstTensorRef> grads,
               AdamState& state, double lr, const TrainConfig& cfg) {
  if (params.size() != grads.size()) throw ShapeError("adam_step: tensor count mismatch");
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k].data.size() != grads[k].data.size()) {
      throw ShapeError("adam_step: gradient of '" + params[k].name + "' has wrong size");
    }
  }
  if (state.m.empty()) {
    state.m.resize(params.size());
    state.v.resize(params.size());
    for (std::size_t k = 0; k < params.size(); ++k) {
      state.m[k].assign(params[k].data.size(), 0.0);
      state.v[k].assign(params[k].data.size(), 0.0);
    }
  } else if (state.m.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state does not match parameters");
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(cfg.beta1, t);
  const double correction2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& p = params[k];
    if (p.role == TensorRole::Frozen) continue;
    auto& m = state.m[k];
    auto& v = state.v[k];
    if (m.size() != p.data.size()) throw ShapeError("adam_step: state shape mismatch");
    const bool decay = p.role == TensorRole::Weight && cfg.l2 > 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      double g = grads[k].data[i];
      if (decay) g += cfg.l2 * p.data[i];
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      p.data[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    }
  }
}

std::vector<Batch> make_batches(std::span<const SequenceInput> data, std::size_t batch_size,
                                Rng* rng) {
  if (batch_size == 0) throw ValidationError("batch_size must be positive");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  if (rng) rng->shuffle(std::span<std::size_t>(order));

  std::vector<Batch> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    Batch batch;
    const std::size_t end = std::min(order.size(), start + batch_size);
    batch.members.assign(order.begin() + start, order.begin() + end);
    std::size_t longest = 0;
    for (auto i : batch.members) longest = std::max(longest, data[i].length());
    for (auto i : batch.members) batch.inputs.push_back(data[i].padded_to(longest));
    batches.push_back(std::move(batch));
  }
  return batches;
}

namespace {

void add_into(std::vector<TensorRef> total, const std::vector<ConstTensorRef>& part) {
  for (std::size_t k = 0; k < total.size(); ++k) {
    for (std::size_t i = 0; i < total[k].data.size(); ++i) total[k].data[i] += part[k].data[i];
  }
}

template <class Params>
Params zeros_like(const Params& p);

template <>
GruHeadParams zeros_like(const GruHeadParams& p) {
  return GruHeadParams::zeros(p.shape());
}

template <>
BaselineParams zeros_like(const BaselineParams& p) {
  return BaselineParams::zeros(p.input_dim(), p.hidden_dim());
}

std::string metric_field(const std::optional<double>& v) {
  return v ? format_real(*v) : "nan";
}

}  // namespace

template <class Params>
BatchGradient<Params> batch_gradient(const Params& params, std::span<const SequenceInput> inputs,
                                     std::span<const double> targets,
                                     std::span<const std::uint64_t> dropout_seeds,
                                     const TrainConfig& cfg) {
  const std::size_t n = inputs.size();
  if (targets.size() != n || dropout_seeds.size() != n) {
    throw ShapeError("batch_gradient: inputs, targets and seeds differ in length");
  }
  if (n == 0) throw EmptyTrainingSet("empty batch");
  const double scale = 1.0 / static_cast<double>(n);

  std::vector<Params> member_grads(n);
  std::vector<double> member_loss(n);
  const int threads = cfg.threads > 0 ? cfg.threads : default_thread_count();
  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng(dropout_seeds[i]);
    auto fwd = head_forward(params, inputs[i], ForwardMode::train(rng, cfg.dropout));
    const HuberResult h = huber(fwd.output, targets[i], cfg.huber_delta);
    member_loss[i] = h.loss;
    member_grads[i] = head_backward(params, fwd.trace, h.d_pred * scale);
  });

  BatchGradient<Params> out{zeros_like(params), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    add_into(out.grad.tensors(), std::as_const(member_grads[i]).tensors());
    out.loss += member_loss[i];
  }
  out.loss *= scale;
  return out;
}

std::string TrainHistory::to_csv() const {
  std::ostringstream out;
  out << "epoch,lr,train_loss,val_scc,val_pcc,val_rmse\n";
  for (const auto& e : epochs) {
    out << e.epoch << ',' << format_real(e.lr) << ',' << format_real(e.train_loss) << ',';
    if (e.validation) {
      out << metric_field(e.validation->scc) << ',' << metric_field(e.validation->pcc) << ','
          << format_real(e.validation->rmse);
    } else {
      out << "nan,nan,nan";
    }
    out << '\n';
  }
  return out.str();
}

template <class Params>
std::vector<double> predict_all(const Params& params, std::span<const LabeledSequence> data) {
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = predict(params, data[i].input);
  return out;
}

template <class Params>
Metrics evaluate_head(const Params& params, std::span<const LabeledSequence> data) {
  if (data.empty()) throw ValidationError("cannot evaluate an empty split");
  std::vector<double> targets(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) targets[i] = data[i].target;
  return compute_metrics(predict_all(params, data), targets);
}

template <class Params>
TrainResult<Params> train_head(Params initial, std::span<const LabeledSequence> train,
                               const TrainConfig& cfg,
                               std::span<const LabeledSequence> validation) {
  cfg.validate();
  if (train.empty()) throw EmptyTrainingSet("training split is empty");
  const auto dim = train.front().input.dim();
  std::vector<SequenceInput> inputs;
  inputs.reserve(train.size());
  for (const auto& ex : train) {
    if (ex.input.dim() != dim) {
      throw DimMismatch("sequence '" + ex.image_id + "' has dim " +
                        std::to_string(ex.input.dim()) + ", expected " + std::to_string(dim));
    }
    inputs.push_back(ex.input);
  }

  TrainResult<Params> result{std::move(initial), {}};
  Rng master(cfg.seed);
  Rng order_rng = master.split();
  Rng dropout_rng = master.split();
  AdamState adam;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cfg.learning_rate(epoch);
    double loss_sum = 0.0;
    for (const Batch& batch :
         make_batches(inputs, static_cast<std::size_t>(cfg.batch_size),
                      cfg.shuffle ? &order_rng : nullptr)) {
      std::vector<double> targets;
      std::vector<std::uint64_t> seeds;
      for (auto i : batch.members) {
        targets.push_back(train[i].target);
        seeds.push_back(dropout_rng.next_u64());
      }
      auto bg = batch_gradient(result.params, batch.inputs, targets, seeds, cfg);
      auto param_refs = result.params.tensors();
      auto grad_refs = std::as_const(bg.grad).tensors();
      adam_step(param_refs, grad_refs, adam, lr, cfg);
      loss_sum += bg.loss * static_cast<double>(batch.members.size());
    }
    EpochRecord record{epoch, lr, loss_sum / static_cast<double>(train.size()), std::nullopt};
    if (!validation.empty()) record.validation = evaluate_head(result.params, validation);
    result.history.epochs.push_back(std::move(record));
  }
  return result;
}

TrainResult<GruHeadParams> train_gru_head(std::span<const LabeledSequence> train,
                                          const TrainConfig& cfg,
                                          std::array<std::size_t, 4> hidden,
                                          std::span<const LabeledSequence> validation) {
  if (train.empty()) throw EmptyTrainingSet("training split is empty");
  std::vector<SequenceInput> inputs;
  for (const auto& ex : train) inputs.push_back(ex.input);
  HeadShape shape{train.front().input.dim(), hidden};
  Rng init_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  GruHeadParams params = init_gru_head(shape, init_rng);
  params.mean = fit_zerocenter(inputs);
  return train_head(std::move(params), train, cfg, validation);
}

TrainResult<BaselineParams> train_baseline(std::span<const LabeledSequence> train,
                                           const TrainConfig& cfg, std::size_t hidden,
                                           std::span<const LabeledSequence> validation) {
  if (train.empty()) throw EmptyTrainingSet("training split is empty");
  std::vector<SequenceInput> inputs;
  for (const auto& ex : train) inputs.push_back(ex.input);
  Rng init_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  BaselineParams params = init_baseline(train.front().input.dim(), hidden, init_rng);
  params.mean = fit_pooled_zerocenter(inputs);
  return train_head(std::move(params), train, cfg, validation);
}

#define SEQIQA_INSTANTIATE(P)                                                                  \
  template BatchGradient<P> batch_gradient(const P&, std::span<const SequenceInput>,          \
                                           std::span<const double>,                           \
                                           std::span<const std::uint64_t>, const TrainConfig&); \
  template TrainResult<P> train_head(P, std::span<const LabeledSequence>, const TrainConfig&,  \
                                     std::span<const LabeledSequence>);                        \
  template std::vector<double> predict_all(const P&, std::span<const LabeledSequence>);        \
  template Metrics evaluate_head(const P&, std::span<const LabeledSequence>);

SEQIQA_INSTANTIATE(GruHeadParams)
SEQIQA_INSTANTIATE(BaselineParams)

#undef SEQIQA_INSTANTIATE

}  // namespace seqiqa
