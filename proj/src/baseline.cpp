// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/baseline.hpp"

#include <string>

#include "seqiqa/errors.hpp"

namespace seqiqa {

BaselineParams BaselineParams::zeros(std::size_t input_dim, std::size_t hidden_dim) {
  return {Vector::Zero(input_dim), Dense::zeros(hidden_dim, input_dim), Dense::zeros(1, hidden_dim)};
}

std::vector<TensorRef> BaselineParams::tensors() {
  return {tensor_ref("mean", mean, TensorRole::Frozen),
          tensor_ref("hidden.weight", hidden.weight, TensorRole::Weight),
          tensor_ref("hidden.bias", hidden.bias, TensorRole::Bias),
          tensor_ref("output.weight", output.weight, TensorRole::Weight),
          tensor_ref("output.bias", output.bias, TensorRole::Bias)};
}

std::vector<ConstTensorRef> BaselineParams::tensors() const {
  return to_const_refs(const_cast<BaselineParams*>(this)->tensors());
}

BaselineParams init_baseline(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  BaselineParams p = BaselineParams::zeros(input_dim, hidden_dim);
  p.hidden.weight = glorot_uniform(hidden_dim, input_dim, rng);
  p.output.weight = glorot_uniform(1, hidden_dim, rng);
  return p;
}

Vector average_pool(const SequenceInput& input) {
  const std::size_t n = input.active_count();
  if (n == 0) throw EmptySequence("cannot average an empty sequence");
  Vector sum = Vector::Zero(input.steps.cols());
  for (std::size_t t = 0; t < input.length(); ++t) {
    if (input.active[t]) sum += input.steps.row(static_cast<Eigen::Index>(t)).transpose();
  }
  return sum / static_cast<double>(n);
}

Vector average_pool(const FeatureSequence& seq) {
  if (seq.vectors.empty()) throw EmptySequence("cannot average an empty sequence");
  return average_pool(SequenceInput::from(seq));
}

Vector fit_pooled_zerocenter(std::span<const SequenceInput> train) {
  if (train.empty()) throw EmptyTrainingSet("no training sequences to fit the mean on");
  const Eigen::Index dim = train.front().steps.cols();
  Vector sum = Vector::Zero(dim);
  for (const auto& seq : train) {
    if (seq.steps.cols() != dim) throw DimMismatch("training sequences differ in dim");
    sum += average_pool(seq);
  }
  return sum / static_cast<double>(train.size());
}

ForwardResult<BaselineTrace> baseline_forward(const BaselineParams& params, const Vector& pooled,
                                              const ForwardMode& mode) {
  if (pooled.size() != params.mean.size()) {
    throw ShapeError("pooled vector has length " + std::to_string(pooled.size()) +
                     ", expected " + std::to_string(params.mean.size()));
  }
  ForwardResult<BaselineTrace> result;
  BaselineTrace* trace = nullptr;
  if (mode.training()) trace = &result.trace.emplace();
  Vector h = dense_relu_dropout(params.hidden, pooled - params.mean, mode,
                                trace ? &trace->hidden : nullptr);
  result.output = params.output.weight.row(0).dot(h) + params.output.bias[0];
  if (trace) trace->hidden_out = std::move(h);
  return result;
}

ForwardResult<BaselineTrace> head_forward(const BaselineParams& params,
                                          const SequenceInput& input, const ForwardMode& mode) {
  return baseline_forward(params, average_pool(input), mode);
}

BaselineParams head_backward(const BaselineParams& params,
                             const std::optional<BaselineTrace>& trace, double d_output) {
  if (!trace) throw TraceRequired("head_backward needs a training-mode forward trace");
  BaselineParams grad = BaselineParams::zeros(params.input_dim(), params.hidden_dim());
  grad.output.weight.row(0) += d_output * trace->hidden_out.transpose();
  grad.output.bias[0] += d_output;
  const Vector d_h = params.output.weight.row(0).transpose() * d_output;
  dense_relu_dropout_backward(params.hidden, trace->hidden, d_h, grad.hidden);
  return grad;
}

double predict(const BaselineParams& params, const SequenceInput& input) {
  return head_forward(params, input, ForwardMode::eval()).output;
}

}  // namespace seqiqa
