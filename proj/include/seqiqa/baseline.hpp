// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "seqiqa/layers.hpp"

namespace seqiqa {

/// Order-blind comparison head: average-pool the sequence, zerocenter, then
/// dense(hidden) -> ReLU -> dropout -> dense(1).
struct BaselineParams {
  Vector mean;  // zerocenter offset over pooled training vectors
  Dense hidden;
  Dense output;

  static BaselineParams zeros(std::size_t input_dim, std::size_t hidden_dim = 256);
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
  std::size_t hidden_dim() const noexcept { return static_cast<std::size_t>(hidden.bias.size()); }

  std::vector<TensorRef> tensors();
  std::vector<ConstTensorRef> tensors() const;
};

BaselineParams init_baseline(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

/// Component-wise mean over the active steps. Throws EmptySequence.
Vector average_pool(const SequenceInput& input);
Vector average_pool(const FeatureSequence& seq);

/// Mean of the pooled training vectors.
Vector fit_pooled_zerocenter(std::span<const SequenceInput> train);

struct BaselineTrace {
  DenseBlockCache hidden;
  Vector hidden_out;
};

ForwardResult<BaselineTrace> baseline_forward(const BaselineParams& params, const Vector& pooled,
                                              const ForwardMode& mode);
ForwardResult<BaselineTrace> head_forward(const BaselineParams& params,
                                          const SequenceInput& input, const ForwardMode& mode);

/// Throws TraceRequired without a trace.
BaselineParams head_backward(const BaselineParams& params,
                             const std::optional<BaselineTrace>& trace, double d_output);

double predict(const BaselineParams& params, const SequenceInput& input);

}  // namespace seqiqa
