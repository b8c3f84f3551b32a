// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqiqa/core_types.hpp"

namespace seqiqa {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class TensorRole {
  Weight,  // trained, L2-decayed
  Bias,    // trained, not decayed
  Frozen,  // stored with the model, never trained (normalization mean)
};

/// Named flat view over one parameter tensor, row-major.
template <class T>
struct BasicTensorRef {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::span<T> data;
  TensorRole role = TensorRole::Weight;
};

using TensorRef = BasicTensorRef<double>;
using ConstTensorRef = BasicTensorRef<const double>;

inline TensorRef tensor_ref(std::string name, Matrix& m, TensorRole role) {
  return {std::move(name), static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
          std::span<double>(m.data(), static_cast<std::size_t>(m.size())), role};
}
inline TensorRef tensor_ref(std::string name, Vector& v, TensorRole role) {
  return {std::move(name), static_cast<std::size_t>(v.size()), 1,
          std::span<double>(v.data(), static_cast<std::size_t>(v.size())), role};
}

std::vector<ConstTensorRef> to_const_refs(const std::vector<TensorRef>& refs);

/// Model input: one feature vector per row plus an activity mask. Inactive
/// (padding) steps leave recurrent state untouched.
struct SequenceInput {
  Matrix steps;                      // T x D
  std::vector<std::uint8_t> active;  // length T

  static SequenceInput from(const FeatureSequence& seq);

  std::size_t length() const noexcept { return active.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(steps.cols()); }
  std::size_t active_count() const noexcept;

  /// Appends zero rows marked inactive up to `length` steps.
  SequenceInput padded_to(std::size_t length) const;
};

/// How a forward pass treats dropout.
struct ForwardMode {
  Rng* rng = nullptr;
  double dropout = 0.0;

  bool training() const noexcept { return rng != nullptr; }

  static ForwardMode eval() { return {}; }
  /// Inverted dropout at `rate`, masks drawn from `rng`; also records a trace.
  static ForwardMode train(Rng& rng, double rate = 0.25) { return {&rng, rate}; }
};

template <class Trace>
struct ForwardResult {
  double output = 0.0;
  std::optional<Trace> trace;  // present only for training-mode passes
};

struct Dense {
  Matrix weight;
  Vector bias;

  static Dense zeros(std::size_t out, std::size_t in) {
    return {Matrix::Zero(out, in), Vector::Zero(out)};
  }
};

struct DenseBlockCache {
  Vector input;
  Vector pre;   // weight * input + bias
  Vector keep;  // dropout multipliers: 0 or 1 / (1 - rate)
};

/// dropout(relu(weight * x + bias)). In eval mode `keep` is all ones.
Vector dense_relu_dropout(const Dense& layer, const Vector& x, const ForwardMode& mode,
                          DenseBlockCache* cache);

/// Accumulates parameter gradients into `grad`; returns d loss / d input.
Vector dense_relu_dropout_backward(const Dense& layer, const DenseBlockCache& cache,
                                   const Vector& d_out, Dense& grad);

/// U(-a, a) with a = sqrt(6 / (fan_in + fan_out)), drawn row-major.
Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace seqiqa
