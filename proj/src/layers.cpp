// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/layers.hpp"

#include <cmath>

#include "seqiqa/errors.hpp"

namespace seqiqa {

std::vector<ConstTensorRef> to_const_refs(const std::vector<TensorRef>& refs) {
  std::vector<ConstTensorRef> out;
  out.reserve(refs.size());
  for (const auto& r : refs) out.push_back({r.name, r.rows, r.cols, r.data, r.role});
  return out;
}

SequenceInput SequenceInput::from(const FeatureSequence& seq) {
  SequenceInput in;
  in.steps.resize(static_cast<Eigen::Index>(seq.size()), static_cast<Eigen::Index>(seq.dim));
  in.active.assign(seq.size(), 1);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto& values = seq.vectors[t].values;
    if (values.size() != seq.dim) throw ShapeError("feature vector length differs from dim");
    for (std::size_t d = 0; d < seq.dim; ++d) in.steps(t, d) = values[d];
  }
  return in;
}

std::size_t SequenceInput::active_count() const noexcept {
  std::size_t n = 0;
  for (auto a : active) n += a != 0;
  return n;
}

SequenceInput SequenceInput::padded_to(std::size_t length) const {
  if (length < this->length()) throw ShapeError("cannot pad a sequence to a shorter length");
  SequenceInput out;
  out.steps = Matrix::Zero(static_cast<Eigen::Index>(length), steps.cols());
  out.steps.topRows(steps.rows()) = steps;
  out.active = active;
  out.active.resize(length, 0);
  return out;
}

Vector dense_relu_dropout(const Dense& layer, const Vector& x, const ForwardMode& mode,
                          DenseBlockCache* cache) {
  if (x.size() != layer.weight.cols()) {
    throw ShapeError("dense input has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(layer.weight.cols()));
  }
  Vector pre = layer.weight * x + layer.bias;
  Vector out = pre.cwiseMax(0.0);
  Vector keep;
  if (mode.training() && mode.dropout > 0.0) {
    keep.resize(out.size());
    const double scale = 1.0 / (1.0 - mode.dropout);
    for (Eigen::Index i = 0; i < keep.size(); ++i) {
      keep[i] = mode.rng->bernoulli(mode.dropout) ? 0.0 : scale;
    }
    out.array() *= keep.array();
  } else {
    keep = Vector::Ones(out.size());
  }
  if (cache) {
    cache->input = x;
    cache->pre = std::move(pre);
    cache->keep = std::move(keep);
  }
  return out;
}

Vector dense_relu_dropout_backward(const Dense& layer, const DenseBlockCache& cache,
                                   const Vector& d_out, Dense& grad) {
  Vector d_pre = d_out.cwiseProduct(cache.keep);
  for (Eigen::Index i = 0; i < d_pre.size(); ++i) {
    if (cache.pre[i] <= 0.0) d_pre[i] = 0.0;
  }
  grad.weight.noalias() += d_pre * cache.input.transpose();
  grad.bias += d_pre;
  return layer.weight.transpose() * d_pre;
}

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
  return m;
}

}  // namespace seqiqa
