// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "seqiqa/layers.hpp"

namespace seqiqa {

/// One GRU layer:
///   z  = sigmoid(w_z x + u_z h + b_z)
///   r  = sigmoid(w_r x + u_r h + b_r)
///   h~ = tanh(w_h x + u_h (r * h) + b_h)
///   h' = z * h + (1 - z) * h~
struct GruLayerParams {
  Matrix w_z, w_r, w_h;  // hidden x input
  Matrix u_z, u_r, u_h;  // hidden x hidden
  Vector b_z, b_r, b_h;

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(w_z.cols()); }
  std::size_t hidden_dim() const noexcept { return static_cast<std::size_t>(w_z.rows()); }

  static GruLayerParams zeros(std::size_t input, std::size_t hidden);
};

/// Cached activations of one GRU step.
struct GruStepCache {
  Vector x, h_prev, z, r, candidate, h;
};

Vector gru_cell_forward(const Vector& x, const Vector& h_prev, const GruLayerParams& p,
                        GruStepCache* cache = nullptr);

/// Accumulates parameter gradients into `grad`, writes d/dx and d/dh_prev.
void gru_cell_backward(const GruStepCache& cache, const Vector& d_h, const GruLayerParams& p,
                       GruLayerParams& grad, Vector& d_x, Vector& d_h_prev);

/// Layer widths of the regression head. Prelude blocks are square, so the
/// network is D -> hidden[0] -> hidden[1] -> hidden[2] -> hidden[3] -> 1.
struct HeadShape {
  std::size_t input_dim = 2048;
  std::array<std::size_t, 4> hidden{256, 128, 64, 32};

  friend bool operator==(const HeadShape&, const HeadShape&) = default;
};

/// All tensors of the recurrent regression head.
///
/// Per step, the input passes zerocenter -> prelude[0] -> gru[0] -> prelude[1]
/// -> gru[1]. The last hidden state of gru[1] then runs once through
/// prelude[2] -> gru[2] and prelude[3] -> gru[3] (single steps from a zero
/// state) and the output layer maps it to the predicted score. Each prelude is
/// a square dense layer followed by ReLU and dropout.
struct GruHeadParams {
  Vector mean;  // zerocenter offset, fitted on training data and frozen
  std::array<Dense, 4> prelude;
  std::array<GruLayerParams, 4> gru;
  Dense output;  // 1 x hidden[3]

  static GruHeadParams zeros(const HeadShape& shape);
  HeadShape shape() const;

  std::vector<TensorRef> tensors();
  std::vector<ConstTensorRef> tensors() const;
};

/// Glorot-uniform weights, zero biases, zero mean.
GruHeadParams init_gru_head(const HeadShape& shape, Rng& rng);

/// Per-component mean over every active step of every training sequence.
/// Throws EmptyTrainingSet when there are none.
Vector fit_zerocenter(std::span<const SequenceInput> train);

struct GruHeadTrace {
  std::vector<std::uint8_t> active;
  std::vector<DenseBlockCache> prelude0, prelude1;  // indexed by step
  std::vector<GruStepCache> gru0, gru1;
  DenseBlockCache prelude2, prelude3;
  GruStepCache gru2, gru3;
};

/// Throws EmptySequence when no step is active, ShapeError on dim mismatch.
ForwardResult<GruHeadTrace> head_forward(const GruHeadParams& params, const SequenceInput& input,
                                         const ForwardMode& mode);

/// Gradients of `d_output * output` w.r.t. every trainable tensor; the
/// gradient's `mean` is left at zero. Throws TraceRequired without a trace.
GruHeadParams head_backward(const GruHeadParams& params,
                            const std::optional<GruHeadTrace>& trace, double d_output);

/// Eval-mode convenience.
double predict(const GruHeadParams& params, const SequenceInput& input);

}  // namespace seqiqa
