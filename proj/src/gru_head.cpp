// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/gru_head.hpp"

#include <cmath>
#include <string>

#include "seqiqa/errors.hpp"

namespace seqiqa {
namespace {

Vector sigmoid(const Vector& v) {
  return v.unaryExpr([](double a) { return 1.0 / (1.0 + std::exp(-a)); });
}

void check_len(const Vector& v, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(v.size()) != expected) {
    throw ShapeError(std::string(what) + " has length " + std::to_string(v.size()) +
                     ", expected " + std::to_string(expected));
  }
}

void push_gru(std::vector<TensorRef>& out, const std::string& prefix, GruLayerParams& g) {
  out.push_back(tensor_ref(prefix + ".w_z", g.w_z, TensorRole::Weight));
  out.push_back(tensor_ref(prefix + ".w_r", g.w_r, TensorRole::Weight));
  out.push_back(tensor_ref(prefix + ".w_h", g.w_h, TensorRole::Weight));
  out.push_back(tensor_ref(prefix + ".u_z", g.u_z, TensorRole::Weight));
  out.push_back(tensor_ref(prefix + ".u_r", g.u_r, TensorRole::Weight));
  out.push_back(tensor_ref(prefix + ".u_h", g.u_h, TensorRole::Weight));
  out.push_back(tensor_ref(prefix + ".b_z", g.b_z, TensorRole::Bias));
  out.push_back(tensor_ref(prefix + ".b_r", g.b_r, TensorRole::Bias));
  out.push_back(tensor_ref(prefix + ".b_h", g.b_h, TensorRole::Bias));
}

}  // namespace

GruLayerParams GruLayerParams::zeros(std::size_t input, std::size_t hidden) {
  GruLayerParams p;
  p.w_z = p.w_r = p.w_h = Matrix::Zero(hidden, input);
  p.u_z = p.u_r = p.u_h = Matrix::Zero(hidden, hidden);
  p.b_z = p.b_r = p.b_h = Vector::Zero(hidden);
  return p;
}

Vector gru_cell_forward(const Vector& x, const Vector& h_prev, const GruLayerParams& p,
                        GruStepCache* cache) {
  check_len(x, p.input_dim(), "GRU input");
  check_len(h_prev, p.hidden_dim(), "GRU state");
  Vector z = sigmoid(p.w_z * x + p.u_z * h_prev + p.b_z);
  Vector r = sigmoid(p.w_r * x + p.u_r * h_prev + p.b_r);
  Vector candidate =
      (p.w_h * x + p.u_h * r.cwiseProduct(h_prev) + p.b_h).array().tanh().matrix();
  Vector h = z.cwiseProduct(h_prev) + (Vector::Ones(z.size()) - z).cwiseProduct(candidate);
  if (cache) {
    cache->x = x;
    cache->h_prev = h_prev;
    cache->z = std::move(z);
    cache->r = std::move(r);
    cache->candidate = std::move(candidate);
    cache->h = h;
  }
  return h;
}

void gru_cell_backward(const GruStepCache& c, const Vector& d_h, const GruLayerParams& p,
                       GruLayerParams& grad, Vector& d_x, Vector& d_h_prev) {
  const auto ones = Vector::Ones(c.z.size()).array();
  const Vector d_z_pre =
      (d_h.array() * (c.h_prev - c.candidate).array() * c.z.array() * (ones - c.z.array()))
          .matrix();
  const Vector d_c_pre = (d_h.array() * (ones - c.z.array()) *
                          (ones - c.candidate.array().square()))
                             .matrix();
  const Vector d_rh = p.u_h.transpose() * d_c_pre;
  const Vector d_r_pre =
      (d_rh.array() * c.h_prev.array() * c.r.array() * (ones - c.r.array())).matrix();
  const Vector rh = c.r.cwiseProduct(c.h_prev);

  grad.w_z.noalias() += d_z_pre * c.x.transpose();
  grad.w_r.noalias() += d_r_pre * c.x.transpose();
  grad.w_h.noalias() += d_c_pre * c.x.transpose();
  grad.u_z.noalias() += d_z_pre * c.h_prev.transpose();
  grad.u_r.noalias() += d_r_pre * c.h_prev.transpose();
  grad.u_h.noalias() += d_c_pre * rh.transpose();
  grad.b_z += d_z_pre;
  grad.b_r += d_r_pre;
  grad.b_h += d_c_pre;

  d_x = p.w_z.transpose() * d_z_pre + p.w_r.transpose() * d_r_pre +
        p.w_h.transpose() * d_c_pre;
  d_h_prev = d_h.cwiseProduct(c.z) + d_rh.cwiseProduct(c.r) + p.u_z.transpose() * d_z_pre +
             p.u_r.transpose() * d_r_pre;
}

GruHeadParams GruHeadParams::zeros(const HeadShape& shape) {
  GruHeadParams p;
  p.mean = Vector::Zero(shape.input_dim);
  std::size_t in = shape.input_dim;
  for (std::size_t k = 0; k < 4; ++k) {
    p.prelude[k] = Dense::zeros(in, in);
    p.gru[k] = GruLayerParams::zeros(in, shape.hidden[k]);
    in = shape.hidden[k];
  }
  p.output = Dense::zeros(1, in);
  return p;
}

HeadShape GruHeadParams::shape() const {
  HeadShape s;
  s.input_dim = static_cast<std::size_t>(mean.size());
  for (std::size_t k = 0; k < 4; ++k) s.hidden[k] = gru[k].hidden_dim();
  return s;
}

std::vector<TensorRef> GruHeadParams::tensors() {
  std::vector<TensorRef> out;
  out.push_back(tensor_ref("mean", mean, TensorRole::Frozen));
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string prelude_name = "prelude" + std::to_string(k);
    out.push_back(tensor_ref(prelude_name + ".weight", prelude[k].weight, TensorRole::Weight));
    out.push_back(tensor_ref(prelude_name + ".bias", prelude[k].bias, TensorRole::Bias));
    push_gru(out, "gru" + std::to_string(k), gru[k]);
  }
  out.push_back(tensor_ref("output.weight", output.weight, TensorRole::Weight));
  out.push_back(tensor_ref("output.bias", output.bias, TensorRole::Bias));
  return out;
}

std::vector<ConstTensorRef> GruHeadParams::tensors() const {
  return to_const_refs(const_cast<GruHeadParams*>(this)->tensors());
}

GruHeadParams init_gru_head(const HeadShape& shape, Rng& rng) {
  GruHeadParams p = GruHeadParams::zeros(shape);
  for (std::size_t k = 0; k < 4; ++k) {
    auto& pre = p.prelude[k];
    pre.weight = glorot_uniform(pre.weight.rows(), pre.weight.cols(), rng);
    auto& g = p.gru[k];
    for (Matrix* m : {&g.w_z, &g.w_r, &g.w_h, &g.u_z, &g.u_r, &g.u_h}) {
      *m = glorot_uniform(m->rows(), m->cols(), rng);
    }
  }
  p.output.weight = glorot_uniform(1, shape.hidden[3], rng);
  return p;
}

Vector fit_zerocenter(std::span<const SequenceInput> train) {
  if (train.empty()) throw EmptyTrainingSet("no training sequences to fit the mean on");
  const Eigen::Index dim = train.front().steps.cols();
  Vector sum = Vector::Zero(dim);
  std::size_t count = 0;
  for (const auto& seq : train) {
    if (seq.steps.cols() != dim) throw DimMismatch("training sequences differ in dim");
    for (std::size_t t = 0; t < seq.length(); ++t) {
      if (!seq.active[t]) continue;
      sum += seq.steps.row(static_cast<Eigen::Index>(t)).transpose();
      ++count;
    }
  }
  if (count == 0) throw EmptyTrainingSet("training sequences hold no active steps");
  return sum / static_cast<double>(count);
}

ForwardResult<GruHeadTrace> head_forward(const GruHeadParams& params, const SequenceInput& input,
                                         const ForwardMode& mode) {
  if (input.active_count() == 0) throw EmptySequence("sequence has no active steps");
  if (static_cast<Eigen::Index>(input.dim()) != params.mean.size()) {
    throw ShapeError("sequence dim " + std::to_string(input.dim()) + " does not match head dim " +
                     std::to_string(params.mean.size()));
  }
  if (input.steps.rows() != static_cast<Eigen::Index>(input.length())) {
    throw ShapeError("sequence mask length differs from step count");
  }

  ForwardResult<GruHeadTrace> result;
  GruHeadTrace* trace = nullptr;
  if (mode.training()) {
    result.trace.emplace();
    trace = &*result.trace;
    const std::size_t T = input.length();
    trace->active = input.active;
    trace->prelude0.resize(T);
    trace->prelude1.resize(T);
    trace->gru0.resize(T);
    trace->gru1.resize(T);
  }

  Vector h0 = Vector::Zero(params.gru[0].hidden_dim());
  Vector h1 = Vector::Zero(params.gru[1].hidden_dim());
  for (std::size_t t = 0; t < input.length(); ++t) {
    if (!input.active[t]) continue;
    const Vector x = input.steps.row(static_cast<Eigen::Index>(t)).transpose() - params.mean;
    const Vector a0 =
        dense_relu_dropout(params.prelude[0], x, mode, trace ? &trace->prelude0[t] : nullptr);
    h0 = gru_cell_forward(a0, h0, params.gru[0], trace ? &trace->gru0[t] : nullptr);
    const Vector a1 =
        dense_relu_dropout(params.prelude[1], h0, mode, trace ? &trace->prelude1[t] : nullptr);
    h1 = gru_cell_forward(a1, h1, params.gru[1], trace ? &trace->gru1[t] : nullptr);
  }

  const Vector a2 =
      dense_relu_dropout(params.prelude[2], h1, mode, trace ? &trace->prelude2 : nullptr);
  const Vector h2 = gru_cell_forward(a2, Vector::Zero(params.gru[2].hidden_dim()), params.gru[2],
                                     trace ? &trace->gru2 : nullptr);
  const Vector a3 =
      dense_relu_dropout(params.prelude[3], h2, mode, trace ? &trace->prelude3 : nullptr);
  const Vector h3 = gru_cell_forward(a3, Vector::Zero(params.gru[3].hidden_dim()), params.gru[3],
                                     trace ? &trace->gru3 : nullptr);
  result.output = params.output.weight.row(0).dot(h3) + params.output.bias[0];
  return result;
}

GruHeadParams head_backward(const GruHeadParams& params,
                            const std::optional<GruHeadTrace>& trace, double d_output) {
  if (!trace) throw TraceRequired("head_backward needs a training-mode forward trace");
  const GruHeadTrace& tr = *trace;
  GruHeadParams grad = GruHeadParams::zeros(params.shape());

  grad.output.weight.row(0) += d_output * tr.gru3.h.transpose();
  grad.output.bias[0] += d_output;
  Vector d_h = params.output.weight.row(0).transpose() * d_output;

  Vector d_x, d_h_prev;
  gru_cell_backward(tr.gru3, d_h, params.gru[3], grad.gru[3], d_x, d_h_prev);
  d_h = dense_relu_dropout_backward(params.prelude[3], tr.prelude3, d_x, grad.prelude[3]);
  gru_cell_backward(tr.gru2, d_h, params.gru[2], grad.gru[2], d_x, d_h_prev);
  Vector d_h1 = dense_relu_dropout_backward(params.prelude[2], tr.prelude2, d_x, grad.prelude[2]);

  // Backpropagation through time; padding steps pass the state gradient
  // through unchanged because they copy the state forward.
  Vector d_h0 = Vector::Zero(params.gru[0].hidden_dim());
  for (std::size_t t = tr.active.size(); t-- > 0;) {
    if (!tr.active[t]) continue;
    gru_cell_backward(tr.gru1[t], d_h1, params.gru[1], grad.gru[1], d_x, d_h_prev);
    d_h1 = d_h_prev;
    d_h0 += dense_relu_dropout_backward(params.prelude[1], tr.prelude1[t], d_x, grad.prelude[1]);
    gru_cell_backward(tr.gru0[t], d_h0, params.gru[0], grad.gru[0], d_x, d_h_prev);
    d_h0 = d_h_prev;
    dense_relu_dropout_backward(params.prelude[0], tr.prelude0[t], d_x, grad.prelude[0]);
  }
  return grad;
}

double predict(const GruHeadParams& params, const SequenceInput& input) {
  return head_forward(params, input, ForwardMode::eval()).output;
}

}  // namespace seqiqa
