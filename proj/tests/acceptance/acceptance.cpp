// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqiqa/checkpoint.hpp"
#include "seqiqa/errors.hpp"
#include "seqiqa/feature_backend.hpp"
#include "seqiqa/gru_head.hpp"
#include "seqiqa/metrics.hpp"
#include "seqiqa/multires.hpp"
#include "seqiqa/patch_sampler.hpp"
#include "seqiqa/pipeline.hpp"
#include "seqiqa/si_ordering.hpp"
#include "seqiqa/synth.hpp"
#include "seqiqa/trainer.hpp"

using namespace seqiqa;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<std::uint8_t> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

ImageBuffer noise_image(int w, int h, std::uint64_t seed) {
  Rng rng(seed);
  ImageBuffer img(w, h, 3);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

LumaField field(int w, int h, const std::function<double(int, int)>& f) {
  LumaField l{w, h, std::vector<double>(static_cast<std::size_t>(w) * h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) l.at(x, y) = f(x, y);
  }
  return l;
}

double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({1e-6, std::abs(a), std::abs(b)});
}

SequenceInput random_sequence(std::size_t T, std::size_t D, Rng& rng) {
  SequenceInput s;
  s.steps = Matrix(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(D));
  for (Eigen::Index i = 0; i < s.steps.size(); ++i) s.steps.data()[i] = rng.uniform(-1.0, 1.0);
  s.active.assign(T, 1);
  return s;
}

GruHeadParams random_head(const HeadShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  GruHeadParams p = init_gru_head(shape, rng);
  for (auto& t : p.tensors()) {
    if (t.role != TensorRole::Weight) {
      for (double& v : t.data) v = rng.uniform(-0.5, 0.5);
    }
  }
  return p;
}

// 1. Grid constants.
Outcome grid_constants() {
  Outcome o;
  struct Case {
    int w, h, n, sx, sy;
  };
  const Case cases[] = {{1024, 768, 20, 200, 181}, {512, 384, 6, 144, 160}, {500, 500, 9, 138, 138}};
  const auto t0 = Clock::now();
  std::vector<PatchGrid> grids;
  for (const auto& c : cases) grids.push_back(compute_grid(c.w, c.h, 224));
  const double elapsed = seconds_since(t0);
  for (std::size_t i = 0; i < grids.size(); ++i) {
    const auto& c = cases[i];
    const auto& g = grids[i];
    o.require(static_cast<int>(g.positions.size()) == c.n && g.stride_x == c.sx && g.stride_y == c.sy,
              std::to_string(c.w) + "x" + std::to_string(c.h) + " gave " +
                  std::to_string(g.positions.size()) + " patches, strides " +
                  std::to_string(g.stride_x) + "/" + std::to_string(g.stride_y));
  }
  o.require(elapsed < 1e-3, fmt("took %.3g s", elapsed));
  if (o.ok) o.detail = "20/6/9 patches, strides 200/181 144/160 138/138, " + fmt("%.1f us", elapsed * 1e6);
  return o;
}

// 2. Sequence composition.
Outcome sequence_composition() {
  Outcome o;
  StatFeatureBackend backend;
  const FeatureSequence seq = build_sequence(noise_image(1024, 768, 2), "img", MultiresConfig{}, backend);
  o.require(seq.size() == 26, "sequence length " + std::to_string(seq.size()));
  o.require(seq.count(ScaleGroup::Low) == 6 && seq.count(ScaleGroup::High) == 20, "group sizes");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& v = seq.vectors[i];
    o.require(v.scale_group == (i < 6 ? ScaleGroup::Low : ScaleGroup::High), "LOW group is not first");
    if (i > 0 && seq.vectors[i - 1].scale_group == v.scale_group) {
      o.require(seq.vectors[i - 1].si <= v.si, "SI decreases inside a group at step " + std::to_string(i));
    }
  }
  if (o.ok) o.detail = "26 vectors, 6 LOW then 20 HIGH, SI non-decreasing per group";
  return o;
}

// 3. Sobel and SI.
Outcome sobel_suite() {
  Outcome o;
  const LumaField flat = field(12, 9, [](int, int) { return 87.0; });
  o.require(spatial_activity(flat) == 0.0, "constant patch SI != 0");

  for (auto f : {std::function<double(int, int)>([](int x, int) { return x; }),
                 std::function<double(int, int)>([](int, int y) { return y; })}) {
    const LumaField ramp = field(16, 16, f);
    for (double v : sobel_magnitude(ramp).values) o.require(v == 8.0, "ramp magnitude " + std::to_string(v));
    o.require(spatial_activity(ramp) == 0.0, "ramp SI != 0");
  }

  static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const LumaField l = field(5, 5, [&](int, int) { return rng.uniform(0.0, 255.0); });
    const RealField got = sobel_magnitude(l);
    o.require(got.width == 3 && got.height == 3, "5x5 field must give a 3x3 interior");
    for (int y = 1; y < 4; ++y) {
      for (int x = 1; x < 4; ++x) {
        double gx = 0, gy = 0;
        for (int j = -1; j <= 1; ++j) {
          for (int i = -1; i <= 1; ++i) {
            gx += kx[j + 1][i + 1] * l.at(x + i, y + j);
            gy += ky[j + 1][i + 1] * l.at(x + i, y + j);
          }
        }
        worst = std::max(worst, std::abs(got.at(x - 1, y - 1) - std::hypot(gx, gy)));
      }
    }
    const LumaField rot = field(5, 5, [&](int x, int y) { return l.at(4 - x, 4 - y); });
    o.require(spatial_activity(rot) == spatial_activity(l), "SI changed under 180 degree rotation");
  }
  o.require(worst <= 1e-12, fmt("brute-force mismatch %.3g", worst));
  if (o.ok) o.detail = fmt("ramp 8.0, brute-force max diff %.2g, rotation exact", worst);
  return o;
}

// 4. Head gradients against central differences.
Outcome gradient_check() {
  Outcome o;
  const auto t0 = Clock::now();
  const HeadShape shape{6, {5, 4, 3, 2}};
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GruHeadParams params = random_head(shape, seed);
    Rng rng(seed + 1000);
    const SequenceInput input = random_sequence(3, 6, rng);
    Rng unused(0);
    const auto fwd = head_forward(params, input, ForwardMode::train(unused, 0.0));
    const GruHeadParams grad = head_backward(params, fwd.trace, 1.0);
    const auto g = grad.tensors();
    auto refs = params.tensors();
    const double eps = 1e-5;
    for (std::size_t k = 0; k < refs.size(); ++k) {
      if (refs[k].role == TensorRole::Frozen) continue;
      for (std::size_t i = 0; i < refs[k].data.size(); ++i) {
        double& w = refs[k].data[i];
        const double saved = w;
        w = saved + eps;
        const double up = predict(params, input);
        w = saved - eps;
        const double down = predict(params, input);
        w = saved;
        worst = std::max(worst, rel_error(g[k].data[i], (up - down) / (2 * eps)));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(worst < 1e-4, fmt("max relative error %.3g", worst));
  o.require(elapsed < 30.0, fmt("took %.1f s", elapsed));
  if (o.ok) o.detail = fmt("max relative error %.2g over 20 seeds, ", worst) + fmt("%.2f s", elapsed);
  return o;
}

// 5. GRU variant pinning.
Outcome gru_pinning() {
  Outcome o;
  const GruLayerParams p = GruLayerParams::zeros(4, 5);
  Vector v(5);
  v << 1.0, -2.5, 0.125, 7.0, -1e-3;
  const Vector h = gru_cell_forward(Vector::Zero(4), v, p);
  for (int i = 0; i < 5; ++i) o.require(h[i] == 0.5 * v[i], "h != 0.5 v at " + std::to_string(i));
  if (o.ok) o.detail = "zero-parameter cell returns 0.5 h_prev exactly";
  return o;
}

// 6. Adam against the scripted reference.
Outcome adam_oracle() {
  Outcome o;
  std::ifstream in(std::string(SEQIQA_TEST_DATA) + "/adam_reference.json");
  if (!in) return {false, "reference trace not found"};
  const auto doc = nlohmann::json::parse(in);
  TrainConfig cfg;
  cfg.beta1 = doc.at("beta1");
  cfg.beta2 = doc.at("beta2");
  cfg.adam_eps = doc.at("eps");
  const double lr = doc.at("lr");
  double worst = 0.0;
  for (const auto& c : doc.at("cases")) {
    cfg.l2 = c.at("l2");
    const double a = c.at("a"), center = c.at("c");
    Vector x = Vector::Constant(1, c.at("x0").get<double>());
    Vector g(1);
    AdamState state;
    for (double want : c.at("trace").get<std::vector<double>>()) {
      g[0] = a * (x[0] - center);
      std::vector<TensorRef> p{tensor_ref("x", x, TensorRole::Weight)};
      adam_step(p, to_const_refs({tensor_ref("g", g, TensorRole::Weight)}), state, lr, cfg);
      worst = std::max(worst, std::abs(x[0] - want));
    }
  }
  o.require(worst <= 1e-12, fmt("trace mismatch %.3g", worst));

  TrainConfig plain;
  plain.l2 = 0.0;
  Vector x = Vector::Zero(1), g = Vector::Ones(1);
  AdamState state;
  std::vector<TensorRef> p{tensor_ref("x", x, TensorRole::Weight)};
  adam_step(p, to_const_refs({tensor_ref("g", g, TensorRole::Weight)}), state, 2e-4, plain);
  o.require(std::abs(-x[0] - 1.99999998e-4) < 1e-15, fmt("first step %.10g", -x[0]));
  if (o.ok) o.detail = fmt("trace max diff %.2g, ", worst) + fmt("first step %.9g", -x[0]);
  return o;
}

// 7. Huber.
Outcome huber_suite() {
  Outcome o;
  const double d = 1.0 / 9.0;
  for (double e : {d, -d}) {
    const auto at = huber(e, 0.0, d);
    const auto in = huber(std::nextafter(e, 0.0), 0.0, d);
    const auto out = huber(std::nextafter(e, 2 * e), 0.0, d);
    o.require(std::abs(0.5 * e * e - d * (std::abs(e) - 0.5 * d)) <= 1e-15, "branch values differ at delta");
    o.require(std::abs(in.loss - at.loss) <= 1e-15 && std::abs(out.loss - at.loss) <= 1e-15,
              "value jumps at delta");
    o.require(std::abs(in.d_pred - at.d_pred) <= 1e-15 && std::abs(out.d_pred - at.d_pred) <= 1e-15,
              "derivative jumps at delta");
  }
  const auto one = huber(1.0, 0.0, d);
  o.require(std::abs(one.loss - 17.0 / 162.0) <= 1e-15, fmt("loss at e=1 is %.17g", one.loss));
  o.require(one.d_pred == d, "derivative at e=1 is not delta");
  if (o.ok) o.detail = "continuous at 1/9, L(1) = 17/162";
  return o;
}

// 8. Masking equivalence.
Outcome masking_equivalence() {
  Outcome o;
  Rng rng(17);
  const HeadShape shape{6, {5, 4, 3, 2}};
  const GruHeadParams p = random_head(shape, 4);
  TrainConfig cfg;
  cfg.dropout = 0.0;
  const std::size_t lengths[] = {2, 5, 3, 7, 1};
  std::vector<SequenceInput> singles, padded;
  std::vector<double> targets;
  std::vector<std::uint64_t> seeds;
  for (std::size_t len : lengths) {
    singles.push_back(random_sequence(len, 6, rng));
    padded.push_back(singles.back().padded_to(7));
    for (std::size_t t = len; t < 7; ++t) padded.back().steps.row(static_cast<Eigen::Index>(t)).setConstant(3.0);
    targets.push_back(rng.uniform());
    seeds.push_back(0);
  }
  for (std::size_t i = 0; i < singles.size(); ++i) {
    o.require(std::abs(predict(p, singles[i]) - predict(p, padded[i])) <= 1e-9, "forward differs");
  }
  const auto batch = batch_gradient(p, padded, targets, seeds, cfg);
  GruHeadParams sum = GruHeadParams::zeros(shape);
  double loss = 0.0;
  const double n = static_cast<double>(singles.size());
  for (std::size_t i = 0; i < singles.size(); ++i) {
    const auto one = batch_gradient(p, std::span(&singles[i], 1), std::span(&targets[i], 1),
                                    std::span(&seeds[i], 1), cfg);
    auto acc = sum.tensors();
    const auto part = one.grad.tensors();
    for (std::size_t k = 0; k < acc.size(); ++k) {
      for (std::size_t j = 0; j < acc[k].data.size(); ++j) acc[k].data[j] += part[k].data[j] / n;
    }
    loss += one.loss / n;
  }
  double worst = std::abs(batch.loss - loss);
  const auto a = std::as_const(batch.grad).tensors();
  const auto b = std::as_const(sum).tensors();
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (std::size_t j = 0; j < a[k].data.size(); ++j) worst = std::max(worst, std::abs(a[k].data[j] - b[k].data[j]));
  }
  o.require(worst <= 1e-9, fmt("gradient mismatch %.3g", worst));
  if (o.ok) o.detail = fmt("padded vs unpadded max diff %.2g", worst);
  return o;
}

// 9. Overfit capacity.
Outcome overfit_capacity() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(9);
  std::vector<LabeledSequence> data;
  for (int i = 0; i < 32; ++i) {
    SequenceInput s = random_sequence(4 + rng.below(5), 16, rng);
    data.push_back({"s" + std::to_string(i), std::move(s), rng.uniform(0.1, 0.9)});
  }
  TrainConfig cfg;
  cfg.seed = 1;
  cfg.epochs = 300;
  cfg.lr0 = 1e-3;
  cfg.lr_factor = 1.0;
  cfg.batch_size = 8;
  cfg.dropout = 0.0;
  cfg.l2 = 0.0;
  const auto result = train_gru_head(data, cfg);
  const double rmse_unit = evaluate_head(result.params, data).rmse / 100.0;
  const double elapsed = seconds_since(t0);
  o.require(rmse_unit < 0.02, fmt("training RMSE %.4f", rmse_unit));
  o.require(elapsed < 120.0, fmt("took %.1f s", elapsed));
  if (o.ok) o.detail = fmt("training RMSE %.4f (0-1 scale), ", rmse_unit) + fmt("%.1f s", elapsed);
  return o;
}

struct StudyRun {
  DatasetManifest manifest;
  fs::path features;
  fs::path checkpoint;
  std::string report;
  EvalRow row;
  double seconds = 0.0;
};

// synth -> extract -> split -> train -> eval with the default configuration.
StudyRun run_study(const fs::path& root, SynthVariant variant) {
  fs::remove_all(root);
  const auto t0 = Clock::now();
  StudyRun run;
  SynthConfig synth;
  synth.count = 200;
  synth.seed = 7;
  synth.variant = variant;
  run.manifest = generate_synthetic_dataset(synth, root / "data");
  run.features = root / "features";
  StatFeatureBackend backend;
  const ExtractReport extracted = cmd_extract(run.manifest, run.features, MultiresConfig{}, backend);
  if (!extracted.failures.empty()) throw Error("extraction failed for " + extracted.failures[0].image_id);
  run.manifest = cmd_split(run.manifest, 0.8, 7);
  TrainOptions opts;
  opts.train.seed = 7;
  const TrainOutcome trained = cmd_train(run.manifest, run.features, opts);
  run.checkpoint = root / "model.json";
  save_checkpoint(trained.model, run.checkpoint);
  run.row = cmd_eval(trained.model, run.manifest, Split::Test, run.features);
  run.report = format_report(std::span(&run.row, 1));
  run.seconds = seconds_since(t0);
  return run;
}

std::string describe(const EvalRow& r) {
  return r.model + " SCC " + (r.metrics.scc ? fmt("%.3f", *r.metrics.scc) : "nan") + " RMSE " +
         fmt("%.2f", r.metrics.rmse);
}

// 10. End-to-end synthetic study plus the ordering ablation.
Outcome synthetic_study(const fs::path& scratch, StudyRun& run) {
  Outcome o;
  run = run_study(scratch / "study_a", SynthVariant::Plain);
  const double scc = run.row.metrics.scc.value_or(-1.0);
  o.require(scc > 0.9, "held-out " + describe(run.row) + " (needs SCC > 0.9)");
  o.require(run.row.metrics.rmse < 10.0, "held-out " + describe(run.row) + " (needs RMSE < 10)");
  o.require(run.seconds < 300.0, fmt("study took %.0f s", run.seconds));

  const auto t0 = Clock::now();
  const fs::path root = scratch / "ablation";
  fs::remove_all(root);
  SynthConfig synth;
  synth.count = 200;
  synth.seed = 7;
  synth.variant = SynthVariant::OrderSensitive;
  DatasetManifest m = generate_synthetic_dataset(synth, root / "data");
  StatFeatureBackend backend;
  cmd_extract(m, root / "features", MultiresConfig{}, backend);
  m = cmd_split(m, 0.8, 7);
  TrainOptions opts;
  opts.train.seed = 7;
  const auto rows = cmd_ablate(m, root / "features", opts);
  std::string table;
  const EvalRow* rnn = nullptr;
  const EvalRow* avg = nullptr;
  for (const auto& r : rows) {
    table += " " + describe(r) + ";";
    if (r.model == model_label(HeadKind::Rnn, true)) rnn = &r;
    if (r.model == model_label(HeadKind::Avg, true)) avg = &r;
  }
  if (rnn == nullptr || avg == nullptr) return {false, "ablation rows missing"};
  o.require(rnn->metrics.scc.value_or(-1.0) >= avg->metrics.scc.value_or(-1.0),
            "ablation: rnn below avg in SCC;" + table);
  const std::string summary = "study " + describe(run.row) + fmt(" in %.0f s;", run.seconds) +
                              " ablation" + table + fmt(" in %.0f s", seconds_since(t0));
  o.detail = o.ok ? summary : o.detail + " | " + summary;
  return o;
}

// 11. Determinism of the study.
Outcome determinism(const fs::path& scratch, const StudyRun& first) {
  Outcome o;
  const StudyRun second = run_study(scratch / "study_b", SynthVariant::Plain);
  o.require(slurp(first.checkpoint) == slurp(second.checkpoint), "checkpoint index differs");
  const auto blob_a = slurp(first.checkpoint.string() + ".bin");
  o.require(!blob_a.empty() && blob_a == slurp(second.checkpoint.string() + ".bin"), "checkpoint blob differs");
  o.require(first.report == second.report, "reports differ");
  if (o.ok) o.detail = "checkpoints and reports bitwise identical";
  return o;
}

// 12. Metric oracles.
Outcome metric_oracles() {
  Outcome o;
  auto pearson_oracle = [](const std::vector<double>& x, const std::vector<double>& y) {
    const long double n = static_cast<long double>(x.size());
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
  };
  auto rank_oracle = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      int less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = 1.0 + less + (equal - 1) / 2.0;
    }
    return r;
  };
  Rng rng(12);
  double worst = 0.0, worst_mono = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(50);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.below(8));  // ties
      y[i] = rng.uniform(-5.0, 5.0);
    }
    x[0] = 10.0;
    worst = std::max(worst, std::abs(pearson(x, y) - pearson_oracle(x, y)));
    worst = std::max(worst, std::abs(spearman(x, y) - pearson_oracle(rank_oracle(x), rank_oracle(y))));
    std::vector<double> fx(n);
    for (std::size_t i = 0; i < n; ++i) fx[i] = std::exp(x[i]) + 3.0 * x[i];
    worst_mono = std::max(worst_mono, std::abs(spearman(fx, y) - spearman(x, y)));
  }
  o.require(worst <= 1e-12, fmt("oracle mismatch %.3g", worst));
  o.require(worst_mono <= 1e-12, fmt("monotone transform changed SCC by %.3g", worst_mono));
  if (o.ok) o.detail = fmt("max oracle diff %.2g, ", worst) + fmt("monotone diff %.2g", worst_mono);
  return o;
}

// 13. Format round trips and positioned errors.
Outcome format_round_trips(const fs::path& scratch) {
  Outcome o;
  StatFeatureBackend backend;
  const FeatureSequence seq = build_sequence(noise_image(640, 480, 5), "round-trip", MultiresConfig{}, backend);
  const auto bytes = encode_feature_file(seq);
  o.require(encode_feature_file(decode_feature_file(bytes)) == bytes, "FSEQ second write differs");
  const fs::path f1 = scratch / "a.fseq", f2 = scratch / "b.fseq";
  write_feature_file(seq, f1);
  write_feature_file(read_feature_file(f1), f2);
  o.require(slurp(f1) == slurp(f2), "FSEQ files differ");

  int positioned = 0;
  auto expect_format_error = [&](const std::function<void()>& fn, std::size_t limit, const std::string& what) {
    try {
      fn();
      o.require(false, what + " was accepted");
    } catch (const FormatError& e) {
      o.require(e.offset() <= limit, what + ": offset out of range");
      ++positioned;
    } catch (const std::exception& e) {
      o.require(false, what + ": unexpected " + e.what());
    }
  };
  for (std::size_t cut = 0; cut < bytes.size(); cut += 1 + cut / 8) {
    expect_format_error([&] { decode_feature_file(std::span(bytes.data(), cut)); }, cut,
                        "FSEQ truncated to " + std::to_string(cut));
  }
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    auto bad = bytes;
    bad[rng.below(32)] ^= static_cast<std::uint8_t>(1 + rng.below(255));
    try {
      decode_feature_file(bad);
    } catch (const FormatError& e) {
      o.require(e.offset() <= bad.size(), "FSEQ corruption: offset out of range");
    } catch (const std::exception& e) {
      o.require(false, std::string("FSEQ corruption: unexpected ") + e.what());
    }
  }

  Model model;
  Rng init(1);
  GruHeadParams head = init_gru_head(HeadShape{48, {8, 6, 4, 2}}, init);
  head.mean = Vector::Constant(48, 0.25);
  model.params = head;
  model.seed = 3;
  model.config = {{"note", "round trip"}};
  const fs::path c1 = scratch / "m1.json", c2 = scratch / "m2.json";
  save_checkpoint(model, c1);
  save_checkpoint(load_checkpoint(c1), c2);
  auto index1 = slurp(c1), index2 = slurp(c2);
  const std::string s1(index1.begin(), index1.end());
  std::string s2(index2.begin(), index2.end());
  const auto at = s2.find("m2.json.bin");
  if (at != std::string::npos) s2.replace(at, 11, "m1.json.bin");
  o.require(s1 == s2, "checkpoint index differs");
  o.require(slurp(c1.string() + ".bin") == slurp(c2.string() + ".bin"), "checkpoint blob differs");

  const CheckpointData ck = encode_checkpoint(model, "m.bin");
  for (std::size_t cut = 0; cut < ck.index.size(); cut += 1 + cut / 4) {
    expect_format_error([&] { decode_checkpoint(std::string_view(ck.index).substr(0, cut), ck.blob); },
                        ck.index.size(), "checkpoint index truncated to " + std::to_string(cut));
  }
  for (std::size_t cut = 0; cut < ck.blob.size(); cut += 1 + cut / 4) {
    expect_format_error([&] { decode_checkpoint(ck.index, std::span(ck.blob.data(), cut)); }, cut,
                        "checkpoint blob truncated to " + std::to_string(cut));
  }
  if (o.ok) o.detail = "FSEQ and checkpoint byte-identical; " + std::to_string(positioned) + " malformed inputs positioned";
  return o;
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "seqiqa_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  StudyRun study;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"grid constants", grid_constants},
      {"sequence composition", sequence_composition},
      {"sobel and SI", sobel_suite},
      {"head gradients", gradient_check},
      {"GRU variant", gru_pinning},
      {"Adam reference", adam_oracle},
      {"Huber", huber_suite},
      {"masking equivalence", masking_equivalence},
      {"overfit capacity", overfit_capacity},
      {"synthetic study", [&] { return synthetic_study(scratch, study); }},
      {"determinism", [&] { return determinism(scratch, study); }},
      {"metric oracles", metric_oracles},
      {"format round trips", [&] { return format_round_trips(scratch); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.ok;
    std::printf("%s %2zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
