// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

#include "seqiqa/errors.hpp"
#include "seqiqa/si_ordering.hpp"
#include "test_util.hpp"

using namespace seqiqa;

namespace {

LumaField field(int w, int h, const std::function<double(int, int)>& f) {
  LumaField l{w, h, std::vector<double>(static_cast<std::size_t>(w) * h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) l.at(x, y) = f(x, y);
  }
  return l;
}

// Direct 3x3 correlation with the textbook kernels.
RealField sobel_oracle(const LumaField& l) {
  static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  RealField out{l.width - 2, l.height - 2, {}};
  for (int y = 1; y + 1 < l.height; ++y) {
    for (int x = 1; x + 1 < l.width; ++x) {
      double gx = 0, gy = 0;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) {
          gx += kx[j + 1][i + 1] * l.at(x + i, y + j);
          gy += ky[j + 1][i + 1] * l.at(x + i, y + j);
        }
      }
      out.values.push_back(std::hypot(gx, gy));
    }
  }
  return out;
}

double stddev_oracle(const std::vector<double>& v) {
  long double m = 0;
  for (double x : v) m += x;
  m /= v.size();
  long double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(s / v.size()));
}

LumaField rotate180(const LumaField& l) {
  return field(l.width, l.height, [&](int x, int y) { return l.at(l.width - 1 - x, l.height - 1 - y); });
}

FeatureVector fv(double si, int index) { return {{static_cast<double>(index)}, si, ScaleGroup::High, index}; }

}  // namespace

TEST_CASE("luma uses BT.601 weights and is exact on gray") {
  ImageBuffer img(2, 1, 3, {10, 20, 30, 77, 77, 77});
  const LumaField l = to_luma(img);
  CHECK(l.at(0, 0) == doctest::Approx(0.299 * 10 + 0.587 * 20 + 0.114 * 30).epsilon(1e-14));
  CHECK(l.at(1, 0) == 77.0);
  for (int v = 0; v < 256; ++v) {
    ImageBuffer g(1, 1, 3, {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v),
                            static_cast<std::uint8_t>(v)});
    CHECK(to_luma(g).at(0, 0) == static_cast<double>(v));
  }
}

TEST_CASE("constant patch has zero edges and zero SI") {
  const LumaField l = field(9, 7, [](int, int) { return 123.0; });
  for (double v : sobel_magnitude(l).values) CHECK(v == 0.0);
  CHECK(spatial_activity(l) == 0.0);
  CHECK(spatial_activity(testing::constant_image(16, 16, 3, 200)) == 0.0);
}

TEST_CASE("unit ramp has magnitude 8 everywhere") {
  for (auto f : {std::function<double(int, int)>([](int x, int) { return x; }),
                 std::function<double(int, int)>([](int, int y) { return 3.0 - y; })}) {
    const LumaField l = field(10, 8, f);
    const RealField m = sobel_magnitude(l);
    CHECK(m.width == 8);
    CHECK(m.height == 6);
    for (double v : m.values) CHECK(v == 8.0);
    CHECK(spatial_activity(l) == 0.0);
  }
}

TEST_CASE("random fields match brute-force convolution") {
  Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 3 + static_cast<int>(rng.below(5));
    const int h = 3 + static_cast<int>(rng.below(5));
    const LumaField l = field(w, h, [&](int, int) { return rng.uniform(0.0, 255.0); });
    const RealField got = sobel_magnitude(l);
    const RealField want = sobel_oracle(l);
    REQUIRE(got.values.size() == want.values.size());
    for (std::size_t i = 0; i < got.values.size(); ++i) {
      CHECK(std::abs(got.values[i] - want.values[i]) <= 1e-12 * std::max(1.0, want.values[i]));
    }
    CHECK(std::abs(spatial_activity(l) - stddev_oracle(want.values)) < 1e-9);
  }
}

TEST_CASE("SI is exactly invariant under 180 degree rotation") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 3 + static_cast<int>(rng.below(30));
    const int h = 3 + static_cast<int>(rng.below(30));
    const LumaField l = field(w, h, [&](int, int) { return std::floor(rng.uniform(0.0, 256.0)); });
    const RealField a = sobel_magnitude(l);
    const RealField b = sobel_magnitude(rotate180(l));
    for (int y = 0; y < a.height; ++y) {
      for (int x = 0; x < a.width; ++x) CHECK(a.at(x, y) == b.at(a.width - 1 - x, a.height - 1 - y));
    }
    CHECK(spatial_activity(l) == spatial_activity(rotate180(l)));
  }
}

TEST_CASE("population stddev is order independent") {
  Rng rng(3);
  std::vector<double> v(257);
  for (double& x : v) x = rng.uniform(-50.0, 900.0);
  const double s = population_stddev(v);
  for (int k = 0; k < 20; ++k) {
    rng.shuffle(std::span<double>(v));
    CHECK(population_stddev(v) == s);
  }
  CHECK(std::abs(s - stddev_oracle(v)) < 1e-10);
}

TEST_CASE("too small for Sobel") {
  CHECK_THROWS_AS(sobel_magnitude(field(2, 5, [](int, int) { return 0.0; })), DimensionTooSmall);
}

TEST_CASE("ascending SI ordering is a stable permutation") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FeatureVector> v;
    const int n = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i) v.push_back(fv(static_cast<double>(rng.below(5)), i));
    rng.shuffle(std::span<FeatureVector>(v));
    const auto sorted = order_by_si(v);
    REQUIRE(sorted.size() == v.size());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      CHECK(sorted[i - 1].si <= sorted[i].si);
      if (sorted[i - 1].si == sorted[i].si) CHECK(sorted[i - 1].source_index < sorted[i].source_index);
    }
    CHECK(order_by_si(sorted) == sorted);
  }
}

TEST_CASE("raster and random orderings") {
  std::vector<FeatureVector> v{fv(3, 2), fv(1, 0), fv(2, 1), fv(0, 3)};
  Rng rng(1);
  const auto raster = apply_ordering(v, Ordering::Raster, rng);
  for (int i = 0; i < 4; ++i) CHECK(raster[i].source_index == i);

  Rng r1(77), r2(77);
  const auto a = apply_ordering(v, Ordering::Random, r1);
  std::vector<FeatureVector> shuffled_input{v[3], v[0], v[2], v[1]};
  const auto b = apply_ordering(shuffled_input, Ordering::Random, r2);
  CHECK(a == b);
}
