// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "seqiqa/errors.hpp"
#include "seqiqa/image_io.hpp"

namespace seqiqa {

double synth_mos(double noise_sigma, double blur_radius) {
  const double a_noise = std::clamp(noise_sigma / kSynthMaxNoise, 0.0, 1.0);
  const double a_blur = std::clamp(blur_radius / kSynthMaxBlur, 0.0, 1.0);
  return 100.0 - (100.0 - kSynthMosFloor) * (0.5 * a_noise + 0.5 * a_blur);
}

namespace {

struct Grating {
  double fx, fy, phase, amplitude;
};

struct Rect {
  int x0, y0, x1, y1;
  double offset[3];
};

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

}  // namespace

ImageBuffer synth_base_texture(int size, Rng& rng) {
  double base[3], slope_x[3], slope_y[3];
  for (int c = 0; c < 3; ++c) {
    base[c] = rng.uniform(110.0, 145.0);
    slope_x[c] = rng.uniform(-15.0, 15.0) / size;
    slope_y[c] = rng.uniform(-15.0, 15.0) / size;
  }
  // One fine and one coarse grating with narrow amplitude ranges, so texture
  // energy varies little between images compared to the distortions.
  const double periods[2][2] = {{4.0, 6.0}, {16.0, 32.0}};
  const double amplitudes[2][2] = {{10.0, 14.0}, {8.0, 12.0}};
  std::vector<Grating> gratings(2);
  for (std::size_t k = 0; k < gratings.size(); ++k) {
    auto& g = gratings[k];
    const double theta = rng.uniform(0.0, std::numbers::pi);
    const double period = rng.uniform(periods[k][0], periods[k][1]);
    g.fx = std::cos(theta) / period;
    g.fy = std::sin(theta) / period;
    g.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    g.amplitude = rng.uniform(amplitudes[k][0], amplitudes[k][1]);
  }
  std::vector<Rect> rects(4);
  for (auto& r : rects) {
    const int w = static_cast<int>(rng.uniform(0.1, 0.3) * size);
    const int h = static_cast<int>(rng.uniform(0.1, 0.3) * size);
    r.x0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(size - w)));
    r.y0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(size - h)));
    r.x1 = r.x0 + w;
    r.y1 = r.y0 + h;
    for (double& o : r.offset) o = rng.uniform(-15.0, 15.0);
  }

  ImageBuffer out(size, size, 3);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double texture = 0.0;
      for (const auto& g : gratings) {
        texture += g.amplitude * std::sin(2.0 * std::numbers::pi * (g.fx * x + g.fy * y) + g.phase);
      }
      for (int c = 0; c < 3; ++c) {
        double v = base[c] + slope_x[c] * x + slope_y[c] * y + texture;
        for (const auto& r : rects) {
          if (x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1) v += r.offset[c];
        }
        out.at(x, y, c) = quantize(v);
      }
    }
  }
  return out;
}

ImageBuffer box_blur(const ImageBuffer& image, double radius) {
  if (radius < 0.0) throw ValidationError("blur radius must be non-negative");
  if (radius == 0.0) return image;
  const int whole = static_cast<int>(std::floor(radius));
  const double frac = radius - whole;
  const int reach = frac > 0.0 ? whole + 1 : whole;
  std::vector<double> taps(2 * reach + 1, 1.0);
  if (frac > 0.0) taps.front() = taps.back() = frac;
  double norm = 0.0;
  for (double t : taps) norm += t;
  for (double& t : taps) t /= norm;

  const int w = image.width(), h = image.height(), ch = image.channels();
  std::vector<double> tmp(static_cast<std::size_t>(w) * h * ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int k = -reach; k <= reach; ++k) {
          acc += taps[k + reach] * image.at(std::clamp(x + k, 0, w - 1), y, c);
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * ch + c] = acc;
      }
    }
  }
  ImageBuffer out(w, h, ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double acc = 0.0;
        for (int k = -reach; k <= reach; ++k) {
          acc += taps[k + reach] * tmp[(static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x) * ch + c];
        }
        out.at(x, y, c) = quantize(acc);
      }
    }
  }
  return out;
}

ImageBuffer degrade(const ImageBuffer& clean, const SynthImageParams& params, Rng& rng) {
  ImageBuffer out = box_blur(clean, params.blur_radius);
  const int w = out.width(), h = out.height();
  for (int y = 0; y < h; ++y) {
    const int by = std::min(2, 3 * y / h);
    for (int x = 0; x < w; ++x) {
      const int bx = std::min(2, 3 * x / w);
      const bool noisy = (params.noisy_blocks >> (3 * by + bx)) & 1u;
      for (int c = 0; c < out.channels(); ++c) {
        // Draw unconditionally so the noise field does not depend on the mask.
        const double n = rng.normal() * params.noise_sigma;
        if (noisy) out.at(x, y, c) = quantize(out.at(x, y, c) + n);
      }
    }
  }
  return out;
}

DatasetManifest generate_synthetic_dataset(const SynthConfig& cfg,
                                           const std::filesystem::path& out_dir) {
  if (cfg.count < 1) throw ValidationError("synthetic dataset needs at least one image");
  if (cfg.size < 16) throw ValidationError("synthetic image size must be at least 16");
  std::filesystem::create_directories(out_dir / "images");

  DatasetManifest manifest;
  manifest.base_dir = out_dir;
  std::ofstream params_csv(out_dir / "synth_params.csv", std::ios::binary | std::ios::trunc);
  params_csv << "image_id,noise_sigma,blur_radius,noisy_blocks\n";

  Rng master(cfg.seed);
  for (int i = 0; i < cfg.count; ++i) {
    Rng rng = master.split();
    SynthImageParams p;
    p.noise_sigma = rng.uniform(0.0, kSynthMaxNoise);
    p.blur_radius = rng.uniform(0.0, kSynthMaxBlur);
    if (cfg.variant == SynthVariant::OrderSensitive) {
      p.noisy_blocks = static_cast<std::uint16_t>(1 + rng.below(511));
    }
    const ImageBuffer clean = synth_base_texture(cfg.size, rng);
    const ImageBuffer image = degrade(clean, p, rng);

    char id[32];
    std::snprintf(id, sizeof id, "synth_%04d", i);
    const std::string rel = std::string("images/") + id + ".png";
    write_png(image, out_dir / rel);
    manifest.entries.push_back({id, rel, synth_mos(p.noise_sigma, p.blur_radius), Split::Unassigned});
    params_csv << id << ',' << format_real(p.noise_sigma) << ',' << format_real(p.blur_radius)
               << ',' << p.noisy_blocks << '\n';
  }
  write_manifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace seqiqa
