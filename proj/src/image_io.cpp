// Copyright 2026 The seqiqa Authors.
// SPDX-License-Identifier: Apache-2.0

#include "seqiqa/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "seqiqa/errors.hpp"

namespace seqiqa {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_cb(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = msg;
  png_longjmp(png, 1);
}

void png_warning_cb(png_structp, png_const_charp) {}

ImageBuffer read_png(std::FILE* fp, const std::string& name) {
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message,
                                           png_error_cb, png_warning_cb);
  if (!png) throw Error("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error("libpng: out of memory");
  }

  // Everything touched after setjmp must outlive the longjmp target.
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  int width = 0, height = 0, channels = 0;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("cannot decode PNG '" + name + "': " + message, 0);
  }

  png_init_io(png, fp);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  width = static_cast<int>(png_get_image_width(png, info));
  height = static_cast<int>(png_get_image_height(png, info));
  channels = png_get_channels(png, info);
  if (channels == 2) channels = 1;  // gray+alpha that escaped stripping

  const std::size_t row_bytes = png_get_rowbytes(png, info);
  pixels.resize(row_bytes * height);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = pixels.data() + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 1 && channels != 3) {
    throw FormatError("unsupported PNG channel layout in '" + name + "'", 0);
  }
  return ImageBuffer(width, height, channels, std::move(pixels));
}

ImageBuffer read_pnm(std::FILE* fp, const std::string& name) {
  std::size_t pos = 0;
  auto next_char = [&]() {
    int c = std::fgetc(fp);
    ++pos;
    return c;
  };
  auto read_int = [&]() {
    int c = next_char();
    while (c != EOF && (std::isspace(c) || c == '#')) {
      if (c == '#') {
        while (c != EOF && c != '\n') c = next_char();
      }
      c = next_char();
    }
    if (c == EOF || !std::isdigit(c)) throw FormatError("bad PNM header in '" + name + "'", pos);
    long value = 0;
    while (c != EOF && std::isdigit(c)) {
      value = value * 10 + (c - '0');
      if (value > (1 << 20)) throw FormatError("PNM dimension too large in '" + name + "'", pos);
      c = next_char();
    }
    return static_cast<int>(value);
  };

  char magic[2];
  if (std::fread(magic, 1, 2, fp) != 2) throw FormatError("truncated PNM '" + name + "'", 0);
  pos = 2;
  const int channels = magic[1] == '6' ? 3 : 1;
  const int width = read_int();
  const int height = read_int();
  const int maxval = read_int();
  if (maxval != 255) throw FormatError("only 8-bit PNM is supported ('" + name + "')", pos);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * channels);
  if (std::fread(data.data(), 1, data.size(), fp) != data.size()) {
    throw FormatError("truncated PNM pixel data in '" + name + "'", pos);
  }
  return ImageBuffer(width, height, channels, std::move(data));
}

}  // namespace

ImageBuffer read_image(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw Error("cannot open image '" + path.string() + "'");
  unsigned char sig[8] = {};
  const std::size_t got = std::fread(sig, 1, sizeof sig, fp.get());
  std::rewind(fp.get());
  if (got == 8 && png_sig_cmp(sig, 0, 8) == 0) return read_png(fp.get(), path.string());
  if (got >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) {
    return read_pnm(fp.get(), path.string());
  }
  throw FormatError("unrecognized image format '" + path.string() + "'", 0);
}

void write_png(const ImageBuffer& image, const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot write image '" + path.string() + "'");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message,
                                            png_error_cb, png_warning_cb);
  if (!png) throw Error("libpng: out of memory");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error("libpng: out of memory");
  }
  std::vector<png_bytep> rows(image.height());
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("cannot encode PNG '" + path.string() + "': " + message);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, image.width(), image.height(), 8,
               image.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t row_bytes = static_cast<std::size_t>(image.width()) * image.channels();
  auto* base = const_cast<std::uint8_t*>(image.data().data());
  for (int y = 0; y < image.height(); ++y) rows[y] = base + y * row_bytes;
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace seqiqa
