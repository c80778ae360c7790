// Copyright 2026 The evrec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evrec/io_formats.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evrec {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
  throw std::runtime_error(path.string() + ": " + what);
}

uint8_t to_byte(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// ---- PGM (binary P5, maxval 255) ----

int pgm_next_value(std::istream& in, const fs::path& path) {
  // skip whitespace and '#' comment lines between header tokens
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF) fail(path, "truncated PGM header");
  int value = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = in.get();
  }
  if (!any) fail(path, "malformed PGM header");
  return value;
}

Image read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5') fail(path, "not a binary PGM (P5)");
  const int w = pgm_next_value(in, path);
  const int h = pgm_next_value(in, path);
  const int maxval = pgm_next_value(in, path);
  if (maxval != 255) fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) + ")");
  // exactly one whitespace byte separates the header from the raster
  std::vector<uint8_t> raster(static_cast<size_t>(w) * h);
  in.read(reinterpret_cast<char*>(raster.data()), static_cast<std::streamsize>(raster.size()));
  if (in.gcount() != static_cast<std::streamsize>(raster.size())) {
    fail(path, "truncated raster data");
  }
  Image img(w, h);
  for (size_t i = 0; i < raster.size(); ++i) img.data[i] = raster[i] / 255.0;
  return img;
}

void write_pgm(const fs::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << "P5\n" << image.width << " " << image.height << "\n255\n";
  std::vector<uint8_t> raster(image.data.size());
  for (size_t i = 0; i < raster.size(); ++i) raster[i] = to_byte(image.data[i]);
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) fail(path, "write failed");
}

// ---- PNG (8-bit grayscale via libpng) ----

Image read_png(const fs::path& path) {
  FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) fail(path, "cannot open");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    fail(path, "malformed PNG");
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  // normalize everything to 8-bit grayscale
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) {
    png_set_rgb_to_gray(png, 1, -1.0, -1.0);
  }
  if (png_get_color_type(png, info) == PNG_COLOR_TYPE_PALETTE) {
    png_set_palette_to_rgb(png);
    png_set_rgb_to_gray(png, 1, -1.0, -1.0);
  }
  if (png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);

  const int w = static_cast<int>(png_get_image_width(png, info));
  const int h = static_cast<int>(png_get_image_height(png, info));
  std::vector<uint8_t> raster(static_cast<size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = raster.data() + static_cast<size_t>(y) * w;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  Image img(w, h);
  for (size_t i = 0; i < raster.size(); ++i) img.data[i] = raster[i] / 255.0;
  return img;
}

void write_png(const fs::path& path, const Image& image) {
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) fail(path, "cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    fail(path, "PNG write failed");
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<uint8_t> raster(image.data.size());
  for (size_t i = 0; i < raster.size(); ++i) raster[i] = to_byte(image.data[i]);
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y) {
    rows[y] = raster.data() + static_cast<size_t>(y) * image.width;
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

}  // namespace

Image read_image(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".png") return read_png(path);
  fail(path, "unsupported image extension '" + ext + "'");
}

void write_image(const fs::path& path, const Image& image) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm") return write_pgm(path, image);
  if (ext == ".png") return write_png(path, image);
  fail(path, "unsupported image extension '" + ext + "'");
}

EventStream read_events(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::vector<Event> events;
  bool have_window = false;
  bool have_size = false;
  double t_start = 0.0, duration = 0.0;
  int width = 0, height = 0;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string tag;
      hs >> tag;
      if (tag == "window") {
        if (!(hs >> t_start >> duration) || !(duration > 0.0)) {
          fail(path, "line " + std::to_string(line_no) + ": malformed window header");
        }
        have_window = true;
      } else if (tag == "size") {
        if (!(hs >> width >> height) || width <= 0 || height <= 0) {
          fail(path, "line " + std::to_string(line_no) + ": malformed size header");
        }
        have_size = true;
      }
      continue;
    }
    std::istringstream ls(line);
    Event e;
    std::string trailing;
    if (!(ls >> e.t >> e.x >> e.y >> e.polarity) || (ls >> trailing)) {
      fail(path, "line " + std::to_string(line_no) + ": expected 't x y p'");
    }
    if (e.polarity != 1 && e.polarity != -1) {
      fail(path, "line " + std::to_string(line_no) + ": polarity must be 1 or -1");
    }
    events.push_back(e);
  }
  if (!have_window) fail(path, "missing '# window t_start duration' header");
  if (!have_size) {
    // fall back to the tightest grid holding every event
    for (const Event& e : events) {
      width = std::max(width, e.x + 1);
      height = std::max(height, e.y + 1);
    }
    if (width == 0) fail(path, "missing '# size width height' header on an empty stream");
  }
  return normalize_stream(std::move(events), width, height, t_start, duration);
}

void write_events(const fs::path& path, const EventStream& stream) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  char buf[160];
  std::snprintf(buf, sizeof(buf), "# window %.17g %.17g\n", stream.t_start, stream.duration);
  out << buf;
  out << "# size " << stream.width << " " << stream.height << "\n";
  for (const Event& e : stream.events) {
    std::snprintf(buf, sizeof(buf), "%.17g %d %d %d\n", e.t, e.x, e.y, e.polarity);
    out << buf;
  }
  if (!out) fail(path, "write failed");
}

KernelBank read_kernel_bank(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open");
  std::string magic;
  KernelBank bank;
  if (!(in >> magic) || magic != "ESLK") fail(path, "missing ESLK header");
  if (!(in >> bank.atoms >> bank.size >> bank.shuffle)) {
    fail(path, "malformed ESLK header");
  }
  if (bank.atoms < 1 || bank.size < 1 || bank.shuffle < 1) {
    fail(path, "ESLK header values must be positive");
  }
  const size_t expected = bank.expected_weight_count();
  bank.weights.reserve(expected);
  double v;
  while (in >> v) bank.weights.push_back(v);
  if (!in.eof()) {
    fail(path, "bad coefficient token after " + std::to_string(bank.weights.size()) +
                   " values");
  }
  if (bank.weights.size() != expected) {
    fail(path, "expected " + std::to_string(expected) + " coefficients, found " +
                   std::to_string(bank.weights.size()));
  }
  bank.validate();
  return bank;
}

void write_kernel_bank(const fs::path& path, const KernelBank& bank) {
  bank.validate();
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  out << "ESLK " << bank.atoms << " " << bank.size << " " << bank.shuffle << "\n";
  char buf[64];
  const size_t per_kernel = static_cast<size_t>(bank.size) * bank.size;
  for (size_t i = 0; i < bank.weights.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", bank.weights[i]);
    out << buf << ((i + 1) % per_kernel == 0 ? "\n" : " ");
  }
  if (!out) fail(path, "write failed");
}

void write_text_grid(const fs::path& path, const Image& image) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open for writing");
  char buf[64];
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      std::snprintf(buf, sizeof(buf), "%.17g", image.at(y, x));
      out << buf << (x + 1 == image.width ? "\n" : " ");
    }
  }
  if (!out) fail(path, "write failed");
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error(dir.string() + ": not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = lower_extension(entry.path());
    if (ext == ".pgm" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace evrec
