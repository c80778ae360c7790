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

#include "evrec/metrics.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace evrec {

double psnr(const Image& a, const Image& b, double peak) {
  if (!a.same_size(b)) {
    throw std::invalid_argument("psnr: image dimensions differ");
  }
  if (!(peak > 0.0)) {
    throw std::invalid_argument("psnr: peak must be positive");
  }
  const double mse = mean_squared_error(a, b);
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;  // (K1 * L)^2 with L = 1
constexpr double kC2 = 0.03 * 0.03;

std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += taps[i];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// separable valid-mode Gaussian filter: rows first, then columns
std::vector<double> filter_valid(const Image& img,
                                 const std::array<double, kWindow>& taps,
                                 int out_w, int out_h) {
  std::vector<double> rows(static_cast<size_t>(img.height) * out_w);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) acc += taps[k] * img.at(y, x + k);
      rows[static_cast<size_t>(y) * out_w + x] = acc;
    }
  }
  std::vector<double> out(static_cast<size_t>(out_h) * out_w);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kWindow; ++k) {
        acc += taps[k] * rows[static_cast<size_t>(y + k) * out_w + x];
      }
      out[static_cast<size_t>(y) * out_w + x] = acc;
    }
  }
  return out;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
  if (!a.same_size(b)) {
    throw std::invalid_argument("ssim: image dimensions differ");
  }
  if (a.width < kWindow || a.height < kWindow) {
    throw std::invalid_argument("ssim: images must be at least 11x11");
  }
  const auto taps = gaussian_taps();
  const int out_w = a.width - kWindow + 1;
  const int out_h = a.height - kWindow + 1;

  const auto mu_a = filter_valid(a, taps, out_w, out_h);
  const auto mu_b = filter_valid(b, taps, out_w, out_h);
  const auto mu_aa = filter_valid(hadamard(a, a), taps, out_w, out_h);
  const auto mu_bb = filter_valid(hadamard(b, b), taps, out_w, out_h);
  const auto mu_ab = filter_valid(hadamard(a, b), taps, out_w, out_h);

  double acc = 0.0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    const double var_a = mu_aa[i] - mu_a[i] * mu_a[i];
    const double var_b = mu_bb[i] - mu_b[i] * mu_b[i];
    const double cov = mu_ab[i] - mu_a[i] * mu_b[i];
    acc += ((2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cov + kC2)) /
           ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (var_a + var_b + kC2));
  }
  return acc / static_cast<double>(mu_a.size());
}

}  // namespace evrec
