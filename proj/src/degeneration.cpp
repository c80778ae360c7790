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

#include "evrec/degeneration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evrec/parallel.hpp"
#include "evrec/rng.hpp"

namespace evrec {

long long inner_sum(const EventStream& stream, int x, int y, double t_a,
                    double t_b) {
  const double t_end = stream.t_end();
  if (t_a < stream.t_start || t_a > t_end || t_b < stream.t_start || t_b > t_end) {
    throw std::invalid_argument("inner_sum: query time outside the stream window");
  }
  const double lo = std::min(t_a, t_b);
  const double hi = std::max(t_a, t_b);
  auto by_time = [](const Event& e, double t) { return e.t <= t; };
  // first event with t > lo, one past the last with t <= hi
  auto first = std::partition_point(stream.events.begin(), stream.events.end(),
                                    [&](const Event& e) { return by_time(e, lo); });
  auto last = std::partition_point(first, stream.events.end(),
                                   [&](const Event& e) { return by_time(e, hi); });
  long long acc = 0;
  for (auto it = first; it != last; ++it) {
    if (it->x == x && it->y == y) acc += it->polarity;
  }
  return t_b < t_a ? -acc : acc;
}

IntegralField double_integral(const EventStream& stream, double threshold,
                              double t_ref) {
  if (!(stream.duration > 0.0)) {
    throw std::invalid_argument("double_integral: exposure duration must be positive");
  }
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("double_integral: contrast threshold must be positive");
  }
  if (!(t_ref >= stream.t_start && t_ref <= stream.t_end())) {
    throw std::invalid_argument("double_integral: t_ref outside the exposure window");
  }

  const int w = stream.width;
  const int h = stream.height;
  const size_t n = stream.events.size();

  // bucket event indices by pixel; per-pixel order stays sorted by time
  std::vector<int> offsets(static_cast<size_t>(w) * h + 1, 0);
  for (const Event& e : stream.events) {
    ++offsets[static_cast<size_t>(e.y) * w + e.x + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<int> bucketed(n);
  {
    std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
    for (size_t i = 0; i < n; ++i) {
      const Event& e = stream.events[i];
      bucketed[cursor[static_cast<size_t>(e.y) * w + e.x]++] = static_cast<int>(i);
    }
  }

  IntegralField field;
  field.values = Image(w, h, 1.0);
  field.t_ref = t_ref;
  field.t_start = stream.t_start;
  field.duration = stream.duration;
  field.threshold = threshold;

  const double t0 = stream.t_start;
  const double t1 = stream.t_end();
  const size_t row_cost = static_cast<size_t>(w) * (32 + n / (h ? h : 1));
  parallel_for(0, h, [&](int row) {
    for (int col = 0; col < w; ++col) {
      const size_t pix = static_cast<size_t>(row) * w + col;
      const int begin = offsets[pix];
      const int end = offsets[pix + 1];
      if (begin == end) continue;  // no events: E stays exactly 1

      // signed count strictly before t_ref; an event exactly at t_ref is
      // treated as part of the forward side
      long long ref_count = 0;
      for (int k = begin; k < end; ++k) {
        const Event& e = stream.events[bucketed[k]];
        if (e.t < t_ref) ref_count += e.polarity;
      }

      double sum = 0.0;
      long long cum = 0;
      double prev = t0;
      for (int k = begin; k < end; ++k) {
        const Event& e = stream.events[bucketed[k]];
        sum += (e.t - prev) * std::exp(threshold * static_cast<double>(cum - ref_count));
        cum += e.polarity;
        prev = e.t;
      }
      sum += (t1 - prev) * std::exp(threshold * static_cast<double>(cum - ref_count));
      field.values.at(row, col) = sum / stream.duration;
    }
  }, row_cost);
  return field;
}

namespace {

// Catmull-Rom cubic weight (a = -0.5)
double cubic_weight(double x) {
  x = std::fabs(x);
  if (x <= 1.0) return (1.5 * x - 2.5) * x * x + 1.0;
  if (x < 2.0) return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
  return 0.0;
}

Image downsample_box(const Image& image, int s) {
  if (image.width % s != 0 || image.height % s != 0) {
    throw std::invalid_argument("downsample: dimensions not divisible by scale " +
                                std::to_string(s));
  }
  Image out(image.width / s, image.height / s);
  const double inv = 1.0 / (static_cast<double>(s) * s);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      double acc = 0.0;
      for (int dy = 0; dy < s; ++dy) {
        for (int dx = 0; dx < s; ++dx) {
          acc += image.at(y * s + dy, x * s + dx);
        }
      }
      out.at(y, x) = acc * inv;
    }
  }
  return out;
}

Image downsample_bicubic(const Image& image, int s) {
  Image out(std::max(1, image.width / s), std::max(1, image.height / s));
  for (int y = 0; y < out.height; ++y) {
    const double sy = (y + 0.5) * s - 0.5;
    const int iy = static_cast<int>(std::floor(sy));
    const double fy = sy - iy;
    for (int x = 0; x < out.width; ++x) {
      const double sx = (x + 0.5) * s - 0.5;
      const int ix = static_cast<int>(std::floor(sx));
      const double fx = sx - ix;
      double acc = 0.0;
      for (int m = -1; m <= 2; ++m) {
        const double wy = cubic_weight(m - fy);
        const int yy = std::clamp(iy + m, 0, image.height - 1);
        for (int k = -1; k <= 2; ++k) {
          const double wx = cubic_weight(k - fx);
          const int xx = std::clamp(ix + k, 0, image.width - 1);
          acc += wy * wx * image.at(yy, xx);
        }
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

}  // namespace

Image downsample(const Image& image, const DownsampleOp& op) {
  if (op.scale < 1) {
    throw std::invalid_argument("downsample: scale must be >= 1");
  }
  if (op.scale == 1) return image;
  return op.method == DownsampleMethod::box_average
             ? downsample_box(image, op.scale)
             : downsample_bicubic(image, op.scale);
}

Image apply_forward(const Image& latent_hr, const IntegralField& field,
                    const DownsampleOp& op, double sigma, uint64_t seed) {
  if (sigma < 0.0) {
    throw std::invalid_argument("apply_forward: sigma must be nonnegative");
  }
  Image lr = downsample(latent_hr, op);
  if (!lr.same_size(field.values)) {
    throw std::invalid_argument("apply_forward: downsampled image does not match the integral field");
  }
  Image out = hadamard(field.values, lr);
  if (sigma > 0.0) {
    Rng rng(seed);
    const double scale = sigma / 255.0;
    for (double& v : out.data) v += scale * rng.gaussian();
  }
  for (double& v : out.data) v = std::max(v, 0.0);
  return out;
}

}  // namespace evrec
