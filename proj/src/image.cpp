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

#include "evrec/image.hpp"

#include <algorithm>
#include <stdexcept>

namespace evrec {

Image::Image(int w, int h, double fill)
    : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
  if (w <= 0 || h <= 0) {
    throw std::invalid_argument("Image: dimensions must be positive");
  }
}

Image hadamard(const Image& a, const Image& b) {
  if (!a.same_size(b)) {
    throw std::invalid_argument("hadamard: image dimensions differ");
  }
  Image out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

double mean_squared_error(const Image& a, const Image& b) {
  if (!a.same_size(b)) {
    throw std::invalid_argument("mean_squared_error: image dimensions differ");
  }
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.data.size());
}

void clamp_image(Image& img, double lo, double hi) {
  for (double& v : img.data) v = std::clamp(v, lo, hi);
}

}  // namespace evrec
