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

#pragma once

#include <cstddef>
#include <vector>

namespace evrec {

/// Grayscale intensity grid, row-major doubles. The working range is
/// [0, 1]; 8-bit file I/O scales by 1/255.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0);

  double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }

  size_t pixel_count() const { return data.size(); }
  bool same_size(const Image& other) const {
    return width == other.width && height == other.height;
  }
};

/// Elementwise product a .* b (sizes must match).
Image hadamard(const Image& a, const Image& b);

/// Mean squared difference between two same-size images.
double mean_squared_error(const Image& a, const Image& b);

/// Clamp every pixel into [lo, hi].
void clamp_image(Image& img, double lo, double hi);

}  // namespace evrec
