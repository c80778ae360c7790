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

#include "evrec/image.hpp"

namespace evrec {

/// Identical images report this cap instead of +inf.
constexpr double kPsnrCap = 99.0;

/// Peak signal-to-noise ratio in dB: 10 log10(peak^2 / MSE), capped at
/// 99 dB.
double psnr(const Image& a, const Image& b, double peak = 1.0);

/// Mean local SSIM over an 11x11 Gaussian window (sigma 1.5), constants
/// K1 = 0.01, K2 = 0.03, dynamic range 1. Windows are taken in valid mode,
/// so both images must be at least 11x11.
double ssim(const Image& a, const Image& b);

}  // namespace evrec
