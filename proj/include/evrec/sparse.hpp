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

#include <optional>
#include <span>
#include <vector>

#include "evrec/degeneration.hpp"
#include "evrec/image.hpp"

namespace evrec {

/// Bank of convolutional dictionary atoms. An LR bank (shuffle == 1) holds
/// `atoms` kernels of size x size. An HR bank holds atoms * shuffle^2
/// kernels: atom i contributes one kernel per sub-pixel phase, so the code
/// synthesizes shuffle^2 intermediate channels that pixel-shuffle into the
/// upscaled output.
///
/// Weight layout is atom-major, then phase, then row-major coefficients,
/// matching the ESLK file format.
struct KernelBank {
  int atoms = 0;
  int size = 0;
  int shuffle = 1;
  std::vector<double> weights;

  int phases() const { return shuffle * shuffle; }
  size_t expected_weight_count() const {
    return static_cast<size_t>(atoms) * phases() * size * size;
  }
  std::span<const double> kernel(int atom, int phase) const {
    const size_t kq = static_cast<size_t>(size) * size;
    return {weights.data() + (static_cast<size_t>(atom) * phases() + phase) * kq, kq};
  }

  /// Throws if the bank is malformed (even kernel size, bad counts,
  /// non-finite coefficients).
  void validate() const;

  /// Single 1x1 unit kernel: the identity dictionary.
  static KernelBank identity();

  /// Eight 3x3 atoms from the separable 1D DCT basis (DC plus first and
  /// second differences), unit L2 norm each.
  static KernelBank dct8();

  /// HR bank with every atom replicated into all shuffle phases, so the
  /// upscaled synthesis equals nearest-neighbor upsampling of the LR one.
  KernelBank replicated(int upscale) const;
};

/// m-channel coefficient tensor shared between the LR and HR
/// representations. Channel-major, row-major within a channel.
struct SparseCode {
  int channels = 0;
  int width = 0;
  int height = 0;
  std::vector<double> data;

  SparseCode() = default;
  SparseCode(int channels_, int width_, int height_);

  double& at(int c, int y, int x) {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  double at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
};

/// Solver parameters for the iterative shrinkage-thresholding loop.
/// tolerance == 0 disables early stopping, giving the fixed-iteration mode
/// that mirrors a fixed number of unrolled phases. lipschitz empty means
/// "auto": estimate by power iteration (50 rounds).
struct SolverConfig {
  double lambda = 0.01;
  int iterations = 20;
  double tolerance = 0.0;
  std::optional<double> lipschitz;
  bool nonnegative = false;

  void validate() const;
};

/// Elementwise shrink toward zero: sign(v) * max(|v| - theta, 0). The
/// nonnegative variant clamps to max(v - theta, 0).
double soft_threshold(double value, double theta, bool nonnegative = false);
SparseCode soft_threshold(SparseCode values, double theta,
                          bool nonnegative = false);

/// Dictionary synthesis: sum over channels of kernel_i (*) code_i, zero
/// padded, same spatial size. Requires an LR bank (shuffle == 1).
Image dict_apply(const KernelBank& bank, const SparseCode& code);

/// Exact adjoint of dict_apply under zero padding: per channel the
/// correlation of the residual with that kernel.
SparseCode dict_adjoint(const KernelBank& bank, const Image& residual);

/// Power iteration on alpha -> D^T E^T E D alpha from a fixed-seed random
/// start; returns the largest-eigenvalue estimate times a 1.05 safety
/// margin. A vanishing operator returns 1.
double estimate_lipschitz(const KernelBank& bank, const IntegralField& field,
                          int iterations);

/// Solve the event-enhanced LASSO
///   argmin_a 1/2 || Y - E D a ||_2^2 + lambda ||a||_1
/// by ISTA from a zero start:
///   a <- soft_threshold(a + (D^T E^T Y - D^T E^T E D a) / L, lambda / L).
/// Runs at most cfg.iterations steps, stopping early once the relative L2
/// change drops below cfg.tolerance. When objective_trace is given, the
/// objective value after each iterate is appended to it.
SparseCode ista_solve(const Image& observed, const IntegralField& field,
                      const KernelBank& bank, const SolverConfig& cfg,
                      std::vector<double>* objective_trace = nullptr);

/// The LASSO objective value for a given code.
double lasso_objective(const Image& observed, const IntegralField& field,
                       const KernelBank& bank, const SparseCode& code,
                       double lambda);

/// Synthesize the upscaled image: convolve the code into shuffle^2
/// intermediate channels (summing atoms per phase), then pixel-shuffle so
/// output(y*s + dy, x*s + dx) reads phase dy*s + dx at (y, x). Output is
/// clamped to >= 0. upscale == 1 reduces to dict_apply.
Image recover_hr(const KernelBank& bank, const SparseCode& code, int upscale);

}  // namespace evrec
