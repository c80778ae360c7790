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

#include "evrec/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evrec/parallel.hpp"
#include "evrec/rng.hpp"

namespace evrec {

namespace {

constexpr uint64_t kPowerIterationSeed = 0x0e51a7c0de5eedULL;

double l2_norm(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

}  // namespace

void KernelBank::validate() const {
  if (atoms < 1) throw std::invalid_argument("kernel bank needs at least one atom");
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("kernel size must be odd, got " + std::to_string(size));
  }
  if (shuffle < 1) throw std::invalid_argument("shuffle factor must be >= 1");
  if (weights.size() != expected_weight_count()) {
    throw std::invalid_argument("kernel bank holds " + std::to_string(weights.size()) +
                                " coefficients, expected " +
                                std::to_string(expected_weight_count()));
  }
  for (double wgt : weights) {
    if (!std::isfinite(wgt)) {
      throw std::invalid_argument("kernel bank has a non-finite coefficient");
    }
  }
}

KernelBank KernelBank::identity() {
  KernelBank bank;
  bank.atoms = 1;
  bank.size = 1;
  bank.shuffle = 1;
  bank.weights = {1.0};
  return bank;
}

KernelBank KernelBank::dct8() {
  // separable 1D basis: DC, first difference, second difference
  const double u0[3] = {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  const double u1[3] = {1.0 / std::sqrt(2.0), 0.0, -1.0 / std::sqrt(2.0)};
  const double u2[3] = {1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0)};
  const double* basis[3] = {u0, u1, u2};
  // all outer products except the pure second-order one
  const int pairs[8][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1},
                           {0, 2}, {2, 0}, {1, 2}, {2, 1}};
  KernelBank bank;
  bank.atoms = 8;
  bank.size = 3;
  bank.shuffle = 1;
  bank.weights.reserve(8 * 9);
  for (const auto& p : pairs) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        bank.weights.push_back(basis[p[0]][i] * basis[p[1]][j]);
      }
    }
  }
  return bank;
}

KernelBank KernelBank::replicated(int upscale) const {
  validate();
  if (shuffle != 1) {
    throw std::invalid_argument("replicated: expected an LR bank (shuffle == 1)");
  }
  if (upscale < 1) throw std::invalid_argument("replicated: upscale must be >= 1");
  KernelBank bank;
  bank.atoms = atoms;
  bank.size = size;
  bank.shuffle = upscale;
  bank.weights.reserve(expected_weight_count() * upscale * upscale);
  const size_t kq = static_cast<size_t>(size) * size;
  for (int a = 0; a < atoms; ++a) {
    for (int phase = 0; phase < upscale * upscale; ++phase) {
      const double* src = weights.data() + a * kq;
      bank.weights.insert(bank.weights.end(), src, src + kq);
    }
  }
  return bank;
}

SparseCode::SparseCode(int channels_, int width_, int height_)
    : channels(channels_), width(width_), height(height_),
      data(static_cast<size_t>(channels_) * width_ * height_, 0.0) {
  if (channels_ < 1 || width_ < 1 || height_ < 1) {
    throw std::invalid_argument("SparseCode: dimensions must be positive");
  }
}

void SolverConfig::validate() const {
  if (lambda < 0.0) throw std::invalid_argument("solver lambda must be >= 0");
  if (iterations < 1) throw std::invalid_argument("solver needs at least one iteration");
  if (tolerance < 0.0) throw std::invalid_argument("solver tolerance must be >= 0");
  if (lipschitz && !(*lipschitz > 0.0)) {
    throw std::invalid_argument("fixed Lipschitz constant must be positive");
  }
}

double soft_threshold(double value, double theta, bool nonnegative) {
  if (nonnegative) return std::max(value - theta, 0.0);
  if (value > theta) return value - theta;
  if (value < -theta) return value + theta;
  return 0.0;
}

SparseCode soft_threshold(SparseCode values, double theta, bool nonnegative) {
  if (theta < 0.0) {
    throw std::invalid_argument("soft_threshold: theta must be nonnegative");
  }
  for (double& v : values.data) v = soft_threshold(v, theta, nonnegative);
  return values;
}

namespace {

void apply_into(const KernelBank& bank, const SparseCode& code, Image& out) {
  const int q = bank.size;
  const int r = q / 2;
  const size_t row_cost =
      static_cast<size_t>(code.width) * bank.atoms * q * q;
  parallel_for(0, code.height, [&](int y) {
    for (int x = 0; x < code.width; ++x) {
      double acc = 0.0;
      for (int ch = 0; ch < bank.atoms; ++ch) {
        const auto k = bank.kernel(ch, 0);
        for (int i = 0; i < q; ++i) {
          const int sy = y - i + r;
          if (sy < 0 || sy >= code.height) continue;
          for (int j = 0; j < q; ++j) {
            const int sx = x - j + r;
            if (sx < 0 || sx >= code.width) continue;
            acc += k[static_cast<size_t>(i) * q + j] * code.at(ch, sy, sx);
          }
        }
      }
      out.at(y, x) = acc;
    }
  }, row_cost);
}

void adjoint_into(const KernelBank& bank, const Image& residual,
                  SparseCode& code) {
  const int q = bank.size;
  const int r = q / 2;
  const size_t row_cost = static_cast<size_t>(residual.width) * q * q;
  parallel_for(0, bank.atoms * residual.height, [&](int job) {
    const int ch = job / residual.height;
    const int y = job % residual.height;
    const auto k = bank.kernel(ch, 0);
    for (int x = 0; x < residual.width; ++x) {
      double acc = 0.0;
      for (int i = 0; i < q; ++i) {
        const int sy = y + i - r;
        if (sy < 0 || sy >= residual.height) continue;
        for (int j = 0; j < q; ++j) {
          const int sx = x + j - r;
          if (sx < 0 || sx >= residual.width) continue;
          acc += k[static_cast<size_t>(i) * q + j] * residual.at(sy, sx);
        }
      }
      code.at(ch, y, x) = acc;
    }
  }, row_cost);
}

}  // namespace

Image dict_apply(const KernelBank& bank, const SparseCode& code) {
  bank.validate();
  if (bank.shuffle != 1) {
    throw std::invalid_argument("dict_apply: expected an LR bank (shuffle == 1)");
  }
  if (code.channels != bank.atoms) {
    throw std::invalid_argument("dict_apply: code has " + std::to_string(code.channels) +
                                " channels, bank has " + std::to_string(bank.atoms));
  }
  Image out(code.width, code.height, 0.0);
  apply_into(bank, code, out);
  return out;
}

SparseCode dict_adjoint(const KernelBank& bank, const Image& residual) {
  bank.validate();
  if (bank.shuffle != 1) {
    throw std::invalid_argument("dict_adjoint: expected an LR bank (shuffle == 1)");
  }
  SparseCode code(bank.atoms, residual.width, residual.height);
  adjoint_into(bank, residual, code);
  return code;
}

double estimate_lipschitz(const KernelBank& bank, const IntegralField& field,
                          int iterations) {
  if (iterations < 1) {
    throw std::invalid_argument("estimate_lipschitz: needs at least one iteration");
  }
  bank.validate();
  const Image& e = field.values;
  Image e_squared = hadamard(e, e);

  Rng rng(kPowerIterationSeed);
  SparseCode v(bank.atoms, e.width, e.height);
  for (double& x : v.data) x = rng.uniform(-1.0, 1.0);
  double norm = l2_norm(v.data);
  for (double& x : v.data) x /= norm;

  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    SparseCode w = dict_adjoint(bank, hadamard(e_squared, dict_apply(bank, v)));
    norm = l2_norm(w.data);
    if (norm < 1e-300) return 1.0;  // degenerate operator
    estimate = norm;
    for (size_t i = 0; i < w.data.size(); ++i) v.data[i] = w.data[i] / norm;
  }
  return estimate * 1.05;
}

SparseCode ista_solve(const Image& observed, const IntegralField& field,
                      const KernelBank& bank, const SolverConfig& cfg,
                      std::vector<double>* objective_trace) {
  cfg.validate();
  if (!observed.same_size(field.values)) {
    throw std::invalid_argument("ista_solve: observation and integral field sizes differ");
  }
  const double lip = cfg.lipschitz ? *cfg.lipschitz
                                   : estimate_lipschitz(bank, field, 50);
  const double theta = cfg.lambda / lip;
  const Image e_squared = hadamard(field.values, field.values);
  const SparseCode rhs = dict_adjoint(bank, hadamard(field.values, observed));

  SparseCode alpha(bank.atoms, observed.width, observed.height);
  Image synth(observed.width, observed.height, 0.0);
  SparseCode grad(bank.atoms, observed.width, observed.height);
  for (int n = 0; n < cfg.iterations; ++n) {
    apply_into(bank, alpha, synth);
    for (size_t i = 0; i < synth.data.size(); ++i) {
      synth.data[i] *= e_squared.data[i];
    }
    adjoint_into(bank, synth, grad);
    double delta_sq = 0.0;
    double prev_sq = 0.0;
    for (size_t i = 0; i < alpha.data.size(); ++i) {
      const double prev = alpha.data[i];
      const double next = soft_threshold(
          prev + (rhs.data[i] - grad.data[i]) / lip, theta, cfg.nonnegative);
      prev_sq += prev * prev;
      delta_sq += (next - prev) * (next - prev);
      alpha.data[i] = next;
    }
    if (!std::isfinite(delta_sq)) {
      throw std::runtime_error("ista_solve: non-finite update at iteration " +
                               std::to_string(n));
    }
    if (objective_trace) {
      objective_trace->push_back(
          lasso_objective(observed, field, bank, alpha, cfg.lambda));
    }
    const double rel = std::sqrt(delta_sq) / std::max(std::sqrt(prev_sq), 1e-30);
    if (rel < cfg.tolerance) break;
  }
  return alpha;
}

double lasso_objective(const Image& observed, const IntegralField& field,
                       const KernelBank& bank, const SparseCode& code,
                       double lambda) {
  if (!observed.same_size(field.values)) {
    throw std::invalid_argument("lasso_objective: observation and integral field sizes differ");
  }
  const Image synth = hadamard(field.values, dict_apply(bank, code));
  double data_term = 0.0;
  for (size_t i = 0; i < synth.data.size(); ++i) {
    const double d = observed.data[i] - synth.data[i];
    data_term += d * d;
  }
  double l1 = 0.0;
  for (double v : code.data) l1 += std::fabs(v);
  return 0.5 * data_term + lambda * l1;
}

Image recover_hr(const KernelBank& bank, const SparseCode& code, int upscale) {
  bank.validate();
  if (upscale < 1) throw std::invalid_argument("recover_hr: upscale must be >= 1");
  if (bank.shuffle != upscale) {
    throw std::invalid_argument("recover_hr: bank shuffle factor " +
                                std::to_string(bank.shuffle) +
                                " does not match upscale " + std::to_string(upscale));
  }
  if (code.channels != bank.atoms) {
    throw std::invalid_argument("recover_hr: code has " + std::to_string(code.channels) +
                                " channels, bank has " + std::to_string(bank.atoms));
  }
  const int s = upscale;
  const int q = bank.size;
  const int r = q / 2;
  Image out(code.width * s, code.height * s, 0.0);
  const size_t phase_cost = static_cast<size_t>(code.width) * code.height *
                            bank.atoms * q * q;
  parallel_for(0, s * s, [&](int phase) {
    const int dy = phase / s;
    const int dx = phase % s;
    for (int y = 0; y < code.height; ++y) {
      for (int x = 0; x < code.width; ++x) {
        double acc = 0.0;
        for (int ch = 0; ch < bank.atoms; ++ch) {
          const auto k = bank.kernel(ch, phase);
          for (int i = 0; i < q; ++i) {
            const int sy = y - i + r;
            if (sy < 0 || sy >= code.height) continue;
            for (int j = 0; j < q; ++j) {
              const int sx = x - j + r;
              if (sx < 0 || sx >= code.width) continue;
              acc += k[static_cast<size_t>(i) * q + j] * code.at(ch, sy, sx);
            }
          }
        }
        out.at(y * s + dy, x * s + dx) = std::max(acc, 0.0);
      }
    }
  }, phase_cost);
  return out;
}

}  // namespace evrec
