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

#include <doctest.h>

#include <stdexcept>
#include <cmath>

#include "evrec/rng.hpp"
#include "evrec/sparse.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace evrec;

namespace {

IntegralField field_of(Image values) {
  IntegralField f;
  f.values = std::move(values);
  f.t_ref = 0.0;
  f.t_start = 0.0;
  f.duration = 1.0;
  f.threshold = 0.1;
  return f;
}

std::vector<double> flatten(const SparseCode& code) { return code.data; }

}  // namespace

TEST_CASE("soft_threshold") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  SUBCASE("theta zero is the identity") {
    for (double v : {-2.0, -0.3, 0.0, 0.7, 5.0}) {
      CHECK(soft_threshold(v, 0.0) == v);
    }
  }
  SUBCASE("nonnegative mode clamps") {
    CHECK(soft_threshold(-3.0, 1.0, true) == 0.0);
    CHECK(soft_threshold(3.0, 1.0, true) == 2.0);
    CHECK(soft_threshold(0.5, 1.0, true) == 0.0);
  }
  SUBCASE("negative theta is rejected on tensors") {
    SparseCode code(1, 2, 2);
    CHECK_THROWS_AS(soft_threshold(code, -0.1), std::invalid_argument);
  }
}

TEST_CASE("dict_apply") {
  SUBCASE("1x1 unit kernel passes the code through") {
    Rng rng(1);
    SparseCode code = testing::random_code(rng, 1, 4, 3);
    Image out = dict_apply(KernelBank::identity(), code);
    CHECK(out.data == code.data);
  }
  SUBCASE("zero code gives a zero field") {
    SparseCode code(3, 4, 4);
    Image out = dict_apply(KernelBank::dct8(), SparseCode(8, 4, 4));
    for (double v : out.data) CHECK(v == 0.0);
    (void)code;
  }
  SUBCASE("two unit channels sum") {
    KernelBank bank;
    bank.atoms = 2;
    bank.size = 1;
    bank.weights = {1.0, 1.0};
    SparseCode code(2, 2, 2);
    code.at(0, 0, 0) = 0.25;
    code.at(1, 0, 0) = 0.5;
    Image out = dict_apply(bank, code);
    CHECK(out.at(0, 0) == 0.75);
  }
  SUBCASE("channel mismatch is rejected") {
    CHECK_THROWS_AS(dict_apply(KernelBank::dct8(), SparseCode(3, 4, 4)),
                    std::invalid_argument);
  }
}

TEST_CASE("dict_adjoint") {
  SUBCASE("1x1 unit kernel passes the image through") {
    Rng rng(2);
    Image r = testing::random_image(rng, 4, 3);
    SparseCode code = dict_adjoint(KernelBank::identity(), r);
    CHECK(code.data == r.data);
  }
  SUBCASE("zero residual gives a zero code") {
    SparseCode code = dict_adjoint(KernelBank::dct8(), Image(5, 5, 0.0));
    for (double v : code.data) CHECK(v == 0.0);
  }
  SUBCASE("inner-product identity against dict_apply") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
      const int atoms = rng.uniform_int(1, 4);
      const int q = rng.uniform_int(0, 1) * 2 + 1;  // 1 or 3
      const int w = rng.uniform_int(3, 8);
      const int h = rng.uniform_int(3, 8);
      KernelBank bank = testing::random_bank(rng, atoms, q);
      SparseCode code = testing::random_code(rng, atoms, w, h);
      Image r = testing::random_image(rng, w, h, -1.0, 1.0);
      const Image applied = dict_apply(bank, code);
      const SparseCode adj = dict_adjoint(bank, r);
      double lhs = 0.0, rhs = 0.0;
      for (size_t i = 0; i < applied.data.size(); ++i) lhs += applied.data[i] * r.data[i];
      for (size_t i = 0; i < code.data.size(); ++i) rhs += code.data[i] * adj.data[i];
      CHECK(std::fabs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("estimate_lipschitz") {
  SUBCASE("identity operator lands on the 1.05 margin") {
    IntegralField f = field_of(Image(6, 6, 1.0));
    const double est = estimate_lipschitz(KernelBank::identity(), f, 50);
    CHECK(est == doctest::Approx(1.05).epsilon(1e-9));
  }
  SUBCASE("scaling the field by gamma scales the estimate by gamma^2") {
    Rng rng(4);
    Image e = testing::random_image(rng, 6, 6, 0.5, 1.5);
    Image e2 = e;
    for (double& v : e2.data) v *= 3.0;
    KernelBank bank = testing::random_bank(rng, 2, 3);
    const double base = estimate_lipschitz(bank, field_of(e), 50);
    const double scaled = estimate_lipschitz(bank, field_of(e2), 50);
    CHECK(scaled / base == doctest::Approx(9.0).epsilon(0.01));
  }
  SUBCASE("matches the dense largest eigenvalue on an 8x8 instance") {
    Rng rng(5);
    Image e = testing::random_image(rng, 8, 8, 0.4, 1.6);
    KernelBank bank = testing::random_bank(rng, 2, 3);
    const double est = estimate_lipschitz(bank, field_of(e), 50);
    const auto a = testing::dense_forward_matrix(bank, e, 8, 8);
    const double dense = testing::dense_largest_eigenvalue(a);
    CHECK(est / 1.05 == doctest::Approx(dense).epsilon(0.01));
  }
  SUBCASE("zero operator returns the degenerate fallback") {
    IntegralField f = field_of(Image(4, 4, 0.0));
    CHECK(estimate_lipschitz(KernelBank::identity(), f, 20) == 1.0);
  }
}

TEST_CASE("ista_solve") {
  SUBCASE("identity dictionary reduces to a closed-form soft threshold") {
    Image y(2, 1);
    y.at(0, 0) = 3.0;
    y.at(0, 1) = 0.5;
    SolverConfig cfg;
    cfg.lambda = 1.0;
    cfg.lipschitz = 1.0;
    cfg.iterations = 5;
    SparseCode code = ista_solve(y, field_of(Image(2, 1, 1.0)),
                                 KernelBank::identity(), cfg);
    CHECK(code.at(0, 0, 0) == 2.0);
    CHECK(code.at(0, 0, 1) == 0.0);
  }
  SUBCASE("large lambda shrinks everything to zero") {
    Rng rng(6);
    Image y = testing::random_image(rng, 5, 5);
    IntegralField f = field_of(testing::random_image(rng, 5, 5, 0.5, 1.5));
    KernelBank bank = testing::random_bank(rng, 2, 3);
    const SparseCode driver = dict_adjoint(bank, hadamard(f.values, y));
    double max_abs = 0.0;
    for (double v : driver.data) max_abs = std::max(max_abs, std::fabs(v));
    SolverConfig cfg;
    cfg.lambda = max_abs * 1.01;
    cfg.iterations = 30;
    SparseCode code = ista_solve(y, f, bank, cfg);
    for (double v : code.data) CHECK(v == 0.0);
  }
  SUBCASE("a fixed point stays bit-identical under further iterations") {
    // exact binary fractions keep the update arithmetic exact, so the
    // one-step solution is a bitwise fixed point
    Image y(3, 3);
    for (size_t i = 0; i < y.data.size(); ++i) y.data[i] = (4.0 + i) / 16.0;
    SolverConfig one;
    one.lambda = 0.0625;
    one.lipschitz = 1.0;
    one.iterations = 1;
    SolverConfig many = one;
    many.iterations = 6;
    const IntegralField f = field_of(Image(3, 3, 1.0));
    // identity dictionary with E = 1 and L = 1 converges in one step
    const SparseCode a = ista_solve(y, f, KernelBank::identity(), one);
    const SparseCode b = ista_solve(y, f, KernelBank::identity(), many);
    CHECK(a.data == b.data);
  }
  SUBCASE("non-finite inputs are reported with the iteration index") {
    Image y(2, 2, 1.0);
    y.at(0, 0) = std::numeric_limits<double>::infinity();
    SolverConfig cfg;
    cfg.lipschitz = 1.0;
    CHECK_THROWS_WITH_AS(ista_solve(y, field_of(Image(2, 2, 1.0)),
                                    KernelBank::identity(), cfg),
                         doctest::Contains("iteration 0"), std::runtime_error);
  }
  SUBCASE("dimension mismatch is rejected") {
    SolverConfig cfg;
    CHECK_THROWS_AS(ista_solve(Image(2, 2, 0.1), field_of(Image(3, 3, 1.0)),
                               KernelBank::identity(), cfg),
                    std::invalid_argument);
  }
  SUBCASE("nonnegative mode yields a nonnegative code") {
    Rng rng(7);
    Image y = testing::random_image(rng, 6, 6);
    IntegralField f = field_of(testing::random_image(rng, 6, 6, 0.7, 1.3));
    SolverConfig cfg;
    cfg.lambda = 0.001;
    cfg.iterations = 40;
    cfg.nonnegative = true;
    SparseCode code = ista_solve(y, f, KernelBank::dct8(), cfg);
    for (double v : code.data) CHECK(v >= 0.0);
  }
  SUBCASE("tolerance stop leaves the answer near the fixed-iteration one") {
    Rng rng(8);
    Image y = testing::random_image(rng, 6, 6);
    IntegralField f = field_of(testing::random_image(rng, 6, 6, 0.7, 1.3));
    SolverConfig cfg;
    cfg.lambda = 0.01;
    cfg.iterations = 40000;
    cfg.tolerance = 1e-6;
    KernelBank bank = testing::random_bank(rng, 2, 3);
    std::vector<double> trace;
    SparseCode code = ista_solve(y, f, bank, cfg, &trace);
    CHECK(trace.size() < 40000u);  // early stop happened
    SolverConfig fixed = cfg;
    fixed.tolerance = 0.0;
    fixed.iterations = static_cast<int>(trace.size()) + 200;
    SparseCode longer = ista_solve(y, f, bank, fixed);
    const double obj_a = lasso_objective(y, f, bank, code, cfg.lambda);
    const double obj_b = lasso_objective(y, f, bank, longer, cfg.lambda);
    CHECK(obj_a == doctest::Approx(obj_b).epsilon(1e-4));
  }
}

TEST_CASE("ista_solve matches the coordinate-descent oracle") {
  Rng rng(888);
  for (int trial = 0; trial < 8; ++trial) {
    const int w = rng.uniform_int(4, 8);
    const int h = rng.uniform_int(4, 8);
    const int atoms = rng.uniform_int(1, 4);
    KernelBank bank = testing::random_bank(rng, atoms, 3);
    Image e = testing::random_image(rng, w, h, 0.5, 1.5);
    Image y = testing::random_image(rng, w, h);
    const double lambda = rng.uniform(0.01, 0.1);

    SolverConfig traced;
    traced.lambda = lambda;
    traced.iterations = 3000;
    std::vector<double> trace;
    ista_solve(y, field_of(e), bank, traced, &trace);
    for (size_t i = 1; i < trace.size(); ++i) {
      CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }

    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.iterations = 150000;
    cfg.tolerance = 1e-13;
    SparseCode code = ista_solve(y, field_of(e), bank, cfg);

    const auto a = testing::dense_forward_matrix(bank, e, w, h);
    const auto x = testing::coordinate_descent_lasso(a, y.data, lambda);
    const double oracle_obj = testing::dense_lasso_objective(a, y.data, x, lambda);
    const double ista_obj = lasso_objective(y, field_of(e), bank, code, lambda);
    CHECK(std::fabs(ista_obj - oracle_obj) <= 1e-4);
  }
}

TEST_CASE("lasso_objective") {
  Rng rng(9);
  SUBCASE("zero code gives half the squared norm of Y") {
    Image y = testing::random_image(rng, 4, 4);
    double half_norm = 0.0;
    for (double v : y.data) half_norm += v * v;
    half_norm *= 0.5;
    const double obj = lasso_objective(y, field_of(Image(4, 4, 1.0)),
                                       KernelBank::identity(), SparseCode(1, 4, 4), 0.3);
    CHECK(obj == doctest::Approx(half_norm).epsilon(1e-12));
  }
  SUBCASE("an exact representation with lambda zero scores zero") {
    Image y = testing::random_image(rng, 4, 4);
    SparseCode code(1, 4, 4);
    code.data = y.data;
    const double obj = lasso_objective(y, field_of(Image(4, 4, 1.0)),
                                       KernelBank::identity(), code, 0.0);
    CHECK(obj == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("recover_hr") {
  SUBCASE("upscale 1 reduces to dict_apply") {
    Rng rng(10);
    SparseCode code = testing::random_code(rng, 8, 5, 4, 0.0, 1.0);
    const Image direct = dict_apply(KernelBank::dct8(), code);
    const Image via_hr = recover_hr(KernelBank::dct8(), code, 1);
    for (size_t i = 0; i < direct.data.size(); ++i) {
      CHECK(via_hr.data[i] == std::max(direct.data[i], 0.0));
    }
  }
  SUBCASE("constant channels tile the shuffle pattern") {
    // four atoms wired one-to-one onto the four phases of a 2x shuffle
    KernelBank bank;
    bank.atoms = 4;
    bank.size = 1;
    bank.shuffle = 2;
    bank.weights.assign(16, 0.0);
    for (int atom = 0; atom < 4; ++atom) bank.weights[atom * 4 + atom] = 1.0;
    SparseCode code(4, 3, 3);
    const double values[4] = {0.1, 0.2, 0.3, 0.4};
    for (int ch = 0; ch < 4; ++ch) {
      for (int y = 0; y < 3; ++y) {
        for (int x = 0; x < 3; ++x) code.at(ch, y, x) = values[ch];
      }
    }
    Image out = recover_hr(bank, code, 2);
    REQUIRE(out.width == 6);
    for (int y = 0; y < 6; ++y) {
      for (int x = 0; x < 6; ++x) {
        CHECK(out.at(y, x) == values[(y % 2) * 2 + (x % 2)]);
      }
    }
  }
  SUBCASE("pixel shuffle is a bijection") {
    Rng rng(11);
    const int s = 2, w = 4, h = 3;
    SparseCode tensor = testing::random_code(rng, s * s, w, h);
    // shuffle then un-shuffle reproduces the tensor
    Image shuffled(w * s, h * s);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int phase = 0; phase < s * s; ++phase) {
          shuffled.at(y * s + phase / s, x * s + phase % s) = tensor.at(phase, y, x);
        }
      }
    }
    SparseCode back(s * s, w, h);
    for (int y = 0; y < h * s; ++y) {
      for (int x = 0; x < w * s; ++x) {
        back.at((y % s) * s + (x % s), y / s, x / s) = shuffled.at(y, x);
      }
    }
    CHECK(back.data == tensor.data);
  }
  SUBCASE("replicated atoms give nearest-neighbor-upsampled dict_apply") {
    Rng rng(12);
    KernelBank lr = testing::random_bank(rng, 3, 3);
    KernelBank hr = lr.replicated(2);
    SparseCode code = testing::random_code(rng, 3, 5, 4);
    const Image low = dict_apply(lr, code);
    const Image high = recover_hr(hr, code, 2);
    for (int y = 0; y < high.height; ++y) {
      for (int x = 0; x < high.width; ++x) {
        CHECK(high.at(y, x) == std::max(low.at(y / 2, x / 2), 0.0));
      }
    }
  }
  SUBCASE("shared code: box-downsampled HR output equals the LR synthesis") {
    Rng rng(13);
    KernelBank lr = testing::random_bank(rng, 2, 3);
    KernelBank hr = lr.replicated(2);
    SparseCode code = testing::random_code(rng, 2, 6, 6, 0.0, 1.0);
    const Image low = dict_apply(lr, code);
    const Image high = recover_hr(hr, code, 2);
    const Image down = downsample(high, {2, DownsampleMethod::box_average});
    for (size_t i = 0; i < low.data.size(); ++i) {
      CHECK(std::fabs(down.data[i] - std::max(low.data[i], 0.0)) <= 1e-12);
    }
  }
  SUBCASE("shuffle mismatch is rejected") {
    SparseCode code(1, 2, 2);
    CHECK_THROWS_AS(recover_hr(KernelBank::identity(), code, 2), std::invalid_argument);
  }
}
