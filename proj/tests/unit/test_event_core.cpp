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

#include "evrec/event_core.hpp"
#include "evrec/rng.hpp"
#include "support/generators.hpp"

using namespace evrec;

TEST_CASE("normalize_stream sorts and validates") {
  SUBCASE("empty sequence gives an empty stream") {
    EventStream s = normalize_stream({}, 4, 4, 0.0, 1.0);
    CHECK(s.empty());
    CHECK(s.width == 4);
    CHECK(s.duration == 1.0);
  }
  SUBCASE("swapped time order is sorted") {
    EventStream s = normalize_stream({{0, 0, 0.7, 1}, {1, 1, 0.2, -1}}, 4, 4, 0.0, 1.0);
    CHECK(s.events[0].t == 0.2);
    CHECK(s.events[1].t == 0.7);
  }
  SUBCASE("ties break by y, then x, then polarity") {
    EventStream s = normalize_stream(
        {{2, 1, 0.5, 1}, {1, 1, 0.5, 1}, {1, 0, 0.5, -1}, {1, 0, 0.5, 1}}, 4, 4, 0.0, 1.0);
    CHECK(s.events[0].y == 0);
    CHECK(s.events[0].polarity == -1);
    CHECK(s.events[1].polarity == 1);
    CHECK(s.events[2].x == 1);
    CHECK(s.events[3].x == 2);
  }
  SUBCASE("timestamp outside the window is rejected with its index") {
    CHECK_THROWS_WITH_AS(
        normalize_stream({{0, 0, 0.5, 1}, {0, 0, 1.5, 1}}, 4, 4, 0.0, 1.0),
        doctest::Contains("event 1"), std::invalid_argument);
  }
  SUBCASE("out-of-bounds coordinate is rejected with its index") {
    CHECK_THROWS_WITH_AS(normalize_stream({{4, 0, 0.5, 1}}, 4, 4, 0.0, 1.0),
                         doctest::Contains("event 0"), std::invalid_argument);
  }
  SUBCASE("bad polarity is rejected") {
    CHECK_THROWS_AS(normalize_stream({{0, 0, 0.5, 2}}, 4, 4, 0.0, 1.0),
                    std::invalid_argument);
  }
  SUBCASE("nonpositive duration is rejected") {
    CHECK_THROWS_AS(normalize_stream({}, 4, 4, 0.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("bin_events counts per half-open bin") {
  SUBCASE("three events over two bins") {
    const double T = 1.0;
    EventStream s = normalize_stream(
        {{0, 0, T / 4, 1}, {0, 0, T / 4, -1}, {0, 0, 3 * T / 4, 1}}, 2, 2, 0.0, T);
    EventFrameStack stack = bin_events(s, 2);
    REQUIRE(stack.frames.size() == 4);
    CHECK(stack.frames[0].at(0, 0) == 1.0);  // S_p1
    CHECK(stack.frames[1].at(0, 0) == 1.0);  // S_n1
    CHECK(stack.frames[2].at(0, 0) == 1.0);  // S_p2
    CHECK(stack.frames[3].at(0, 0) == 0.0);  // S_n2
  }
  SUBCASE("empty stream gives all-zero frames") {
    EventStream s = normalize_stream({}, 3, 2, 0.0, 1.0);
    EventFrameStack stack = bin_events(s, 3);
    REQUIRE(stack.frames.size() == 6);
    for (const Image& f : stack.frames) {
      for (double v : f.data) CHECK(v == 0.0);
    }
  }
  SUBCASE("event exactly at the window end lands in the last bin") {
    EventStream s = normalize_stream({{0, 0, 1.0, 1}}, 2, 2, 0.0, 1.0);
    EventFrameStack stack = bin_events(s, 4);
    CHECK(stack.frames[6].at(0, 0) == 1.0);  // S_p4
  }
  SUBCASE("k = 0 is rejected") {
    EventStream s = normalize_stream({}, 2, 2, 0.0, 1.0);
    CHECK_THROWS_AS(bin_events(s, 0), std::invalid_argument);
  }
  SUBCASE("bin boundaries follow the i*T/k rule") {
    EventStream s = normalize_stream({{0, 0, 0.5, 1}}, 2, 2, 0.0, 1.0);
    EventFrameStack stack = bin_events(s, 2);
    CHECK(stack.frames[2].at(0, 0) == 1.0);  // 0.5 opens bin 2 of 2
  }
}

TEST_CASE("bin_events conserves the event count") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.uniform_int(0, 200);
    const int k = rng.uniform_int(1, 9);
    EventStream s = testing::random_stream(rng, 8, 6, 0.25, 2.0, n);
    EventFrameStack stack = bin_events(s, k);
    double total = 0.0;
    for (const Image& f : stack.frames) {
      for (double v : f.data) {
        CHECK(v >= 0.0);
        CHECK(v == std::floor(v));
        total += v;
      }
    }
    CHECK(total == static_cast<double>(n));
  }
}

TEST_CASE("reverse_before reflects, flips and re-sorts") {
  SUBCASE("t_r at the window start is the identity") {
    Rng rng(7);
    EventStream s = testing::random_stream(rng, 4, 4, 0.5, 1.0, 40);
    EventStream r = reverse_before(s, s.t_start);
    REQUIRE(r.events.size() == s.events.size());
    for (size_t i = 0; i < s.events.size(); ++i) {
      CHECK(r.events[i].t == s.events[i].t);
      CHECK(r.events[i].polarity == s.events[i].polarity);
    }
  }
  SUBCASE("single event reflects about the pre-window") {
    EventStream s = normalize_stream({{0, 0, 0.25, 1}}, 2, 2, 0.0, 1.0);
    EventStream r = reverse_before(s, 0.5);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].t == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.events[0].polarity == -1);
  }
  SUBCASE("two events swap places with flipped polarity") {
    // derived by enumerating t' = t_r - t: the 0.1 event lands at 0.3 and
    // the 0.3 event lands at 0.1, both flipped
    EventStream s = normalize_stream({{0, 0, 0.1, 1}, {0, 0, 0.3, -1}}, 2, 2, 0.0, 1.0);
    EventStream r = reverse_before(s, 0.4);
    REQUIRE(r.events.size() == 2);
    CHECK(r.events[0].t == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r.events[0].polarity == 1);   // from the original -1 at 0.3
    CHECK(r.events[1].t == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.events[1].polarity == -1);  // from the original +1 at 0.1
  }
  SUBCASE("events at or after t_r are untouched") {
    EventStream s = normalize_stream({{0, 0, 0.5, 1}, {0, 0, 0.8, -1}}, 2, 2, 0.0, 1.0);
    EventStream r = reverse_before(s, 0.5);
    CHECK(r.events[0].t == 0.5);
    CHECK(r.events[0].polarity == 1);
    CHECK(r.events[1].t == 0.8);
  }
  SUBCASE("t_r outside the window is rejected") {
    EventStream s = normalize_stream({}, 2, 2, 0.0, 1.0);
    CHECK_THROWS_AS(reverse_before(s, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(reverse_before(s, -0.1), std::invalid_argument);
  }
}

TEST_CASE("reverse_before is an involution on the pre segment") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    EventStream s = testing::random_stream(rng, 5, 5, 1.0, 0.8, 60);
    const double t_r = rng.uniform(s.t_start, s.t_end());
    EventStream twice = reverse_before(reverse_before(s, t_r), t_r);
    REQUIRE(twice.events.size() == s.events.size());
    for (size_t i = 0; i < s.events.size(); ++i) {
      CHECK(twice.events[i].x == s.events[i].x);
      CHECK(twice.events[i].y == s.events[i].y);
      CHECK(twice.events[i].polarity == s.events[i].polarity);
      CHECK(twice.events[i].t == doctest::Approx(s.events[i].t).epsilon(1e-12));
    }
  }
}
