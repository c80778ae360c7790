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

#include <cstdint>

#include "evrec/event_core.hpp"
#include "evrec/image.hpp"

namespace evrec {

/// Ordered frames with strictly increasing timestamps, all the same size.
struct FrameSequence {
  std::vector<Image> frames;
  std::vector<double> timestamps;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

/// A synthesized blurry exposure and the window it averages over.
struct BlurredFrame {
  Image image;
  double t_start = 0.0;
  double duration = 0.0;
};

constexpr double kDefaultIntensityFloor = 1.0 / 255.0;

/// Emit events from a frame sequence. Per pixel a log-intensity reference
/// starts at log(max(I0, floor)); between frames the log intensity is
/// interpolated linearly in time and one event fires each time it crosses
/// the reference +/- threshold, at the interpolated crossing time, stepping
/// the reference by the threshold.
EventStream simulate_events(const FrameSequence& seq, double threshold,
                            double intensity_floor = kDefaultIntensityFloor);

/// Arithmetic mean of `count` consecutive frames starting at `first`; the
/// exposure window runs from the first to the last selected timestamp.
BlurredFrame synthesize_blur(const FrameSequence& seq, int first, int count);

/// Append floor(ratio * |events|) spurious events with x, y, t uniform over
/// the stream domain and random polarity, then re-sort. Deterministic per
/// seed.
EventStream inject_noise_events(const EventStream& stream, double ratio,
                                uint64_t seed);

}  // namespace evrec
