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

#include "evrec/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "evrec/rng.hpp"

namespace evrec {

namespace {

void validate_sequence(const FrameSequence& seq) {
  if (seq.frames.size() < 2) {
    throw std::invalid_argument("frame sequence needs at least two frames");
  }
  if (seq.timestamps.size() != seq.frames.size()) {
    throw std::invalid_argument("frame sequence has mismatched timestamps");
  }
  for (size_t i = 0; i < seq.frames.size(); ++i) {
    if (!seq.frames[i].same_size(seq.frames[0])) {
      throw std::invalid_argument("frame " + std::to_string(i) + " differs in size");
    }
    if (i > 0 && !(seq.timestamps[i] > seq.timestamps[i - 1])) {
      throw std::invalid_argument("timestamps must be strictly increasing at frame " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

EventStream simulate_events(const FrameSequence& seq, double threshold,
                            double intensity_floor) {
  if (!(threshold > 0.0)) {
    throw std::invalid_argument("simulate_events: contrast threshold must be positive");
  }
  if (!(intensity_floor > 0.0)) {
    throw std::invalid_argument("simulate_events: intensity floor must be positive");
  }
  validate_sequence(seq);

  const Image& first = seq.frames.front();
  const int w = first.width;
  const int h = first.height;
  const size_t pixels = first.pixel_count();

  std::vector<double> reference(pixels);
  std::vector<double> previous(pixels);
  for (size_t i = 0; i < pixels; ++i) {
    const double l0 = std::log(std::max(first.data[i], intensity_floor));
    reference[i] = l0;
    previous[i] = l0;
  }

  std::vector<Event> out;
  for (int f = 1; f < seq.frame_count(); ++f) {
    const double t_a = seq.timestamps[f - 1];
    const double dt = seq.timestamps[f] - t_a;
    const Image& frame = seq.frames[f];
    for (size_t i = 0; i < pixels; ++i) {
      const double la = previous[i];
      const double lb = std::log(std::max(frame.data[i], intensity_floor));
      const int x = static_cast<int>(i) % w;
      const int y = static_cast<int>(i) / w;
      if (lb > la) {
        // log ramps up linearly; fire at each reference + threshold crossing
        while (reference[i] + threshold <= lb) {
          reference[i] += threshold;
          const double t = t_a + (reference[i] - la) / (lb - la) * dt;
          out.push_back({x, y, t, +1});
        }
      } else if (lb < la) {
        while (reference[i] - threshold >= lb) {
          reference[i] -= threshold;
          const double t = t_a + (reference[i] - la) / (lb - la) * dt;
          out.push_back({x, y, t, -1});
        }
      }
      previous[i] = lb;
    }
  }
  return normalize_stream(std::move(out), w, h, seq.timestamps.front(),
                          seq.timestamps.back() - seq.timestamps.front());
}

BlurredFrame synthesize_blur(const FrameSequence& seq, int first, int count) {
  validate_sequence(seq);
  if (count < 1) {
    throw std::invalid_argument("synthesize_blur: frame count must be >= 1");
  }
  if (first < 0 || first + count > seq.frame_count()) {
    throw std::invalid_argument("synthesize_blur: frame range exceeds the sequence");
  }
  BlurredFrame blur;
  blur.image = Image(seq.frames[first].width, seq.frames[first].height, 0.0);
  for (int f = first; f < first + count; ++f) {
    const Image& frame = seq.frames[f];
    for (size_t i = 0; i < blur.image.data.size(); ++i) {
      blur.image.data[i] += frame.data[i];
    }
  }
  const double inv = 1.0 / count;
  for (double& v : blur.image.data) v *= inv;
  blur.t_start = seq.timestamps[first];
  blur.duration = seq.timestamps[first + count - 1] - seq.timestamps[first];
  return blur;
}

EventStream inject_noise_events(const EventStream& stream, double ratio,
                                uint64_t seed) {
  if (!(ratio >= 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("inject_noise_events: ratio must be in [0, 1)");
  }
  const size_t extra = static_cast<size_t>(
      std::floor(ratio * static_cast<double>(stream.events.size())));
  std::vector<Event> out = stream.events;
  out.reserve(out.size() + extra);
  Rng rng(seed);
  for (size_t i = 0; i < extra; ++i) {
    Event e;
    e.x = rng.uniform_int(0, stream.width - 1);
    e.y = rng.uniform_int(0, stream.height - 1);
    e.t = rng.uniform(stream.t_start, stream.t_end());
    e.polarity = rng.uniform_int(0, 1) * 2 - 1;
    out.push_back(e);
  }
  return normalize_stream(std::move(out), stream.width, stream.height,
                          stream.t_start, stream.duration);
}

}  // namespace evrec
