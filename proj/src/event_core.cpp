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

#include "evrec/event_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace evrec {

namespace {

bool event_less(const Event& a, const Event& b) {
  return std::tie(a.t, a.y, a.x, a.polarity) <
         std::tie(b.t, b.y, b.x, b.polarity);
}

}  // namespace

EventStream normalize_stream(std::vector<Event> raw, int width, int height,
                             double t_start, double duration) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("normalize_stream: sensor dimensions must be positive");
  }
  if (!(duration > 0.0)) {
    throw std::invalid_argument("normalize_stream: window duration must be positive");
  }
  const double t_end = t_start + duration;
  for (size_t i = 0; i < raw.size(); ++i) {
    const Event& e = raw[i];
    if (e.polarity != 1 && e.polarity != -1) {
      throw std::invalid_argument("normalize_stream: event " + std::to_string(i) +
                                  " has polarity " + std::to_string(e.polarity));
    }
    if (e.x < 0 || e.x >= width || e.y < 0 || e.y >= height) {
      throw std::invalid_argument("normalize_stream: event " + std::to_string(i) +
                                  " coordinate (" + std::to_string(e.x) + ", " +
                                  std::to_string(e.y) + ") outside " +
                                  std::to_string(width) + "x" + std::to_string(height));
    }
    if (!(e.t >= t_start && e.t <= t_end) || !std::isfinite(e.t)) {
      throw std::invalid_argument("normalize_stream: event " + std::to_string(i) +
                                  " timestamp " + std::to_string(e.t) +
                                  " outside window");
    }
  }
  std::sort(raw.begin(), raw.end(), event_less);
  EventStream stream;
  stream.events = std::move(raw);
  stream.t_start = t_start;
  stream.duration = duration;
  stream.width = width;
  stream.height = height;
  return stream;
}

EventFrameStack bin_events(const EventStream& stream, int bins) {
  if (bins < 1) {
    throw std::invalid_argument("bin_events: bin count must be >= 1");
  }
  EventFrameStack stack;
  stack.bins = bins;
  stack.t_start = stream.t_start;
  stack.duration = stream.duration;
  stack.frames.assign(2 * static_cast<size_t>(bins),
                      Image(stream.width, stream.height, 0.0));
  for (const Event& e : stream.events) {
    int idx = static_cast<int>(
        std::floor((e.t - stream.t_start) / stream.duration * bins));
    idx = std::clamp(idx, 0, bins - 1);  // t == t_end lands in the last bin
    stack.frames[2 * idx + (e.polarity > 0 ? 0 : 1)].at(e.y, e.x) += 1.0;
  }
  return stack;
}

EventStream reverse_before(const EventStream& stream, double t_r) {
  if (!(t_r >= stream.t_start && t_r <= stream.t_end())) {
    throw std::invalid_argument("reverse_before: t_r outside the stream window");
  }
  std::vector<Event> out;
  out.reserve(stream.events.size());
  for (const Event& e : stream.events) {
    if (e.t < t_r) {
      out.push_back({e.x, e.y, stream.t_start + (t_r - e.t), -e.polarity});
    } else {
      out.push_back(e);
    }
  }
  return normalize_stream(std::move(out), stream.width, stream.height,
                          stream.t_start, stream.duration);
}

}  // namespace evrec
