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

#include <vector>

#include "evrec/image.hpp"

namespace evrec {

/// A single brightness-change spike: pixel location, timestamp in seconds
/// and polarity (+1 brighter, -1 darker).
struct Event {
  int x = 0;
  int y = 0;
  double t = 0.0;
  int polarity = 1;
};

/// Time-ordered event sequence over one exposure window
/// [t_start, t_start + duration]. Streams are immutable after construction;
/// every operation returns a fresh stream.
///
/// Sort order is (t, y, x, polarity), deterministic across runs.
struct EventStream {
  std::vector<Event> events;
  double t_start = 0.0;
  double duration = 0.0;
  int width = 0;
  int height = 0;

  double t_end() const { return t_start + duration; }
  bool empty() const { return events.empty(); }
};

/// 2k per-polarity count grids covering the stream window in k equal time
/// bins, ordered positive/negative per bin: S_p1, S_n1, ..., S_pk, S_nk.
struct EventFrameStack {
  int bins = 0;
  std::vector<Image> frames;
  double t_start = 0.0;
  double duration = 0.0;
};

/// Validate and sort a raw event sequence into a stream. Rejects events with
/// out-of-bounds coordinates, bad polarity or timestamps outside the window,
/// naming the offending input index.
EventStream normalize_stream(std::vector<Event> raw, int width, int height,
                             double t_start, double duration);

/// Count events into 2k frames. Bin i covers
/// [t_start + i*T/k, t_start + (i+1)*T/k), the last bin closed on the right
/// so no event is dropped.
EventFrameStack bin_events(const EventStream& stream, int bins);

/// Flip polarity and reflect the timestamp of every event before t_r:
/// t' = t_start + (t_r - t). Events at or after t_r are untouched. The
/// result is re-sorted. This is the preprocessing that lets a
/// reconstruction referenced at the window start apply at any t_r.
EventStream reverse_before(const EventStream& stream, double t_r);

}  // namespace evrec
