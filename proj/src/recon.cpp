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

#include "evrec/recon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

namespace evrec {

namespace {

// E for the reversal-preprocessing path: cut the stream at t_ref, run
// reverse_before over the pre segment, integrate each segment from its own
// window start and combine
//   T * E(t_ref) = tau1 * E1 + tau2 * E2 .
// Events exactly at t_ref go to the forward segment.
IntegralField reversal_integral(const EventStream& stream, double threshold,
                                double t_ref) {
  const double tau1 = t_ref - stream.t_start;
  const double tau2 = stream.t_end() - t_ref;

  IntegralField field;
  field.values = Image(stream.width, stream.height, 0.0);
  field.t_ref = t_ref;
  field.t_start = stream.t_start;
  field.duration = stream.duration;
  field.threshold = threshold;

  auto accumulate_segment = [&](const EventStream& segment) {
    IntegralField part = double_integral(segment, threshold, segment.t_start);
    for (size_t i = 0; i < field.values.data.size(); ++i) {
      field.values.data[i] += segment.duration * part.values.data[i];
    }
  };
  // sub-windows are built directly: re-deriving their bounds in floating
  // point can land an ulp past an endpoint event, which strict validation
  // would reject
  auto make_segment = [&](std::vector<Event> events, double seg_start,
                          double seg_duration) {
    EventStream sub;
    sub.events = std::move(events);
    sub.t_start = seg_start;
    sub.duration = seg_duration;
    sub.width = stream.width;
    sub.height = stream.height;
    return sub;
  };

  if (tau1 > 0.0) {
    std::vector<Event> pre;
    for (const Event& e : stream.events) {
      if (e.t < t_ref) {
        pre.push_back({e.x, e.y, stream.t_start + (t_ref - e.t), -e.polarity});
      }
    }
    std::sort(pre.begin(), pre.end(), [](const Event& a, const Event& b) {
      return std::tie(a.t, a.y, a.x, a.polarity) <
             std::tie(b.t, b.y, b.x, b.polarity);
    });
    accumulate_segment(make_segment(std::move(pre), stream.t_start, tau1));
  }
  if (tau2 > 0.0) {
    std::vector<Event> post;
    for (const Event& e : stream.events) {
      if (e.t >= t_ref) post.push_back(e);
    }
    accumulate_segment(make_segment(std::move(post), t_ref, tau2));
  }
  for (double& v : field.values.data) v /= stream.duration;
  return field;
}

}  // namespace

Image edi_reconstruct(const Image& observed, const IntegralField& field,
                      double clamp_max) {
  if (!observed.same_size(field.values)) {
    throw std::invalid_argument("edi_reconstruct: observation and integral field sizes differ");
  }
  Image out = observed;
  for (size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = std::clamp(out.data[i] / field.values.data[i], 0.0, clamp_max);
  }
  return out;
}

Image esl_reconstruct(const Image& observed, const EventStream& stream,
                      double t_ref, double threshold,
                      const KernelBank& lr_bank, const KernelBank& hr_bank,
                      int upscale, const SolverConfig& cfg) {
  const IntegralField field = double_integral(stream, threshold, t_ref);
  const SparseCode code = ista_solve(observed, field, lr_bank, cfg);
  return recover_hr(hr_bank, code, upscale);
}

FrameSequence generate_video(const Image& observed, const EventStream& stream,
                             int frame_count, double threshold,
                             const KernelBank& lr_bank,
                             const KernelBank& hr_bank, int upscale,
                             const SolverConfig& cfg, VideoMode mode) {
  if (frame_count < 1) {
    throw std::invalid_argument("generate_video: frame count must be >= 1");
  }
  FrameSequence video;
  video.frames.reserve(frame_count);
  video.timestamps.reserve(frame_count);
  for (int i = 0; i < frame_count; ++i) {
    const double t_ref =
        frame_count == 1
            ? stream.t_start
            : stream.t_start + stream.duration * i / (frame_count - 1);
    IntegralField field = mode == VideoMode::direct
                              ? double_integral(stream, threshold, t_ref)
                              : reversal_integral(stream, threshold, t_ref);
    const SparseCode code = ista_solve(observed, field, lr_bank, cfg);
    video.frames.push_back(recover_hr(hr_bank, code, upscale));
    video.timestamps.push_back(t_ref);
  }
  return video;
}

}  // namespace evrec
