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

/// Per-pixel double integral of events over the exposure: the event-derived
/// blur factor E(t_ref) relating the blurry observation to the sharp latent
/// image at the reference time. Values are strictly positive; an empty
/// stream yields exactly 1 everywhere.
struct IntegralField {
  Image values;
  double t_ref = 0.0;
  double t_start = 0.0;
  double duration = 0.0;
  double threshold = 0.0;
};

enum class DownsampleMethod { box_average, bicubic };

/// Spatial decimation operator P. scale == 1 is the identity.
struct DownsampleOp {
  int scale = 1;
  DownsampleMethod method = DownsampleMethod::box_average;
};

/// Event-camera parameters for synthesis: contrast threshold c
/// (log-intensity units), Gaussian image noise sigma on the 0-255 scale and
/// the spurious-event fraction.
struct CameraModel {
  double threshold = 0.1;
  double noise_sigma = 0.0;
  double spurious_event_ratio = 0.0;
};

/// Signed event count at a pixel between two times: sum of polarities with
/// timestamps in (min, max], sign-flipped when t_b < t_a.
long long inner_sum(const EventStream& stream, int x, int y, double t_a,
                    double t_b);

/// Closed-form evaluation of E(t_ref): per pixel the exposure is cut at the
/// event times into segments on which the signed count relative to t_ref is
/// constant, and
///   E = (1/T) * sum_j exp(c * n_j) * len_j .
/// An event exactly at t_ref counts toward the forward (t > t_ref) side,
/// which keeps the two-segment reversal identity exact.
IntegralField double_integral(const EventStream& stream, double threshold,
                              double t_ref);

/// Apply P: box-average takes the mean of each s x s block (dimensions must
/// divide), bicubic resamples with the Catmull-Rom kernel (a = -0.5),
/// edge-clamped.
Image downsample(const Image& image, const DownsampleOp& op);

/// Forward degeneration Y = E .* P(X) + eps, with eps i.i.d. Gaussian of
/// standard deviation sigma/255 in working units, clamped to [0, inf).
/// Deterministic for a fixed seed.
Image apply_forward(const Image& latent_hr, const IntegralField& field,
                    const DownsampleOp& op, double sigma, uint64_t seed);

}  // namespace evrec
