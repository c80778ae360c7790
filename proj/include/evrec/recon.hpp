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

#include "evrec/degeneration.hpp"
#include "evrec/event_core.hpp"
#include "evrec/sim.hpp"
#include "evrec/sparse.hpp"

namespace evrec {

/// Division ceiling for the EDI baseline; small E values near noise can
/// blow the quotient up.
constexpr double kEdiClampMax = 4.0;

/// How generate_video derives the integral field for each frame time.
/// direct evaluates E(t_r) in closed form; reversal first applies
/// reverse_before(stream, t_r) and integrates each segment from its own
/// window start. The two agree per the two-segment identity.
enum class VideoMode { direct, reversal };

/// Event-based double-integral baseline: I(t_ref) = Y ./ E, clamped to
/// [0, clamp_max].
Image edi_reconstruct(const Image& observed, const IntegralField& field,
                      double clamp_max = kEdiClampMax);

/// Full sparse-learning reconstruction at time t_ref: build E(t_ref), solve
/// the LASSO for the shared code, then synthesize the upscaled output
/// through the HR bank. Output size is (upscale*H) x (upscale*W).
Image esl_reconstruct(const Image& observed, const EventStream& stream,
                      double t_ref, double threshold,
                      const KernelBank& lr_bank, const KernelBank& hr_bank,
                      int upscale, const SolverConfig& cfg);

/// Reconstruct frame_count images at reference times equally spaced over
/// the exposure (inclusive endpoints).
FrameSequence generate_video(const Image& observed, const EventStream& stream,
                             int frame_count, double threshold,
                             const KernelBank& lr_bank,
                             const KernelBank& hr_bank, int upscale,
                             const SolverConfig& cfg,
                             VideoMode mode = VideoMode::direct);

}  // namespace evrec
