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

#include <filesystem>
#include <string>
#include <vector>

#include "evrec/event_core.hpp"
#include "evrec/image.hpp"
#include "evrec/sparse.hpp"

namespace evrec {

/// Read an 8-bit grayscale image (.pgm or .png by extension), scaled to
/// [0, 1] as value/255.
Image read_image(const std::filesystem::path& path);

/// Write an 8-bit grayscale image (.pgm or .png by extension). Working
/// values are clamped to [0, 1] and rounded to value*255.
void write_image(const std::filesystem::path& path, const Image& image);

/// Event text format: one `t x y p` line per event (t in seconds at full
/// precision, p in {1, -1}), plus `# window t_start duration` and
/// `# size width height` header comments. Input lines may come in any
/// order; output is sorted. Parse errors carry the line number.
EventStream read_events(const std::filesystem::path& path);
void write_events(const std::filesystem::path& path, const EventStream& stream);

/// Kernel bank text format: header line `ESLK <atoms> <size> <shuffle>`
/// followed by atoms*shuffle^2*size*size whitespace-separated decimal
/// coefficients, atom-major then phase then row-major.
KernelBank read_kernel_bank(const std::filesystem::path& path);
void write_kernel_bank(const std::filesystem::path& path, const KernelBank& bank);

/// Plain-text dump of a grid, one row per line, full-precision decimals.
void write_text_grid(const std::filesystem::path& path, const Image& image);

/// Sorted list of image files (.pgm/.png) directly inside a directory.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace evrec
