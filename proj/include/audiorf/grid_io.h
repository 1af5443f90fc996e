// Copyright 2026 The audiorf Authors. All Rights Reserved.
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

#ifndef AUDIORF_GRID_IO_H_
#define AUDIORF_GRID_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "audiorf/features.h"
#include "audiorf/grid.h"

namespace audiorf {

// Tab-separated: a header "nu" followed by the frame times, then one row per
// channel in ascending nu. Numbers use the shortest round-trip form.
std::string grid_to_csv(const RealGrid& grid);
void write_grid_csv(const RealGrid& grid, const std::string& path);
RealGrid read_grid_csv(const std::string& path);

// 8-bit gray level of v for the display range [lo, hi]: round half up of
// 255 clamp((v - lo) / (hi - lo), 0, 1).
std::uint8_t pgm_level(double v, double lo, double hi);

// Binary PGM (P5): width = frames, height = channels, top row = highest nu.
std::string grid_to_pgm(const RealGrid& grid, double lo, double hi);
void write_grid_pgm(const RealGrid& grid, const std::string& path, double lo,
                    double hi);

std::string curves_to_json(const std::vector<PartialCurve>& curves);

// Writes text or binary content, reporting failures with the path.
void write_file(const std::string& path, const std::string& content);

}  // namespace audiorf

#endif  // AUDIORF_GRID_IO_H_
