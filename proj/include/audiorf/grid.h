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

#ifndef AUDIORF_GRID_H_
#define AUDIORF_GRID_H_

#include <cstddef>
#include <vector>

namespace audiorf {

// Dense (frame, channel) array. Frames are uniformly spaced in time and
// channels uniformly spaced in MIDI note number, ascending.
template <typename T>
struct TimeFrequencyGrid {
  std::vector<double> times;  // Seconds.
  std::vector<double> nus;    // Semitones.
  double frame_step = 0.0;    // Seconds.
  double nu_step = 0.0;       // Semitones.
  // Leading frames per channel still influenced by the zero initial state
  // of causal filters.
  std::vector<int> warmup;
  std::vector<T> values;  // Frame-major.

  TimeFrequencyGrid() = default;
  TimeFrequencyGrid(std::vector<double> t, std::vector<double> nu, double dt,
                    double dnu)
      : times(std::move(t)),
        nus(std::move(nu)),
        frame_step(dt),
        nu_step(dnu),
        warmup(nus.size(), 0),
        values(times.size() * nus.size(), T{}) {}

  std::size_t frames() const { return times.size(); }
  std::size_t channels() const { return nus.size(); }
  bool empty() const { return values.empty(); }

  T& at(std::size_t frame, std::size_t channel) {
    return values[frame * nus.size() + channel];
  }
  const T& at(std::size_t frame, std::size_t channel) const {
    return values[frame * nus.size() + channel];
  }

  // Same axes, values reset.
  template <typename U>
  TimeFrequencyGrid<U> like() const {
    TimeFrequencyGrid<U> out(times, nus, frame_step, nu_step);
    out.warmup = warmup;
    return out;
  }
};

using RealGrid = TimeFrequencyGrid<double>;

}  // namespace audiorf

#endif  // AUDIORF_GRID_H_
