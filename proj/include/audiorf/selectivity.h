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

// Frequency selectivity and temporal delays of the spectrogram windows.

#ifndef AUDIORF_SELECTIVITY_H_
#define AUDIORF_SELECTIVITY_H_

#include <string>
#include <vector>

#include "audiorf/temporal_scale_space.h"

namespace audiorf {

struct WindowFamily {
  enum class Kind { kGauss, kRecUniform, kRecLog };
  Kind kind = Kind::kGauss;
  int num_levels = 1;
  double ratio = 2.0;
  double n = 8.0;  // Periods per window.

  static WindowFamily gauss(double n = 8.0);
  static WindowFamily rec_uniform(int num_levels, double n = 8.0);
  static WindowFamily rec_log(int num_levels, double ratio, double n = 8.0);

  void validate() const;
  std::string label() const;
};

// Attenuation in dB of a channel at angular frequency omega for a pure tone at
// omega0, as a function of the dimensionless offset C = n (omega - omega0) /
// omega.
double selectivity_db_at(const WindowFamily& family, double c_offset);
// Same as a function of omega / omega0.
double selectivity_db(const WindowFamily& family, double omega_ratio);

// Offset C at which the attenuation reaches target_db (< 0). Closed form for
// the Gaussian and uniform families, bisection on [1e-6, 10] otherwise.
double bandwidth_constant(const WindowFamily& family, double target_db);

struct RelativeBandwidth {
  double linear = 0.0;     // (2C/n) / (1 - (C/n)^2)
  double semitones = 0.0;  // 12 log2((1 + C/n) / (1 - C/n))
};
RelativeBandwidth relative_bandwidth(double c_value, double n);

struct DelayMeasures {
  double mean = 0.0;
  double t_max = 0.0;
  double t_infl1 = 0.0;
  double t_infl2 = 0.0;
};

// Mean, maximum and inflection points of a continuous cascade. Uniform
// ladders use closed forms; other ladders use the numeric impulse response
// with quadratic refinement of the extremum.
DelayMeasures delay_measures(const ScaleLadder& ladder);

// Temporal mean of a logarithmic ladder in units of sqrt(tau), and its
// limit as K grows.
double log_mean_delay(int num_levels, double ratio);
double log_mean_delay_limit(double ratio);

struct Table {
  std::string title;
  std::string corner;
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<double>> values;  // [row][column]
};

// Bandwidth constants for the nine window families at -3/-10/-20/-30 dB.
Table bandwidth_table();
// Temporal means for K = 2..8 (uniform, c = sqrt 2, 2^(3/4), 2).
Table mean_delay_table();
// Positions of the maxima for the same families.
Table max_delay_table();

std::string format_table_text(const Table& table);
std::string format_table_csv(const Table& table);

}  // namespace audiorf

#endif  // AUDIORF_SELECTIVITY_H_
