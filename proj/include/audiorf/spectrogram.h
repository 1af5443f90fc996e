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

// Multi-scale complex spectrograms over a MIDI-spaced frequency axis.
//
// Each channel multiplies the signal by cos(wt) and sin(wt) and smooths both
// products with a temporal scale-space kernel whose variance follows a
// WindowScaleLaw. The stored value is c - i s, so a pure tone sin(w0 t) at
// the channel centre settles to magnitude 1/2.

#ifndef AUDIORF_SPECTROGRAM_H_
#define AUDIORF_SPECTROGRAM_H_

#include <complex>
#include <span>
#include <vector>

#include "audiorf/grid.h"
#include "audiorf/temporal_scale_space.h"

namespace audiorf {

inline constexpr double kMidiA4 = 69.0;
inline constexpr double kHzA4 = 440.0;

double midi_to_hz(double nu);
double hz_to_midi(double hz);

struct FrequencyChannel {
  double nu = 0.0;          // Semitones.
  double omega = 0.0;       // rad/s.
  double tau_window = 0.0;  // seconds^2, set by apply_window_law.
};

struct FrequencyGrid {
  std::vector<FrequencyChannel> channels;
  int bins_per_octave = 48;
  double nu_min = 0.0;
  double nu_max = 0.0;

  double nu_step() const { return 12.0 / bins_per_octave; }
  std::vector<double> nus() const;
};

// Channels nu_min, nu_min + 12/bpo, ... up to the first value >= nu_max.
FrequencyGrid build_frequency_grid(double nu_min, double nu_max,
                                   int bins_per_octave);

// tau = tau0 + (2 pi n / omega)^2, optionally softly bounded from above by
// tau_inf: tau' = tau / (1 + (tau / tau_inf)^p)^(1/p). n = 0 gives a fixed
// window of variance tau0.
struct WindowScaleLaw {
  double n = 8.0;
  double tau0 = 0.0;     // seconds^2
  double tau_inf = 0.0;  // seconds^2; <= 0 disables the upper bound.
  double p = 2.0;

  static WindowScaleLaw proportional(double n) { return {n, 0.0, 0.0, 2.0}; }
  static WindowScaleLaw fixed(double sigma_seconds) {
    return {0.0, sigma_seconds * sigma_seconds, 0.0, 2.0};
  }
  void validate() const;
};

double window_scale(double omega, const WindowScaleLaw& law);

// Frequency (Hz) above which the soft lower bound makes the window variance
// exceed beta^2 tau0, i.e. where frequency covariance is lost.
double covariance_limit_hz(const WindowScaleLaw& law, double beta);

void apply_window_law(FrequencyGrid& grid, const WindowScaleLaw& law);

struct ComplexSpectrogram {
  TimeFrequencyGrid<std::complex<double>> data;
  FrequencyGrid frequencies;
  TemporalFamily family;
  double sample_rate = 0.0;
  int hop = 1;
  bool delay_compensated = false;
  // Part of the compensated delay not removed by whole-frame shifts (s).
  std::vector<double> residual_delay;
};

// Frames are taken at samples 0, hop, 2 hop, ... Causal families run the
// recursive cascade at the full sample rate; the Gaussian family evaluates
// discrete-Gaussian windowed sums centred on each frame with mirrored
// signal boundaries. Throws std::invalid_argument for an empty signal,
// hop <= 0, or channels whose sampled time constants degenerate.
ComplexSpectrogram compute_spectrogram(std::span<const double> signal,
                                       double sample_rate,
                                       const FrequencyGrid& grid,
                                       const TemporalFamily& family, int hop,
                                       double epsilon = 1e-6);

inline constexpr double kDbFloorRatio = 1e-10;

// 20 log10(max(|S|, 1e-10 S0) / S0).
RealGrid to_db(const ComplexSpectrogram& spec, double s0 = 1.0);

// First inflection point of a causal window of variance tau (seconds).
double first_inflection_delay(const TemporalFamily& family, double tau);

// Shifts every channel earlier by its first-inflection delay rounded to whole
// frames; the tail repeats the last frame.
ComplexSpectrogram delay_compensate(const ComplexSpectrogram& spec);

// Max-abs difference between the uniform cascade window times cos/sin(wt)
// and the Gammatone a t^(K-1) exp(-2 pi b t) cos/sin(wt) with
// a = 1/(mu^K Gamma(K)) and b = 1/(2 pi mu), over `samples` points of
// [0, horizon].
double gammatone_equivalence_check(double mu, int num_levels, double omega,
                                   int samples = 4096);

// Max-abs difference between a continuous (generally unequal) cascade
// window and the Gammatone with the same K and variance, relative to the
// Gammatone envelope peak. Both are multiplied by cos(wt).
double generalized_gammatone_deviation(const ScaleLadder& ladder,
                                       double omega);

}  // namespace audiorf

#endif  // AUDIORF_SPECTROGRAM_H_
