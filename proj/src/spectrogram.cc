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

#include "audiorf/spectrogram.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "audiorf/parallel.h"
#include "audiorf/selectivity.h"

namespace audiorf {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Carrier phase reduced to one period before scaling, which keeps long
// signals accurate.
double carrier_phase(double hz, double rate, std::size_t i) {
  const double cycles = hz / rate * static_cast<double>(i);
  return kTwoPi * (cycles - std::floor(cycles));
}

void causal_channel(std::span<const double> signal, double rate,
                    const FrequencyChannel& ch, const TemporalFamily& family,
                    int hop, TimeFrequencyGrid<std::complex<double>>& out,
                    std::size_t c) {
  const ScaleLadder ladder =
      family.ladder(rate * rate * ch.tau_window, LadderUnits::kDiscrete);
  if (ladder.min_mu() < 1e-6) {
    throw std::invalid_argument(
        "window too short for the sample rate at channel nu = " +
        std::to_string(ch.nu));
  }
  RecursiveSmoother re(ladder.mus);
  RecursiveSmoother im(ladder.mus);
  const double hz = ch.omega / kTwoPi;
  std::size_t frame = 0;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double phase = carrier_phase(hz, rate, i);
    const double a = re.push(signal[i] * std::cos(phase));
    const double b = im.push(signal[i] * std::sin(phase));
    if (i % static_cast<std::size_t>(hop) == 0) {
      out.at(frame++, c) = {a, -b};
    }
  }
  out.warmup[c] = (warmup_samples(ladder) + hop - 1) / hop;
}

void gaussian_channel(std::span<const double> signal, double rate,
                      const FrequencyChannel& ch, int hop, double epsilon,
                      TimeFrequencyGrid<std::complex<double>>& out,
                      std::size_t c) {
  const SampledKernel kernel =
      discrete_gaussian_kernel(rate * rate * ch.tau_window, epsilon);
  const double hz = ch.omega / kTwoPi;
  std::vector<double> fc(signal.size()), fs(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double phase = carrier_phase(hz, rate, i);
    fc[i] = signal[i] * std::cos(phase);
    fs[i] = signal[i] * std::sin(phase);
  }
  const auto n = static_cast<std::ptrdiff_t>(signal.size());
  const auto taps = static_cast<std::ptrdiff_t>(kernel.values.size());
  for (std::size_t j = 0; j < out.frames(); ++j) {
    const auto centre = static_cast<std::ptrdiff_t>(j) * hop;
    double a = 0.0, b = 0.0;
    for (std::ptrdiff_t m = 0; m < taps; ++m) {
      const std::ptrdiff_t idx =
          mirror_index(centre - (m - kernel.origin_index), n);
      a += kernel.values[m] * fc[idx];
      b += kernel.values[m] * fs[idx];
    }
    out.at(j, c) = {a, -b};
  }
  out.warmup[c] = 0;
}

}  // namespace

double midi_to_hz(double nu) {
  return kHzA4 * std::exp2((nu - kMidiA4) / 12.0);
}

double hz_to_midi(double hz) {
  if (!(hz > 0.0)) throw std::invalid_argument("frequency must be positive");
  return kMidiA4 + 12.0 * std::log2(hz / kHzA4);
}

std::vector<double> FrequencyGrid::nus() const {
  std::vector<double> out;
  out.reserve(channels.size());
  for (const auto& ch : channels) out.push_back(ch.nu);
  return out;
}

FrequencyGrid build_frequency_grid(double nu_min, double nu_max,
                                   int bins_per_octave) {
  if (!(nu_min < nu_max)) throw std::invalid_argument("need nu_min < nu_max");
  if (bins_per_octave < 1) {
    throw std::invalid_argument("need at least one bin per octave");
  }
  FrequencyGrid grid;
  grid.bins_per_octave = bins_per_octave;
  grid.nu_min = nu_min;
  grid.nu_max = nu_max;
  const double step = grid.nu_step();
  const auto count = static_cast<std::size_t>(
      std::ceil((nu_max - nu_min) / step - 1e-9)) + 1;
  grid.channels.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& ch = grid.channels[i];
    ch.nu = nu_min + static_cast<double>(i) * step;
    ch.omega = kTwoPi * midi_to_hz(ch.nu);
  }
  return grid;
}

void WindowScaleLaw::validate() const {
  if (n < 0.0 || tau0 < 0.0 || !(p >= 1.0)) {
    throw std::invalid_argument("window law needs n >= 0, tau0 >= 0, p >= 1");
  }
  if (n == 0.0 && tau0 == 0.0) {
    throw std::invalid_argument("window law gives zero window scale");
  }
  if (tau_inf > 0.0 && !(tau_inf > tau0)) {
    throw std::invalid_argument("window law needs tau_inf > tau0");
  }
}

double window_scale(double omega, const WindowScaleLaw& law) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  law.validate();
  const double period = kTwoPi * law.n / omega;
  const double tau = law.tau0 + period * period;
  if (law.tau_inf <= 0.0) return tau;
  return tau / std::pow(1.0 + std::pow(tau / law.tau_inf, law.p), 1.0 / law.p);
}

double covariance_limit_hz(const WindowScaleLaw& law, double beta) {
  if (!(beta > 1.0) || !(law.tau0 > 0.0)) {
    throw std::invalid_argument("covariance limit needs beta > 1, tau0 > 0");
  }
  return law.n / (std::sqrt(law.tau0) * std::sqrt(beta * beta - 1.0));
}

void apply_window_law(FrequencyGrid& grid, const WindowScaleLaw& law) {
  for (auto& ch : grid.channels) ch.tau_window = window_scale(ch.omega, law);
}

ComplexSpectrogram compute_spectrogram(std::span<const double> signal,
                                       double sample_rate,
                                       const FrequencyGrid& grid,
                                       const TemporalFamily& family, int hop,
                                       double epsilon) {
  if (signal.empty()) throw std::invalid_argument("empty signal");
  if (!(sample_rate > 0.0)) throw std::invalid_argument("sample rate <= 0");
  if (hop <= 0) throw std::invalid_argument("hop must be positive");
  if (grid.channels.empty()) throw std::invalid_argument("empty frequency grid");
  for (const auto& ch : grid.channels) {
    if (!(ch.tau_window > 0.0)) {
      throw std::invalid_argument("channel without a window scale");
    }
  }

  const std::size_t frames = (signal.size() + hop - 1) / hop;
  std::vector<double> times(frames);
  for (std::size_t j = 0; j < frames; ++j) {
    times[j] = static_cast<double>(j) * hop / sample_rate;
  }
  ComplexSpectrogram spec;
  spec.data = TimeFrequencyGrid<std::complex<double>>(
      std::move(times), grid.nus(), hop / sample_rate, grid.nu_step());
  spec.frequencies = grid;
  spec.family = family;
  spec.sample_rate = sample_rate;
  spec.hop = hop;
  spec.residual_delay.assign(grid.channels.size(), 0.0);

  parallel_for(grid.channels.size(), [&](std::size_t c) {
    if (family.causal()) {
      causal_channel(signal, sample_rate, grid.channels[c], family, hop,
                     spec.data, c);
    } else {
      gaussian_channel(signal, sample_rate, grid.channels[c], hop, epsilon,
                       spec.data, c);
    }
  });
  return spec;
}

RealGrid to_db(const ComplexSpectrogram& spec, double s0) {
  if (!(s0 > 0.0)) throw std::invalid_argument("reference level must be > 0");
  RealGrid out = spec.data.like<double>();
  const double floor = kDbFloorRatio * s0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] =
        20.0 * std::log10(std::max(std::abs(spec.data.values[i]), floor) / s0);
  }
  return out;
}

double first_inflection_delay(const TemporalFamily& family, double tau) {
  if (!family.causal()) {
    throw std::invalid_argument("inflection delay needs a causal family");
  }
  const DelayMeasures unit =
      delay_measures(family.ladder(1.0, LadderUnits::kContinuous));
  return unit.t_infl1 * std::sqrt(tau);
}

ComplexSpectrogram delay_compensate(const ComplexSpectrogram& spec) {
  if (!spec.family.causal()) {
    throw std::invalid_argument(
        "delay compensation applies to causal spectrograms only");
  }
  if (spec.delay_compensated) {
    throw std::logic_error("spectrogram is already delay compensated");
  }
  ComplexSpectrogram out = spec;
  out.delay_compensated = true;
  const double unit = first_inflection_delay(spec.family, 1.0);
  const std::size_t frames = spec.data.frames();
  for (std::size_t c = 0; c < spec.data.channels(); ++c) {
    const double delay =
        unit * std::sqrt(spec.frequencies.channels[c].tau_window);
    const long shift = std::lround(delay / spec.data.frame_step);
    out.residual_delay[c] =
        delay - static_cast<double>(shift) * spec.data.frame_step;
    for (std::size_t j = 0; j < frames; ++j) {
      const std::size_t src =
          std::min(j + static_cast<std::size_t>(shift), frames - 1);
      out.data.at(j, c) = spec.data.at(src, c);
    }
    out.data.warmup[c] =
        std::max(0, spec.data.warmup[c] - static_cast<int>(shift));
  }
  return out;
}

double gammatone_equivalence_check(double mu, int num_levels, double omega,
                                   int samples) {
  if (!(mu > 0.0) || num_levels < 1 || samples < 2) {
    throw std::invalid_argument("Gammatone check needs mu > 0, K >= 1");
  }
  const double k = num_levels;
  const double horizon = k * mu + 10.0 * std::sqrt(k) * mu;
  const double a = 1.0 / (std::pow(mu, k) * std::tgamma(k));
  const double b = 1.0 / (kTwoPi * mu);
  double worst = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double t = horizon * i / (samples - 1);
    const double window = composed_uniform_kernel(mu, num_levels, t);
    const double envelope = a * std::pow(t, k - 1.0) * std::exp(-kTwoPi * b * t);
    const double cs = std::cos(omega * t), sn = std::sin(omega * t);
    worst = std::max(worst, std::abs(window * cs - envelope * cs));
    worst = std::max(worst, std::abs(window * sn - envelope * sn));
  }
  return worst;
}

double generalized_gammatone_deviation(const ScaleLadder& ladder,
                                       double omega) {
  const double dt =
      std::min(std::sqrt(ladder.tau_max) / 2000.0, ladder.min_mu() / 20.0);
  const SampledKernel h =
      cascade_kernel_numeric(ladder, dt, cascade_min_horizon(ladder));
  const double mu = std::sqrt(ladder.tau_max / ladder.num_levels);
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 1; i < h.values.size(); ++i) {
    const double t = h.time_at(i);
    const double gamma = composed_uniform_kernel(mu, ladder.num_levels, t);
    const double cs = std::cos(omega * t);
    worst = std::max(worst, std::abs((h.values[i] / dt - gamma) * cs));
    peak = std::max(peak, gamma);
  }
  return worst / peak;
}

}  // namespace audiorf
