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

#include "audiorf/receptive_fields.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "audiorf/parallel.h"

namespace audiorf {
namespace {

std::vector<double> column(const RealGrid& g, std::size_t c) {
  std::vector<double> out(g.frames());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = g.at(j, c);
  return out;
}

double catmull_rom(const RealGrid& g, std::size_t frame, double x) {
  const auto n = static_cast<std::ptrdiff_t>(g.channels());
  const double fl = std::floor(x);
  const auto i = static_cast<std::ptrdiff_t>(fl);
  const double u = x - fl;
  if (u == 0.0) return g.at(frame, mirror_index(i, n));
  const double p0 = g.at(frame, mirror_index(i - 1, n));
  const double p1 = g.at(frame, mirror_index(i, n));
  const double p2 = g.at(frame, mirror_index(i + 1, n));
  const double p3 = g.at(frame, mirror_index(i + 2, n));
  return 0.5 * (2.0 * p1 + (p2 - p0) * u +
                (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u * u +
                (3.0 * (p1 - p2) + p3 - p0) * u * u * u);
}

// Frames still affected by the start-up transient grow by `extra` in every
// channel that already had one.
void extend_warmup(RealGrid& g, int extra) {
  for (int& w : g.warmup) {
    if (w > 0) w = std::min(w + extra, static_cast<int>(g.frames()));
  }
}

RealGrid shear(const RealGrid& grid, double v, double t_ref) {
  if (v == 0.0) return grid;
  if (!(grid.nu_step > 0.0)) throw std::invalid_argument("grid without nu step");
  RealGrid out = grid.like<double>();
  if (!out.warmup.empty()) {
    const int worst = *std::max_element(out.warmup.begin(), out.warmup.end());
    std::fill(out.warmup.begin(), out.warmup.end(), worst);
  }
  parallel_for(grid.frames(), [&](std::size_t j) {
    const double shift = v * (grid.times[j] - t_ref) / grid.nu_step;
    for (std::size_t c = 0; c < grid.channels(); ++c) {
      out.at(j, c) = catmull_rom(grid, j, static_cast<double>(c) + shift);
    }
  });
  return out;
}

// Temporal kernel of order `order` at time t for rendering.
class TemporalKernelSampler {
 public:
  TemporalKernelSampler(const TemporalFamily& family, double tau, int order,
                        double dt, std::size_t count)
      : family_(family), tau_(tau), order_(order) {
    if (family.kind != TemporalFamily::Kind::kCausalLogarithmic) return;
    const ScaleLadder ladder = family.ladder(tau, LadderUnits::kContinuous);
    const int sub = std::max(
        1, static_cast<int>(std::ceil(dt / (ladder.min_mu() / 20.0))));
    fine_dt_ = dt / sub;
    sub_ = sub;
    const double horizon = std::max(cascade_min_horizon(ladder),
                                    dt * static_cast<double>(count + 2));
    const SampledKernel k = cascade_kernel_numeric(ladder, fine_dt_, horizon);
    density_.resize(k.values.size());
    for (std::size_t i = 0; i < k.values.size(); ++i) {
      density_[i] = k.values[i] / fine_dt_;
    }
    density_[0] *= 2.0;  // Undo the trapezoid end weight.
  }

  double at(std::size_t j, double t) const {
    switch (family_.kind) {
      case TemporalFamily::Kind::kGaussian:
        return gaussian_kernel_derivative({tau_, 0.0}, t, order_);
      case TemporalFamily::Kind::kCausalUniform:
        return composed_uniform_kernel(
            std::sqrt(tau_ / family_.num_levels), family_.num_levels, t,
            order_);
      case TemporalFamily::Kind::kCausalLogarithmic:
        break;
    }
    const std::size_t i = j * static_cast<std::size_t>(sub_);
    auto d = [&](std::ptrdiff_t k) {
      if (k < 0 || k >= static_cast<std::ptrdiff_t>(density_.size())) return 0.0;
      return density_[k];
    };
    const auto ii = static_cast<std::ptrdiff_t>(i);
    if (order_ == 0) return d(ii);
    if (order_ == 1) return (d(ii + 1) - d(ii - 1)) / (2.0 * fine_dt_);
    return (d(ii + 1) - 2.0 * d(ii) + d(ii - 1)) / (fine_dt_ * fine_dt_);
  }

 private:
  TemporalFamily family_;
  double tau_;
  int order_;
  double fine_dt_ = 0.0;
  int sub_ = 1;
  std::vector<double> density_;
};

}  // namespace

void RFSpec::validate() const {
  if (tau_a < 0.0 || s < 0.0) {
    throw std::invalid_argument("receptive field scales must be >= 0");
  }
  if (alpha < 0 || beta < 0) {
    throw std::invalid_argument("derivative orders must be >= 0");
  }
  if (family.causal() && alpha >= family.num_levels) {
    throw std::invalid_argument(
        "temporal derivative order must be below the number of stages K");
  }
}

double RFSpec::normalization() const {
  if (!normalized) return 1.0;
  return std::pow(tau_a, alpha / 2.0) * std::pow(s, beta / 2.0);
}

RealGrid spectral_smooth(const RealGrid& grid, double s, double epsilon) {
  if (s < 0.0) throw std::invalid_argument("spectral scale must be >= 0");
  if (s == 0.0 || grid.empty()) return grid;
  const SampledKernel kernel =
      discrete_gaussian_kernel(s / (grid.nu_step * grid.nu_step), epsilon);
  RealGrid out = grid.like<double>();
  const std::size_t nc = grid.channels();
  parallel_for(grid.frames(), [&](std::size_t j) {
    const std::span<const double> row(&grid.values[j * nc], nc);
    const std::vector<double> smoothed = convolve_mirrored(row, kernel);
    std::copy(smoothed.begin(), smoothed.end(), &out.values[j * nc]);
  });
  return out;
}

RealGrid temporal_smooth(const RealGrid& grid, const TemporalFamily& family,
                         double tau_a, double epsilon) {
  if (tau_a < 0.0) throw std::invalid_argument("temporal scale must be >= 0");
  if (tau_a == 0.0 || grid.empty()) return grid;
  const double frames2 = tau_a / (grid.frame_step * grid.frame_step);
  RealGrid out = grid.like<double>();
  if (family.causal()) {
    const ScaleLadder ladder = family.ladder(frames2, LadderUnits::kDiscrete);
    parallel_for(grid.channels(), [&](std::size_t c) {
      RecursiveSmoother smoother(ladder.mus);
      smoother.reset(grid.at(0, c));
      for (std::size_t j = 0; j < grid.frames(); ++j) {
        out.at(j, c) = smoother.push(grid.at(j, c));
      }
    });
    extend_warmup(out, warmup_samples(ladder));
  } else {
    const SampledKernel kernel = discrete_gaussian_kernel(frames2, epsilon);
    parallel_for(grid.channels(), [&](std::size_t c) {
      const std::vector<double> smoothed =
          convolve_mirrored(column(grid, c), kernel);
      for (std::size_t j = 0; j < grid.frames(); ++j) out.at(j, c) = smoothed[j];
    });
    extend_warmup(out, kernel.origin_index);
  }
  return out;
}

RealGrid temporal_difference(const RealGrid& grid, int order, bool causal) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("temporal difference order must be 1 or 2");
  }
  RealGrid out = grid.like<double>();
  const auto nf = static_cast<std::ptrdiff_t>(grid.frames());
  const double h = grid.frame_step;
  for (std::size_t c = 0; c < grid.channels(); ++c) {
    auto y = [&](std::ptrdiff_t j) {
      return grid.at(static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
                         j, 0, nf - 1)),
                     c);
    };
    for (std::ptrdiff_t j = 0; j < nf; ++j) {
      double d;
      if (order == 1) {
        d = (y(j) - y(j - 1)) / h;
      } else if (causal) {
        d = (y(j) - 2.0 * y(j - 1) + y(j - 2)) / (h * h);
      } else {
        d = (y(j + 1) - 2.0 * y(j) + y(j - 1)) / (h * h);
      }
      out.at(static_cast<std::size_t>(j), c) = d;
    }
  }
  extend_warmup(out, order);
  return out;
}

RealGrid spectral_difference(const RealGrid& grid, int order) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument("spectral difference order must be 1 or 2");
  }
  RealGrid out = grid.like<double>();
  const auto nc = static_cast<std::ptrdiff_t>(grid.channels());
  const double h = grid.nu_step;
  for (std::size_t j = 0; j < grid.frames(); ++j) {
    auto y = [&](std::ptrdiff_t i) { return grid.at(j, mirror_index(i, nc)); };
    for (std::ptrdiff_t i = 0; i < nc; ++i) {
      out.at(j, static_cast<std::size_t>(i)) =
          order == 1 ? 0.5 * (y(i + 1) - y(i - 1)) / h
                     : (y(i + 1) - 2.0 * y(i) + y(i - 1)) / (h * h);
    }
  }
  return out;
}

RealGrid glissando_warp(const RealGrid& grid, double v, double t_ref) {
  return shear(grid, v, t_ref);
}

RealGrid glissando_unwarp(const RealGrid& grid, double v, double t_ref) {
  return shear(grid, -v, t_ref);
}

double reference_time(const RealGrid& grid) {
  if (grid.times.empty()) return 0.0;
  return grid.times[grid.times.size() / 2];
}

RealGrid apply_rf(const RealGrid& grid, const RFSpec& spec) {
  spec.validate();
  if (spec.v != 0.0) {
    const double t_ref = reference_time(grid);
    RFSpec separable = spec;
    separable.v = 0.0;
    return glissando_unwarp(
        apply_rf(glissando_warp(grid, spec.v, t_ref), separable), spec.v,
        t_ref);
  }
  RealGrid out = temporal_smooth(grid, spec.family, spec.tau_a);
  out = spectral_smooth(out, spec.s);
  const bool causal = spec.family.causal();
  for (int a = spec.alpha; a > 0; a -= 2) {
    out = temporal_difference(out, a >= 2 ? 2 : 1, causal);
  }
  for (int b = spec.beta; b > 0; b -= 2) {
    out = spectral_difference(out, b >= 2 ? 2 : 1);
  }
  const double scale = spec.normalization();
  if (scale != 1.0) {
    for (double& v : out.values) v *= scale;
  }
  return out;
}

RealGrid rf_kernel_image(const RFSpec& spec, double t_span, double nu_span,
                         double dt, double dnu) {
  spec.validate();
  if (!(t_span > 0.0) || !(nu_span > 0.0) || !(dt > 0.0) || !(dnu > 0.0)) {
    throw std::invalid_argument("kernel image needs positive spans and steps");
  }
  if (!(spec.s > 0.0) || !(spec.tau_a > 0.0)) {
    throw std::invalid_argument("kernel image needs tau_a > 0 and s > 0");
  }
  if (spec.family.kind != TemporalFamily::Kind::kGaussian && spec.alpha > 2) {
    throw std::invalid_argument("causal kernel images support alpha <= 2");
  }
  const auto nt = static_cast<std::size_t>(std::floor(t_span / dt)) + 1;
  const auto nn = static_cast<std::size_t>(std::floor(nu_span / dnu)) + 1;
  std::vector<double> times(nt), nus(nn);
  const double t0 =
      spec.family.causal() ? 0.0 : -0.5 * static_cast<double>(nt - 1) * dt;
  for (std::size_t j = 0; j < nt; ++j) times[j] = t0 + static_cast<double>(j) * dt;
  for (std::size_t i = 0; i < nn; ++i) {
    nus[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(nn - 1)) * dnu;
  }
  RealGrid out(times, nus, dt, dnu);
  const TemporalKernelSampler temporal(spec.family, spec.tau_a, spec.alpha, dt,
                                       nt);
  const double scale = spec.normalization();
  for (std::size_t j = 0; j < nt; ++j) {
    const double tk = temporal.at(j, times[j]);
    for (std::size_t i = 0; i < nn; ++i) {
      out.at(j, i) = scale * tk *
                     gaussian_kernel_derivative({spec.s, 0.0},
                                                nus[i] - spec.v * times[j],
                                                spec.beta);
    }
  }
  return out;
}

}  // namespace audiorf
