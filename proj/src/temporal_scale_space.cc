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

#include "audiorf/temporal_scale_space.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace audiorf {

double ScaleLadder::mean() const {
  return std::accumulate(mus.begin(), mus.end(), 0.0);
}

double ScaleLadder::variance() const {
  double v = 0.0;
  for (double mu : mus) {
    v += units == LadderUnits::kDiscrete ? mu * mu + mu : mu * mu;
  }
  return v;
}

double ScaleLadder::min_mu() const {
  return mus.empty() ? 0.0 : *std::min_element(mus.begin(), mus.end());
}

double discrete_mu_from_variance(double delta_tau) {
  // (sqrt(1 + 4x) - 1) / 2 without cancellation for small x.
  return 2.0 * delta_tau / (std::sqrt(1.0 + 4.0 * delta_tau) + 1.0);
}

ScaleLadder build_ladder(LadderDistribution distribution, double tau_max,
                         int num_levels, double ratio, LadderUnits units) {
  if (num_levels < 1) {
    throw std::invalid_argument("scale ladder needs at least one level");
  }
  if (!(tau_max > 0.0) || !std::isfinite(tau_max)) {
    throw std::invalid_argument("scale ladder needs tau_max > 0");
  }
  if (distribution == LadderDistribution::kLogarithmic && !(ratio > 1.0)) {
    throw std::invalid_argument(
        "logarithmic scale ladder needs distribution parameter c > 1");
  }

  ScaleLadder ladder;
  ladder.distribution = distribution;
  ladder.units = units;
  ladder.tau_max = tau_max;
  ladder.num_levels = num_levels;
  ladder.ratio = distribution == LadderDistribution::kLogarithmic ? ratio : 0.0;
  ladder.levels.resize(num_levels);
  ladder.mus.resize(num_levels);

  const int K = num_levels;
  for (int k = 1; k <= K; ++k) {
    ladder.levels[k - 1] =
        distribution == LadderDistribution::kLogarithmic
            ? std::pow(ratio, 2.0 * (k - K)) * tau_max
            : static_cast<double>(k) / K * tau_max;
  }
  ladder.levels.back() = tau_max;

  if (units == LadderUnits::kContinuous) {
    const double sigma = std::sqrt(tau_max);
    if (distribution == LadderDistribution::kLogarithmic) {
      ladder.mus[0] = std::pow(ratio, 1.0 - K) * sigma;
      for (int k = 2; k <= K; ++k) {
        ladder.mus[k - 1] =
            std::pow(ratio, k - K - 1.0) * std::sqrt(ratio * ratio - 1.0) * sigma;
      }
    } else {
      std::fill(ladder.mus.begin(), ladder.mus.end(),
                std::sqrt(tau_max / K));
    }
  } else {
    double previous = 0.0;
    for (int k = 0; k < K; ++k) {
      ladder.mus[k] = discrete_mu_from_variance(ladder.levels[k] - previous);
      previous = ladder.levels[k];
    }
  }
  return ladder;
}

TemporalFamily TemporalFamily::gaussian() {
  TemporalFamily f;
  f.kind = Kind::kGaussian;
  f.num_levels = 0;
  f.ratio = 0.0;
  return f;
}

TemporalFamily TemporalFamily::causal_uniform(int num_levels) {
  TemporalFamily f;
  f.kind = Kind::kCausalUniform;
  f.num_levels = num_levels;
  f.ratio = 0.0;
  return f;
}

TemporalFamily TemporalFamily::causal_logarithmic(int num_levels,
                                                  double ratio) {
  TemporalFamily f;
  f.kind = Kind::kCausalLogarithmic;
  f.num_levels = num_levels;
  f.ratio = ratio;
  return f;
}

ScaleLadder TemporalFamily::ladder(double tau, LadderUnits units) const {
  switch (kind) {
    case Kind::kCausalUniform:
      return build_ladder(LadderDistribution::kUniform, tau, num_levels, 0.0,
                          units);
    case Kind::kCausalLogarithmic:
      return build_ladder(LadderDistribution::kLogarithmic, tau, num_levels,
                          ratio, units);
    case Kind::kGaussian:
      break;
  }
  throw std::logic_error("the Gaussian family has no scale ladder");
}

std::string TemporalFamily::name() const {
  switch (kind) {
    case Kind::kGaussian:
      return "gauss";
    case Kind::kCausalUniform:
      return "rec-uni";
    case Kind::kCausalLogarithmic:
      return "rec-log";
  }
  return "?";
}

void TemporalKernelSpec::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("temporal scale must be > 0");
  if (family.kind == TemporalFamily::Kind::kGaussian) {
    if (delta < 0.0) throw std::invalid_argument("time delay must be >= 0");
  } else if (family.num_levels < 1) {
    throw std::invalid_argument("causal cascade needs K >= 1");
  }
}

double SampledKernel::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double SampledKernel::mean() const {
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    m0 += values[i];
    m1 += values[i] * time_at(i);
  }
  return m1 / m0;
}

double SampledKernel::variance() const {
  const double m = mean();
  double m0 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = time_at(i) - m;
    m0 += values[i];
    m2 += values[i] * d * d;
  }
  return m2 / m0;
}

double gaussian_kernel_sample(const GaussianKernelSpec& spec, double t) {
  const double d = t - spec.delta;
  return std::exp(-d * d / (2.0 * spec.tau)) /
         std::sqrt(2.0 * std::numbers::pi * spec.tau);
}

double gaussian_kernel_derivative(const GaussianKernelSpec& spec, double t,
                                  int order) {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  const double sigma = std::sqrt(spec.tau);
  const double x = (t - spec.delta) / sigma;
  // Probabilists' Hermite polynomials: g^(n) = (-1)^n He_n(x) g / sigma^n.
  double he_prev = 1.0, he = x;
  if (order == 0) he = 1.0;
  for (int k = 1; k < order; ++k) {
    const double next = x * he - k * he_prev;
    he_prev = he;
    he = next;
  }
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * he / std::pow(sigma, order) * gaussian_kernel_sample(spec, t);
}

SampledKernel sample_gaussian_derivative_kernel(const GaussianKernelSpec& spec,
                                                int order, double dt,
                                                double half_width_sigmas) {
  if (!(spec.tau > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("Gaussian kernel needs tau > 0 and dt > 0");
  }
  const double sigma = std::sqrt(spec.tau);
  const auto lo = static_cast<long>(
      std::floor((spec.delta - half_width_sigmas * sigma) / dt));
  const auto hi = static_cast<long>(
      std::ceil((spec.delta + half_width_sigmas * sigma) / dt));

  SampledKernel kernel;
  kernel.dt = dt;
  kernel.origin_index = static_cast<int>(-lo);
  kernel.values.reserve(hi - lo + 1);
  for (long i = lo; i <= hi; ++i) {
    kernel.values.push_back(
        gaussian_kernel_derivative(spec, static_cast<double>(i) * dt, order) *
        dt);
  }
  if (order == 0) {
    const double s = kernel.sum();
    for (double& v : kernel.values) v /= s;
  } else {
    const double m = kernel.sum() / static_cast<double>(kernel.values.size());
    for (double& v : kernel.values) v -= m;
  }
  return kernel;
}

double composed_uniform_kernel(double mu, int num_levels, double t,
                               int order) {
  if (!(mu > 0.0) || num_levels < 1) {
    throw std::invalid_argument("composed kernel needs mu > 0 and K >= 1");
  }
  if (order < 0 || order > 2) {
    throw std::invalid_argument("composed kernel derivatives up to order 2");
  }
  if (t < 0.0) return 0.0;
  const double k1 = num_levels - 1.0;
  if (t == 0.0) {
    // Right limits; only the single exponential is nonzero at the origin.
    if (num_levels == 1) {
      return order == 0 ? 1.0 / mu
                        : (order == 1 ? -1.0 / (mu * mu) : 1.0 / (mu * mu * mu));
    }
    return 0.0;
  }
  const double h = std::exp(k1 * std::log(t) - t / mu -
                            num_levels * std::log(mu) -
                            std::lgamma(static_cast<double>(num_levels)));
  if (order == 0) return h;
  const double r = k1 / t - 1.0 / mu;
  if (order == 1) return h * r;
  return h * (r * r - k1 / (t * t));
}

double cascade_min_horizon(const ScaleLadder& ladder) {
  return ladder.mean() + 10.0 * std::sqrt(ladder.tau_max);
}

SampledKernel cascade_kernel_numeric(const ScaleLadder& ladder, double dt,
                                     double horizon) {
  if (ladder.units != LadderUnits::kContinuous || ladder.mus.empty()) {
    throw std::invalid_argument("numeric cascade needs a continuous ladder");
  }
  if (!(dt > 0.0) || dt > ladder.min_mu() / 20.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("numeric cascade needs dt <= min(mu) / 20");
  }
  if (horizon < cascade_min_horizon(ladder)) {
    throw std::invalid_argument(
        "numeric cascade horizon does not cover sum(mu) + 10 sqrt(tau)");
  }

  const auto n = static_cast<std::size_t>(std::ceil(horizon / dt)) + 1;
  std::vector<double> y(n), next(n);
  const double mu1 = ladder.mus[0];
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::exp(-static_cast<double>(i) * dt / mu1) / mu1;
  }
  // Remaining stages: exact response of y' = (x - y) / mu to an input that
  // is linear between samples.
  for (std::size_t k = 1; k < ladder.mus.size(); ++k) {
    const double mu = ladder.mus[k];
    const double a = std::exp(-dt / mu);
    const double b = mu * (1.0 - a) / dt;
    next[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      next[i] = a * next[i - 1] + (b - a) * y[i - 1] + (1.0 - b) * y[i];
    }
    std::swap(y, next);
  }

  SampledKernel kernel;
  kernel.dt = dt;
  kernel.origin_index = 0;
  kernel.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) kernel.values[i] = y[i] * dt;
  kernel.values[0] *= 0.5;  // Trapezoid weight at the jump for K = 1.
  const double s = kernel.sum();
  for (double& v : kernel.values) v /= s;
  return kernel;
}

RecursiveSmoother::RecursiveSmoother(std::vector<double> mus)
    : gains_(mus.size()), state_(mus.size(), 0.0) {
  for (std::size_t k = 0; k < mus.size(); ++k) gains_[k] = 1.0 / (1.0 + mus[k]);
}

void RecursiveSmoother::reset(double level) {
  std::fill(state_.begin(), state_.end(), level);
}

std::vector<std::vector<double>> discrete_recursive_smooth(
    std::span<const double> signal, const ScaleLadder& ladder) {
  RecursiveSmoother smoother(ladder.mus);
  std::vector<std::vector<double>> out(ladder.mus.size(),
                                       std::vector<double>(signal.size()));
  for (std::size_t i = 0; i < signal.size(); ++i) {
    smoother.push(signal[i]);
    const auto& ch = smoother.channels();
    for (std::size_t k = 0; k < ch.size(); ++k) out[k][i] = ch[k];
  }
  return out;
}

int warmup_samples(const ScaleLadder& ladder) {
  return static_cast<int>(std::ceil(5.0 * ladder.mean()));
}

std::vector<double> temporal_derivative_channels(
    std::span<const std::vector<double>> channels, const ScaleLadder& ladder,
    int order, int level, double dt) {
  if (level < 1 || level > static_cast<int>(ladder.mus.size()) ||
      static_cast<std::size_t>(level) > channels.size()) {
    throw std::invalid_argument("derivative level outside the ladder");
  }
  if (order < 0 || order >= level) {
    throw std::invalid_argument(
        "temporal derivative order must be smaller than the level index");
  }
  // work[j] holds the derivative of the current order at level (level - order + j).
  const int base = level - order;
  std::vector<std::vector<double>> work;
  for (int j = base; j <= level; ++j) work.push_back(channels[j - 1]);
  for (int q = 1; q <= order; ++q) {
    for (int j = level; j >= base + q; --j) {
      const double inv_mu = 1.0 / ladder.mus[j - 1];
      auto& hi = work[j - base];
      const auto& lo = work[j - 1 - base];
      for (std::size_t i = 0; i < hi.size(); ++i) {
        hi[i] = (lo[i] - hi[i]) * inv_mu;
      }
    }
  }
  std::vector<double> result = std::move(work.back());
  if (dt != 1.0) {
    const double scale = 1.0 / std::pow(dt, order);
    for (double& v : result) v *= scale;
  }
  return result;
}

SampledKernel discrete_gaussian_kernel(double s, double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument("truncation tolerance must lie in (0, 1)");
  }
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("discrete Gaussian needs s >= 0");
  }
  SampledKernel kernel;
  kernel.dt = 1.0;
  if (s == 0.0) {
    kernel.values = {1.0};
    kernel.origin_index = 0;
    return kernel;
  }

  // Miller's backward recurrence in ratio form, r_n = I_n / I_{n-1} =
  // 1 / (2n/s + r_{n+1}), which cannot overflow. Products of the ratios give
  // I_n / I_0; their two-sided sum is e^s / I_0.
  const auto start =
      static_cast<std::size_t>(std::ceil(12.0 * std::sqrt(s) + 30.0));
  std::vector<double> b(start + 1, 0.0), ratios(start + 1, 0.0);
  double ratio = 0.0;
  for (std::size_t n = start; n >= 1; --n) {
    ratio = 1.0 / (2.0 * static_cast<double>(n) / s + ratio);
    ratios[n] = ratio;
  }
  b[0] = 1.0;
  for (std::size_t n = 1; n <= start; ++n) b[n] = b[n - 1] * ratios[n];
  double total = b[0];
  for (std::size_t n = 1; n <= start; ++n) total += 2.0 * b[n];
  for (double& v : b) v /= total;

  std::size_t half = 0;
  double mass = b[0];
  while (!(mass > 1.0 - epsilon) && half < start) {
    ++half;
    mass += 2.0 * b[half];
  }
  kernel.origin_index = static_cast<int>(half);
  kernel.values.resize(2 * half + 1);
  for (std::size_t n = 0; n <= half; ++n) {
    kernel.values[half + n] = b[n] / mass;
    kernel.values[half - n] = b[n] / mass;
  }
  return kernel;
}

std::ptrdiff_t mirror_index(std::ptrdiff_t i, std::ptrdiff_t size) {
  const std::ptrdiff_t period = 2 * size;
  std::ptrdiff_t j = i % period;
  if (j < 0) j += period;
  return j < size ? j : period - 1 - j;
}

std::vector<double> convolve_mirrored(std::span<const double> signal,
                                      const SampledKernel& kernel) {
  const auto n = static_cast<std::ptrdiff_t>(signal.size());
  std::vector<double> out(signal.size(), 0.0);
  if (n == 0) return out;
  const auto taps = static_cast<std::ptrdiff_t>(kernel.values.size());
  const std::ptrdiff_t origin = kernel.origin_index;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    const bool interior = i - (taps - 1 - origin) >= 0 && i + origin < n;
    if (interior) {
      for (std::ptrdiff_t m = 0; m < taps; ++m) {
        acc += kernel.values[m] * signal[i - (m - origin)];
      }
    } else {
      for (std::ptrdiff_t m = 0; m < taps; ++m) {
        acc += kernel.values[m] * signal[mirror_index(i - (m - origin), n)];
      }
    }
    out[i] = acc;
  }
  return out;
}

SampledKernel convolve_kernels(const SampledKernel& a, const SampledKernel& b) {
  SampledKernel out;
  out.dt = a.dt;
  out.origin_index = a.origin_index + b.origin_index;
  out.values.assign(a.values.size() + b.values.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    for (std::size_t j = 0; j < b.values.size(); ++j) {
      out.values[i + j] += a.values[i] * b.values[j];
    }
  }
  return out;
}

}  // namespace audiorf
