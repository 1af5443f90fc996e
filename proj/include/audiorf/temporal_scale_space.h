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

// Temporal scale-space kernels: the non-causal Gaussian, cascades of
// truncated exponentials (continuous formulas and first-order recursive
// filters), and the discrete analogue of the Gaussian kernel.

#ifndef AUDIORF_TEMPORAL_SCALE_SPACE_H_
#define AUDIORF_TEMPORAL_SCALE_SPACE_H_

#include <span>
#include <string>
#include <vector>

namespace audiorf {

enum class LadderDistribution { kUniform, kLogarithmic };

// Continuous ladders carry time constants in seconds with sum(mu^2) equal to
// tau_max. Discrete ladders carry time constants in samples of first-order
// recursive filters whose variances mu^2 + mu add up to tau_max.
enum class LadderUnits { kContinuous, kDiscrete };

struct ScaleLadder {
  LadderDistribution distribution = LadderDistribution::kUniform;
  LadderUnits units = LadderUnits::kContinuous;
  double tau_max = 0.0;
  int num_levels = 0;
  double ratio = 0.0;  // Distribution parameter c (logarithmic only).
  std::vector<double> levels;  // tau_1 < ... < tau_K = tau_max.
  std::vector<double> mus;     // Per-stage time constants.

  // Temporal mean of the composed kernel (sum of the time constants).
  double mean() const;
  // Variance of the composed kernel implied by the time constants.
  double variance() const;
  double min_mu() const;
};

// Throws std::invalid_argument for num_levels < 1, tau_max <= 0 or a
// logarithmic ladder with ratio <= 1.
ScaleLadder build_ladder(LadderDistribution distribution, double tau_max,
                         int num_levels, double ratio = 2.0,
                         LadderUnits units = LadderUnits::kContinuous);

// Time constant of a first-order recursive filter with variance increment
// delta_tau (solves mu^2 + mu = delta_tau).
double discrete_mu_from_variance(double delta_tau);

// Family of temporal smoothing kernels shared by the first-layer spectrogram
// windows and the second-layer receptive fields.
struct TemporalFamily {
  enum class Kind { kGaussian, kCausalUniform, kCausalLogarithmic };
  Kind kind = Kind::kCausalLogarithmic;
  int num_levels = 7;
  double ratio = 1.4142135623730951;

  static TemporalFamily gaussian();
  static TemporalFamily causal_uniform(int num_levels);
  static TemporalFamily causal_logarithmic(int num_levels, double ratio);

  bool causal() const { return kind != Kind::kGaussian; }
  // Ladder reaching tau; only valid for causal families.
  ScaleLadder ladder(double tau, LadderUnits units) const;
  std::string name() const;
};

struct GaussianKernelSpec {
  double tau = 1.0;    // Variance, seconds^2.
  double delta = 0.0;  // Time delay, seconds.
};

struct TemporalKernelSpec {
  TemporalFamily family;
  double tau = 1.0;
  double delta = 0.0;  // Gaussian family only.

  void validate() const;
};

// Weights on a uniform grid. Sample i sits at time (i - origin_index) * dt.
struct SampledKernel {
  std::vector<double> values;
  int origin_index = 0;
  double dt = 1.0;

  double sum() const;
  double mean() const;
  double variance() const;
  double time_at(std::size_t i) const {
    return (static_cast<double>(i) - origin_index) * dt;
  }
};

// (1/sqrt(2 pi tau)) exp(-(t - delta)^2 / (2 tau)).
double gaussian_kernel_sample(const GaussianKernelSpec& spec, double t);
// Analytic temporal derivative of order `order` of the Gaussian kernel.
double gaussian_kernel_derivative(const GaussianKernelSpec& spec, double t,
                                  int order);

// Gaussian derivative kernel sampled on a grid of spacing dt over
// delta +- half_width_sigmas * sqrt(tau). Order 0 is renormalized to unit
// sum; higher orders are corrected to zero sum by subtracting the mean weight.
SampledKernel sample_gaussian_derivative_kernel(const GaussianKernelSpec& spec,
                                                int order, double dt,
                                                double half_width_sigmas = 8.0);

// t^(K-1) exp(-t/mu) / (mu^K Gamma(K)) for t > 0 and its first two
// derivatives (order 1, 2). Zero for t <= 0.
double composed_uniform_kernel(double mu, int num_levels, double t,
                               int order = 0);

// Smallest horizon accepted by cascade_kernel_numeric.
double cascade_min_horizon(const ScaleLadder& ladder);

// Impulse response of a continuous cascade of truncated exponentials with
// unequal time constants, stepped exactly per stage. Weights approximate
// h(t) dt and are renormalized to unit sum. Requires a continuous ladder,
// dt <= min_mu / 20 and horizon >= cascade_min_horizon(ladder).
SampledKernel cascade_kernel_numeric(const ScaleLadder& ladder, double dt,
                                     double horizon);

// Streaming cascade of first-order recursive filters
//   f_out(t) = f_out(t-1) + (f_in(t) - f_out(t-1)) / (1 + mu_k)
// starting from a zero state. Not thread-safe; one instance per worker.
class RecursiveSmoother {
 public:
  explicit RecursiveSmoother(std::vector<double> mus);

  // Advances one sample and returns the output of the last stage.
  double push(double x) {
    double in = x;
    for (std::size_t k = 0; k < gains_.size(); ++k) {
      state_[k] += (in - state_[k]) * gains_[k];
      in = state_[k];
    }
    return in;
  }
  // Outputs of stages 1..K after the last push.
  const std::vector<double>& channels() const { return state_; }
  // Sets every stage to `level`, the steady state for a constant prehistory.
  void reset(double level = 0.0);

 private:
  std::vector<double> gains_;
  std::vector<double> state_;
};

// Runs the discrete ladder over the signal; result[k - 1] holds the signal
// smoothed to scale level tau_k.
std::vector<std::vector<double>> discrete_recursive_smooth(
    std::span<const double> signal, const ScaleLadder& ladder);

// Number of leading samples still dominated by the zero initial state.
int warmup_samples(const ScaleLadder& ladder);

// Temporal derivative of order `order` at level `level` (1-based) computed
// from differences between the smoothed channels, divided by dt^order.
// Requires order < level <= K.
std::vector<double> temporal_derivative_channels(
    std::span<const std::vector<double>> channels, const ScaleLadder& ladder,
    int order, int level, double dt = 1.0);

// Discrete analogue of the Gaussian, T(n; s) = exp(-s) I_n(s), truncated to
// the smallest symmetric support with mass > 1 - epsilon and renormalized.
SampledKernel discrete_gaussian_kernel(double s, double epsilon = 1e-6);

// Index into [0, size) for an arbitrary integer under repeated mirroring
// about the half-sample boundaries (x[-1] = x[0], x[size] = x[size-1]).
std::ptrdiff_t mirror_index(std::ptrdiff_t i, std::ptrdiff_t size);

// Convolution with mirrored boundaries. The kernel origin maps to the
// output sample.
std::vector<double> convolve_mirrored(std::span<const double> signal,
                                      const SampledKernel& kernel);

// Full linear convolution of two kernels with equal dt.
SampledKernel convolve_kernels(const SampledKernel& a, const SampledKernel& b);

}  // namespace audiorf

#endif  // AUDIORF_TEMPORAL_SCALE_SPACE_H_
