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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "audiorf/receptive_fields.h"
#include "test_util.h"

namespace audiorf {
namespace {

using testutil::make_grid;
using testutil::max_abs_diff;
constexpr double kPi = std::numbers::pi;

RealGrid random_grid(std::size_t frames, std::size_t channels, unsigned seed) {
  RealGrid g = make_grid(frames, channels, 1e-3, 40.0, 0.25);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-60.0, 0.0);
  for (auto& v : g.values) v = u(rng);
  return g;
}

// Gaussian ridge of unit spectral width following nu0 + v (t - t_ref).
RealGrid ridge_grid(double v, double nu0, double t_ref) {
  RealGrid g = make_grid(201, 160, 1e-3, 50.0, 0.25);
  for (std::size_t j = 0; j < g.frames(); ++j) {
    const double centre = nu0 + v * (g.times[j] - t_ref);
    for (std::size_t c = 0; c < g.channels(); ++c) {
      const double d = g.nus[c] - centre;
      g.at(j, c) = -60.0 + 60.0 * std::exp(-0.5 * d * d);
    }
  }
  return g;
}

// Sub-bin ridge position per frame from a parabola through the argmax.
std::vector<double> ridge_positions(const RealGrid& g) {
  std::vector<double> out;
  for (std::size_t j = 0; j < g.frames(); ++j) {
    std::size_t best = 1;
    for (std::size_t c = 1; c + 1 < g.channels(); ++c) {
      if (g.at(j, c) > g.at(j, best)) best = c;
    }
    const double a = g.at(j, best - 1), b = g.at(j, best), c = g.at(j, best + 1);
    const double denom = a - 2 * b + c;
    const double off = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    out.push_back(g.nus[best] + off * g.nu_step);
  }
  return out;
}

double variance(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size());
}

std::vector<TemporalFamily> all_families() {
  return {TemporalFamily::gaussian(), TemporalFamily::causal_uniform(4),
          TemporalFamily::causal_logarithmic(7, std::numbers::sqrt2)};
}

TEST_CASE("spectral smoothing") {
  const RealGrid g = random_grid(20, 120, 1);
  CHECK(spectral_smooth(g, 0.0).values == g.values);

  RealGrid flat = g;
  for (auto& v : flat.values) v = -17.5;
  CHECK(max_abs_diff(spectral_smooth(flat, 2.0).values, flat.values) < 1e-9);

  const RealGrid twice = spectral_smooth(spectral_smooth(g, 0.3, 1e-12), 0.5, 1e-12);
  const RealGrid once = spectral_smooth(g, 0.8, 1e-12);
  CHECK(max_abs_diff(twice.values, once.values) < 1e-8);
  CHECK_THROWS_AS(spectral_smooth(g, -1.0), std::invalid_argument);
}

TEST_CASE("Gaussian temporal smoothing semigroup") {
  const RealGrid g = random_grid(300, 8, 2);
  const auto fam = TemporalFamily::gaussian();
  const RealGrid twice =
      temporal_smooth(temporal_smooth(g, fam, 4e-6, 1e-12), fam, 9e-6, 1e-12);
  const RealGrid once = temporal_smooth(g, fam, 13e-6, 1e-12);
  CHECK(max_abs_diff(twice.values, once.values) < 1e-8);
}

TEST_CASE("causal temporal smoothing keeps a constant") {
  RealGrid g = random_grid(50, 6, 3);
  for (std::size_t c = 0; c < g.channels(); ++c) {
    for (std::size_t j = 0; j < g.frames(); ++j) g.at(j, c) = -3.0 * c;
  }
  for (const auto& fam : all_families()) {
    CHECK(max_abs_diff(temporal_smooth(g, fam, 1e-4).values, g.values) < 1e-9);
  }
}

TEST_CASE("identity receptive field") {
  const RealGrid g = random_grid(40, 30, 4);
  for (const auto& fam : all_families()) {
    RFSpec spec{fam, 0.0, 0.0, 0.0, 0, 0};
    CHECK(apply_rf(g, spec).values == g.values);
    spec.tau_a = 1e-14;
    CHECK(max_abs_diff(apply_rf(g, spec).values, g.values) < 1e-6);
  }
}

TEST_CASE("derivative of a constant vanishes") {
  RealGrid g = random_grid(60, 40, 5);
  for (auto& v : g.values) v = -42.0;
  for (const auto& fam : all_families()) {
    for (int alpha : {1, 2}) {
      const RealGrid r = apply_rf(g, RFSpec{fam, 2e-5, 0.5, 0.0, alpha, 0});
      for (double v : r.values) CHECK(std::abs(v) < 1e-9);
    }
  }
}

TEST_CASE("dB offsets are removed by derivatives") {
  const RealGrid g = random_grid(80, 50, 6);
  RealGrid louder = g;
  for (auto& v : louder.values) v += 20.0;
  for (const auto& fam : all_families()) {
    for (auto [alpha, beta, v] : {std::tuple{1, 0, 0.0}, std::tuple{0, 1, 0.0},
                                  std::tuple{2, 0, 0.0}, std::tuple{0, 2, 0.0},
                                  std::tuple{1, 1, 0.0}, std::tuple{1, 0, 15.0},
                                  std::tuple{0, 2, -20.0}}) {
      const RFSpec spec{fam, 1e-5, 0.4, v, alpha, beta};
      CHECK(max_abs_diff(apply_rf(g, spec).values, apply_rf(louder, spec).values) <
            1e-9);
    }
  }
}

TEST_CASE("scale normalization factor") {
  const RealGrid g = random_grid(60, 40, 7);
  RFSpec spec{TemporalFamily::causal_uniform(4), 4e-6, 0.25, 0.0, 1, 2};
  const RealGrid a = apply_rf(g, spec);
  spec.normalized = false;
  const RealGrid b = apply_rf(g, spec);
  const double factor = std::sqrt(4e-6) * 0.25;
  CHECK(spec.normalization() == 1.0);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == doctest::Approx(factor * b.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("spec validation") {
  const RealGrid g = random_grid(10, 10, 8);
  CHECK_THROWS_AS(apply_rf(g, RFSpec{TemporalFamily::causal_uniform(2), 1e-5, 0.1, 0.0, 2, 0}),
                  std::invalid_argument);
  CHECK_NOTHROW(apply_rf(g, RFSpec{TemporalFamily::causal_uniform(3), 1e-5, 0.1, 0.0, 2, 0}));
  CHECK_THROWS_AS(apply_rf(g, RFSpec{TemporalFamily::gaussian(), 1e-5, -0.1, 0.0, 0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_rf(g, RFSpec{TemporalFamily::gaussian(), 1e-5, 0.1, 0.0, -1, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(temporal_difference(g, 3, true), std::invalid_argument);
  CHECK_THROWS_AS(spectral_difference(g, 0), std::invalid_argument);
}

TEST_CASE("difference stencils converge at second order") {
  auto spectral_error = [](double dnu, int order) {
    const auto n = static_cast<std::size_t>(48.0 / dnu) + 1;
    RealGrid g = make_grid(1, n, 1e-3, 0.0, dnu);
    const double k = 2 * kPi / 24.0;
    for (std::size_t c = 0; c < n; ++c) g.at(0, c) = std::sin(k * g.nus[c]);
    const RealGrid d = spectral_difference(g, order);
    double worst = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (g.nus[c] < 12.0 || g.nus[c] > 36.0) continue;
      const double expect = order == 1 ? k * std::cos(k * g.nus[c])
                                       : -k * k * std::sin(k * g.nus[c]);
      worst = std::max(worst, std::abs(d.at(0, c) - expect));
    }
    return worst;
  };
  for (int order : {1, 2}) {
    const double ratio = spectral_error(0.5, order) / spectral_error(0.25, order);
    CHECK(ratio > 3.6);
    CHECK(ratio < 4.4);
  }

  auto temporal_error = [](double dt) {
    const auto n = static_cast<std::size_t>(1.0 / dt) + 1;
    RealGrid g = make_grid(n, 1, dt, 60.0, 0.25);
    const double k = 2 * kPi * 2.0;
    for (std::size_t j = 0; j < n; ++j) g.at(j, 0) = std::sin(k * g.times[j]);
    const RealGrid d = temporal_difference(g, 2, false);
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.times[j] < 0.25 || g.times[j] > 0.75) continue;
      worst = std::max(worst, std::abs(d.at(j, 0) + k * k * std::sin(k * g.times[j])));
    }
    return worst;
  };
  const double ratio = temporal_error(0.01) / temporal_error(0.005);
  CHECK(ratio > 3.6);
  CHECK(ratio < 4.4);
}

TEST_CASE("glissando warp") {
  const RealGrid g = random_grid(50, 60, 9);
  CHECK(glissando_warp(g, 0.0, 0.02).values == g.values);

  const RealGrid smooth = ridge_grid(20.0, 70.0, 0.1);
  const double t_ref = reference_time(smooth);
  CHECK(t_ref == doctest::Approx(0.1));
  const RealGrid back =
      glissando_unwarp(glissando_warp(smooth, 20.0, t_ref), 20.0, t_ref);
  double worst = 0.0;
  for (std::size_t j = 0; j < smooth.frames(); ++j) {
    for (std::size_t c = 20; c + 20 < smooth.channels(); ++c) {
      worst = std::max(worst, std::abs(back.at(j, c) - smooth.at(j, c)));
    }
  }
  CHECK(worst < 1e-3 * 60.0);

  for (double v : {-40.0, 10.0, 40.0}) {
    const RealGrid chirp = ridge_grid(v, 70.0, 0.1);
    const double before = variance(ridge_positions(chirp));
    const double after = variance(ridge_positions(glissando_warp(chirp, v, 0.1)));
    CHECK(after * 100.0 <= before);
  }
}

TEST_CASE("glissando adapted derivative follows the ridge") {
  const RealGrid chirp = ridge_grid(30.0, 70.0, 0.1);
  const auto fam = TemporalFamily::gaussian();
  const RealGrid along = apply_rf(chirp, RFSpec{fam, 4e-6, 0.25, 30.0, 1, 0});
  const RealGrid across = apply_rf(chirp, RFSpec{fam, 4e-6, 0.25, 0.0, 1, 0});
  double a = 0.0, b = 0.0;
  for (std::size_t j = 40; j < 160; ++j) {
    for (std::size_t c = 40; c < 120; ++c) {
      a = std::max(a, std::abs(along.at(j, c)));
      b = std::max(b, std::abs(across.at(j, c)));
    }
  }
  CHECK(a < 0.05 * b);
}

TEST_CASE("glissando covariance of the operator") {
  const RealGrid base = ridge_grid(0.0, 70.0, 0.1);
  const double v = 25.0;
  const double t_ref = reference_time(base);
  const RealGrid moved = glissando_unwarp(base, v, t_ref);
  const RFSpec sep{TemporalFamily::gaussian(), 9e-6, 0.5, 0.0, 0, 2};
  RFSpec adapted = sep;
  adapted.v = v;
  const RealGrid lhs = apply_rf(moved, adapted);
  const RealGrid rhs = glissando_unwarp(apply_rf(base, sep), v, t_ref);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < base.frames(); ++j) {
    for (std::size_t c = 40; c + 40 < base.channels(); ++c) {
      worst = std::max(worst, std::abs(lhs.at(j, c) - rhs.at(j, c)));
      peak = std::max(peak, std::abs(rhs.at(j, c)));
    }
  }
  CHECK(worst < 1e-2 * peak);
}

TEST_CASE("kernel image separability and zero sum") {
  const RFSpec spec{TemporalFamily::gaussian(), 1e-4, 1.0, 0.0, 0, 0};
  const RealGrid k = rf_kernel_image(spec, 0.1, 12.0, 1e-3, 0.1);
  CHECK(k.times.front() == doctest::Approx(-0.05));
  CHECK(k.nus.front() == doctest::Approx(-6.0));
  const std::size_t j0 = k.frames() / 2, i0 = k.channels() / 2;
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < k.frames(); ++j) {
    for (std::size_t i = 0; i < k.channels(); ++i) {
      const double outer = k.at(j, i0) * k.at(j0, i) / k.at(j0, i0);
      worst = std::max(worst, std::abs(k.at(j, i) - outer));
      peak = std::max(peak, std::abs(k.at(j, i)));
    }
  }
  CHECK(worst < 1e-10 * peak);
  CHECK(k.at(j0, i0) == doctest::Approx(1.0 / (2 * kPi * std::sqrt(1e-4))).epsilon(1e-9));

  const RFSpec second{TemporalFamily::gaussian(), 1e-4, 1.0, 0.0, 0, 2};
  const RealGrid k2 = rf_kernel_image(second, 0.1, 24.0, 1e-3, 0.05);
  for (std::size_t j = 0; j < k2.frames(); j += 10) {
    double row = 0.0;
    for (std::size_t i = 0; i < k2.channels(); ++i) row += k2.at(j, i) * k2.nu_step;
    CHECK(std::abs(row) < 1e-8);
  }
}

TEST_CASE("kernel image shear") {
  const double dt = 1e-3, dnu = 0.1, v = 100.0;
  RFSpec flat{TemporalFamily::gaussian(), 1e-4, 0.5, 0.0, 1, 1};
  RFSpec sheared = flat;
  sheared.v = v;
  const RealGrid k0 = rf_kernel_image(flat, 0.08, 30.0, dt, dnu);
  const RealGrid kv = rf_kernel_image(sheared, 0.08, 30.0, dt, dnu);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < k0.frames(); ++j) {
    const long shift = std::lround(v * k0.times[j] / dnu);
    for (std::size_t i = 0; i < k0.channels(); ++i) {
      const long src = static_cast<long>(i) - shift;
      if (src < 0 || src >= static_cast<long>(k0.channels())) continue;
      worst = std::max(worst, std::abs(kv.at(j, i) - k0.at(j, static_cast<std::size_t>(src))));
      peak = std::max(peak, std::abs(k0.at(j, i)));
    }
  }
  CHECK(worst < 1e-9 * peak);

  RFSpec fine = sheared;
  fine.v = 37.0;
  fine.alpha = 0;
  fine.beta = 0;
  RFSpec fine0 = fine;
  fine0.v = 0.0;
  const RealGrid warped = glissando_warp(rf_kernel_image(fine, 0.08, 30.0, dt, dnu), 37.0, 0.0);
  const RealGrid ref = rf_kernel_image(fine0, 0.08, 30.0, dt, dnu);
  worst = 0.0;
  peak = 0.0;
  for (std::size_t j = 0; j < ref.frames(); ++j) {
    for (std::size_t i = 60; i + 60 < ref.channels(); ++i) {
      worst = std::max(worst, std::abs(warped.at(j, i) - ref.at(j, i)));
      peak = std::max(peak, std::abs(ref.at(j, i)));
    }
  }
  CHECK(worst < 1e-3 * peak);
}

TEST_CASE("causal kernel image") {
  for (const auto& fam : {TemporalFamily::causal_uniform(4),
                          TemporalFamily::causal_logarithmic(7, std::numbers::sqrt2)}) {
    const RFSpec spec{fam, 1e-4, 1.0, 0.0, 0, 0};
    const RealGrid k = rf_kernel_image(spec, 0.2, 16.0, 1e-4, 0.1);
    CHECK(k.times.front() == 0.0);
    const std::size_t i0 = k.channels() / 2;
    const double g0 = 1.0 / std::sqrt(2 * kPi);
    double mass = 0.0, mean = 0.0;
    for (std::size_t j = 0; j < k.frames(); ++j) {
      CHECK(k.at(j, i0) >= 0.0);
      mass += k.at(j, i0) / g0 * k.frame_step;
      mean += k.at(j, i0) / g0 * k.frame_step * k.times[j];
    }
    CHECK(std::abs(mass - 1.0) < 2e-3);
    CHECK(mean == doctest::Approx(fam.ladder(1e-4, LadderUnits::kContinuous).mean())
                      .epsilon(5e-3));
  }
  CHECK_THROWS_AS(
      rf_kernel_image(RFSpec{TemporalFamily::gaussian(), 1e-4, 0.0, 0.0, 0, 0}, 1, 1, 0.1, 0.1),
      std::invalid_argument);
}

}  // namespace
}  // namespace audiorf
