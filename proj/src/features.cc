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

#include "audiorf/features.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "audiorf/receptive_fields.h"

namespace audiorf {
namespace {

RFSpec make_spec(const FeatureScales& scales, int alpha, int beta, double v,
                 bool normalized) {
  RFSpec spec;
  spec.family = scales.family;
  spec.tau_a = scales.tau_a;
  spec.s = scales.s;
  spec.v = v;
  spec.alpha = alpha;
  spec.beta = beta;
  spec.normalized = normalized;
  return spec;
}

void zero_warmup(RealGrid& g) {
  for (std::size_t c = 0; c < g.channels(); ++c) {
    const auto w = std::min<std::size_t>(g.warmup[c], g.frames());
    for (std::size_t j = 0; j < w; ++j) g.at(j, c) = 0.0;
  }
}

RealGrid rectified_onset(const RealGrid& s_db, const FeatureScales& scales,
                         double sign) {
  RealGrid d = apply_rf(s_db, make_spec(scales, 1, 0, 0.0, true));
  for (double& v : d.values) v = std::max(0.0, sign * v);
  zero_warmup(d);
  return d;
}

}  // namespace

RealGrid detect_onsets(const RealGrid& s_db, const FeatureScales& scales) {
  return rectified_onset(s_db, scales, 1.0);
}

RealGrid detect_offsets(const RealGrid& s_db, const FeatureScales& scales) {
  return rectified_onset(s_db, scales, -1.0);
}

RealGrid band_response(const RealGrid& s_db, const FeatureScales& scales,
                       double v) {
  if (!(scales.s > 0.0)) {
    throw std::invalid_argument("band enhancement needs s > 0");
  }
  RealGrid d = apply_rf(s_db, make_spec(scales, 0, 2, v, true));
  for (double& x : d.values) x = -x;
  return d;
}

RealGrid enhance_bands(const RealGrid& s_db, const FeatureScales& scales) {
  RealGrid d = band_response(s_db, scales);
  for (double& x : d.values) x = std::max(0.0, x);
  zero_warmup(d);
  return d;
}

std::vector<PartialCurve> extract_partial_curves(const RealGrid& band,
                                                 double c_min,
                                                 double max_jump) {
  std::vector<PartialCurve> done;
  if (band.empty() || band.channels() < 3) return done;
  const RealGrid d1 = spectral_difference(band, 1);
  const RealGrid d2 = spectral_difference(band, 2);
  const std::size_t nc = band.channels();

  std::vector<PartialCurve> active;
  for (std::size_t j = 0; j < band.frames(); ++j) {
    std::vector<CurvePoint> points;
    for (std::size_t c = 0; c + 1 < nc; ++c) {
      if (j < static_cast<std::size_t>(band.warmup[c]) ||
          j < static_cast<std::size_t>(band.warmup[c + 1])) {
        continue;
      }
      const double a = d1.at(j, c), b = d1.at(j, c + 1);
      if (!(a > 0.0 && b <= 0.0)) continue;
      const double u = a / (a - b);
      const double curvature = d2.at(j, c) + u * (d2.at(j, c + 1) - d2.at(j, c));
      const double strength =
          band.at(j, c) + u * (band.at(j, c + 1) - band.at(j, c));
      if (!(curvature < 0.0) || !(strength >= c_min)) continue;
      points.push_back({j, band.times[j],
                        band.nus[c] + u * (band.nus[c + 1] - band.nus[c]),
                        strength});
    }
    std::sort(points.begin(), points.end(),
              [](const CurvePoint& x, const CurvePoint& y) {
                return x.strength > y.strength;
              });

    std::vector<PartialCurve> next;
    std::vector<bool> taken(active.size(), false);
    for (const auto& p : points) {
      std::size_t best = active.size();
      double best_dist = max_jump;
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (taken[k]) continue;
        const double dist = std::abs(active[k].points.back().nu - p.nu);
        if (dist <= best_dist) {
          best_dist = dist;
          best = k;
        }
      }
      if (best < active.size()) {
        taken[best] = true;
        active[best].points.push_back(p);
        next.push_back(std::move(active[best]));
      } else {
        next.push_back(PartialCurve{{p}});
      }
    }
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (!taken[k]) done.push_back(std::move(active[k]));
    }
    active = std::move(next);
  }
  for (auto& curve : active) done.push_back(std::move(curve));
  std::stable_sort(done.begin(), done.end(),
                   [](const PartialCurve& x, const PartialCurve& y) {
                     return x.points.front().frame < y.points.front().frame;
                   });
  return done;
}

GlissandoEstimate glissando_filterbank(const RealGrid& s_db,
                                       std::span<const double> bank,
                                       const FeatureScales& scales,
                                       bool refine) {
  if (bank.empty()) throw std::invalid_argument("empty glissando bank");
  // Visit the bank by increasing |v| so that ties keep the slowest element.
  std::vector<std::size_t> order(bank.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(bank[a]) < std::abs(bank[b]);
  });
  std::vector<RealGrid> responses(bank.size());
  for (std::size_t b = 0; b < bank.size(); ++b) {
    responses[b] = band_response(s_db, scales, bank[b]);
  }

  GlissandoEstimate est;
  est.v_hat = s_db.like<double>();
  est.response = s_db.like<double>();
  std::vector<std::size_t> by_value(bank.size());
  std::iota(by_value.begin(), by_value.end(), 0);
  std::stable_sort(by_value.begin(), by_value.end(),
                   [&](std::size_t a, std::size_t b) { return bank[a] < bank[b]; });
  std::vector<std::size_t> rank(bank.size());
  for (std::size_t r = 0; r < by_value.size(); ++r) rank[by_value[r]] = r;

  for (std::size_t i = 0; i < s_db.values.size(); ++i) {
    std::size_t best = order[0];
    double best_r = responses[best].values[i];
    for (std::size_t k = 1; k < order.size(); ++k) {
      const double r = responses[order[k]].values[i];
      const double tol = 1e-9 * std::max(std::abs(r), std::abs(best_r));
      if (r > best_r + tol) {
        best = order[k];
        best_r = r;
      }
    }
    double v = bank[best];
    const std::size_t pos = rank[best];
    if (refine && pos > 0 && pos + 1 < by_value.size()) {
      const double x0 = bank[by_value[pos - 1]], x1 = v,
                   x2 = bank[by_value[pos + 1]];
      const double y0 = responses[by_value[pos - 1]].values[i], y1 = best_r,
                   y2 = responses[by_value[pos + 1]].values[i];
      const double den = (x0 - x1) * (x0 - x2) * (x1 - x2);
      const double a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / den;
      const double b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) +
                        x0 * x0 * (y1 - y2)) /
                       den;
      if (a < 0.0) v = std::clamp(-b / (2.0 * a), x0, x2);
    }
    est.v_hat.values[i] = v;
    est.response.values[i] = best_r;
  }
  for (const auto& r : responses) {
    for (std::size_t c = 0; c < r.warmup.size(); ++c) {
      est.response.warmup[c] = std::max(est.response.warmup[c], r.warmup[c]);
    }
  }
  est.v_hat.warmup = est.response.warmup;
  zero_warmup(est.response);
  zero_warmup(est.v_hat);
  return est;
}

SecondMomentField second_moment_glissando(const RealGrid& s_db,
                                          const FeatureScales& derivative,
                                          double tau_i, double s_i) {
  if (tau_i < derivative.tau_a || s_i < derivative.s) {
    throw std::invalid_argument(
        "integration scales must not be below the derivative scales");
  }
  const RealGrid lt = apply_rf(s_db, make_spec(derivative, 1, 0, 0.0, false));
  const RealGrid ln = apply_rf(s_db, make_spec(derivative, 0, 1, 0.0, false));
  SecondMomentField f;
  f.ytt = s_db.like<double>();
  f.ytn = s_db.like<double>();
  f.ynn = s_db.like<double>();
  for (std::size_t i = 0; i < s_db.values.size(); ++i) {
    f.ytt.values[i] = lt.values[i] * lt.values[i];
    f.ytn.values[i] = lt.values[i] * ln.values[i];
    f.ynn.values[i] = ln.values[i] * ln.values[i];
  }
  auto integrate = [&](const RealGrid& g) {
    return spectral_smooth(temporal_smooth(g, derivative.family, tau_i), s_i);
  };
  f.ytt = integrate(f.ytt);
  f.ytn = integrate(f.ytn);
  f.ynn = integrate(f.ynn);
  zero_warmup(f.ytt);
  zero_warmup(f.ytn);
  zero_warmup(f.ynn);

  std::vector<double> sorted;
  for (std::size_t j = 0; j < f.ynn.frames(); ++j) {
    for (std::size_t c = 0; c < f.ynn.channels(); ++c) {
      if (j >= static_cast<std::size_t>(f.ynn.warmup[c])) sorted.push_back(f.ynn.at(j, c));
    }
  }
  double median = 0.0;
  if (!sorted.empty()) {
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    median = *mid;
  }
  f.floor = kSecondMomentFloor * median;
  f.v_hat = s_db.like<double>();
  f.v_hat.warmup = f.ynn.warmup;
  f.defined.assign(s_db.values.size(), 0);
  for (std::size_t i = 0; i < s_db.values.size(); ++i) {
    const std::size_t j = i / s_db.channels(), c = i % s_db.channels();
    if (j < static_cast<std::size_t>(f.ynn.warmup[c])) continue;
    if (f.ynn.values[i] > f.floor && f.ynn.values[i] > 0.0) {
      f.defined[i] = 1;
      f.v_hat.values[i] = -f.ytn.values[i] / f.ynn.values[i];
    }
  }
  return f;
}

}  // namespace audiorf
