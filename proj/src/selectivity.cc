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

#include "audiorf/selectivity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace audiorf {
namespace {

constexpr double kPi = std::numbers::pi;

std::string ratio_label(double c) {
  if (std::abs(c - std::sqrt(2.0)) < 1e-9) return "2^(1/2)";
  if (std::abs(c - std::pow(2.0, 0.75)) < 1e-9) return "2^(3/4)";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", c);
  return buf;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const double kLogRatios[] = {std::numbers::sqrt2, 1.681792830507429, 2.0};

}  // namespace

WindowFamily WindowFamily::gauss(double n) {
  WindowFamily f;
  f.kind = Kind::kGauss;
  f.n = n;
  return f;
}

WindowFamily WindowFamily::rec_uniform(int num_levels, double n) {
  WindowFamily f;
  f.kind = Kind::kRecUniform;
  f.num_levels = num_levels;
  f.n = n;
  return f;
}

WindowFamily WindowFamily::rec_log(int num_levels, double ratio, double n) {
  WindowFamily f;
  f.kind = Kind::kRecLog;
  f.num_levels = num_levels;
  f.ratio = ratio;
  f.n = n;
  return f;
}

void WindowFamily::validate() const {
  if (!(n > 0.0)) throw std::invalid_argument("window needs n > 0");
  if (kind != Kind::kGauss && num_levels < 1) {
    throw std::invalid_argument("window needs K >= 1");
  }
  if (kind == Kind::kRecLog && !(ratio > 1.0)) {
    throw std::invalid_argument("logarithmic window needs c > 1");
  }
}

std::string WindowFamily::label() const {
  switch (kind) {
    case Kind::kGauss:
      return "gauss";
    case Kind::kRecUniform:
      return "rec-uni K=" + std::to_string(num_levels);
    case Kind::kRecLog:
      return "rec-log K=" + std::to_string(num_levels) +
             " c=" + ratio_label(ratio);
  }
  return "?";
}

double selectivity_db_at(const WindowFamily& family, double c_offset) {
  family.validate();
  const double w = 2.0 * kPi * c_offset;
  switch (family.kind) {
    case WindowFamily::Kind::kGauss:
      return -20.0 * 2.0 * kPi * kPi * c_offset * c_offset / std::log(10.0);
    case WindowFamily::Kind::kRecUniform: {
      const double k = family.num_levels;
      return -10.0 * k * std::log10(1.0 + w * w / k);
    }
    case WindowFamily::Kind::kRecLog: {
      const ScaleLadder ladder = build_ladder(LadderDistribution::kLogarithmic,
                                              1.0, family.num_levels,
                                              family.ratio);
      double db = 0.0;
      for (double mu : ladder.mus) db -= 10.0 * std::log10(1.0 + w * w * mu * mu);
      return db;
    }
  }
  return 0.0;
}

double selectivity_db(const WindowFamily& family, double omega_ratio) {
  if (!(omega_ratio > 0.0)) {
    throw std::invalid_argument("frequency ratio must be positive");
  }
  return selectivity_db_at(family, family.n * (1.0 - 1.0 / omega_ratio));
}

double bandwidth_constant(const WindowFamily& family, double target_db) {
  family.validate();
  if (!(target_db < 0.0)) {
    throw std::invalid_argument("target attenuation must be negative");
  }
  switch (family.kind) {
    case WindowFamily::Kind::kGauss:
      return std::sqrt(std::log(10.0)) / (2.0 * kPi) *
             std::sqrt(-target_db / 10.0);
    case WindowFamily::Kind::kRecUniform: {
      const double k = family.num_levels;
      return std::sqrt(k) / (2.0 * kPi) *
             std::sqrt(std::pow(10.0, -target_db / (10.0 * k)) - 1.0);
    }
    case WindowFamily::Kind::kRecLog:
      break;
  }
  double lo = 1e-6, hi = 10.0;
  if (selectivity_db_at(family, hi) > target_db) {
    throw std::invalid_argument("target attenuation out of range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (selectivity_db_at(family, mid) > target_db) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

RelativeBandwidth relative_bandwidth(double c_value, double n) {
  if (!(n > 0.0) || c_value < 0.0 || c_value >= n) {
    throw std::invalid_argument("relative bandwidth needs 0 <= C < n");
  }
  const double x = c_value / n;
  return {2.0 * x / (1.0 - x * x), 12.0 * std::log2((1.0 + x) / (1.0 - x))};
}

DelayMeasures delay_measures(const ScaleLadder& ladder) {
  if (ladder.units != LadderUnits::kContinuous || ladder.mus.empty()) {
    throw std::invalid_argument("delay measures need a continuous ladder");
  }
  DelayMeasures d;
  d.mean = ladder.mean();
  const int k = ladder.num_levels;
  if (k == 1) return d;  // Decreasing from the origin: no maximum or bends.

  if (ladder.distribution == LadderDistribution::kUniform) {
    const double mu = ladder.mus[0];
    const double r = std::sqrt(k - 1.0);
    d.t_max = (k - 1.0) * mu;
    d.t_infl1 = (k - 1.0 - r) * mu;
    d.t_infl2 = (k - 1.0 + r) * mu;
    return d;
  }

  const double dt =
      std::min(std::sqrt(ladder.tau_max) / 2000.0, ladder.min_mu() / 20.0);
  const SampledKernel h =
      cascade_kernel_numeric(ladder, dt, cascade_min_horizon(ladder));
  const auto& v = h.values;
  const auto peak = static_cast<std::size_t>(
      std::max_element(v.begin(), v.end()) - v.begin());
  double offset = 0.0;
  if (peak > 0 && peak + 1 < v.size()) {
    const double den = v[peak - 1] - 2.0 * v[peak] + v[peak + 1];
    if (den != 0.0) offset = 0.5 * (v[peak - 1] - v[peak + 1]) / den;
  }
  d.t_max = (static_cast<double>(peak) + offset) * dt;

  std::vector<double> d2(v.size(), 0.0);
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    d2[i] = v[i + 1] - 2.0 * v[i] + v[i - 1];
  }
  auto crossing = [&](std::size_t i) {
    return (static_cast<double>(i) + d2[i] / (d2[i] - d2[i + 1])) * dt;
  };
  std::size_t i = 1;
  if (d2[1] < 0.0) {
    d.t_infl1 = 0.0;
  } else {
    while (i + 2 < v.size() && !(d2[i] >= 0.0 && d2[i + 1] < 0.0)) ++i;
    d.t_infl1 = crossing(i);
    ++i;
  }
  while (i + 2 < v.size() && !(d2[i] < 0.0 && d2[i + 1] >= 0.0)) ++i;
  d.t_infl2 = crossing(i);
  return d;
}

double log_mean_delay(int num_levels, double ratio) {
  const double c = ratio;
  const double r = std::sqrt(c * c - 1.0);
  return std::pow(c, -num_levels) *
         (c * c - (r + 1.0) * c + r * std::pow(c, num_levels)) / (c - 1.0);
}

double log_mean_delay_limit(double ratio) {
  return std::sqrt(ratio * ratio - 1.0) / (ratio - 1.0);
}

Table bandwidth_table() {
  Table t;
  t.title = "Bandwidth constant C of the window families";
  t.corner = "family";
  const double levels[] = {-3.0, -10.0, -20.0, -30.0};
  char buf[32];
  for (double db : levels) {
    std::snprintf(buf, sizeof(buf), "%g dB", db);
    t.columns.push_back(buf);
  }
  std::vector<WindowFamily> families = {WindowFamily::gauss()};
  for (int k : {4, 7}) {
    families.push_back(WindowFamily::rec_uniform(k));
    for (double c : kLogRatios) families.push_back(WindowFamily::rec_log(k, c));
  }
  for (const auto& f : families) {
    t.rows.push_back(f.label());
    std::vector<double> row;
    for (double db : levels) row.push_back(bandwidth_constant(f, db));
    t.values.push_back(row);
  }
  return t;
}

Table mean_delay_table() {
  Table t;
  t.title = "Temporal mean of the causal cascades (units of sqrt(tau))";
  t.corner = "K";
  t.columns = {"m_uni"};
  for (double c : kLogRatios) t.columns.push_back("m_log c=" + ratio_label(c));
  for (int k = 2; k <= 8; ++k) {
    t.rows.push_back("K=" + std::to_string(k));
    std::vector<double> row = {std::sqrt(static_cast<double>(k))};
    for (double c : kLogRatios) row.push_back(log_mean_delay(k, c));
    t.values.push_back(row);
  }
  return t;
}

Table max_delay_table() {
  Table t;
  t.title = "Position of the maximum of the causal cascades (units of sqrt(tau))";
  t.corner = "K";
  t.columns = {"t_max_uni"};
  for (double c : kLogRatios) {
    t.columns.push_back("t_max_log c=" + ratio_label(c));
  }
  for (int k = 2; k <= 8; ++k) {
    t.rows.push_back("K=" + std::to_string(k));
    std::vector<double> row = {(k - 1.0) / std::sqrt(static_cast<double>(k))};
    for (double c : kLogRatios) {
      row.push_back(delay_measures(build_ladder(LadderDistribution::kLogarithmic,
                                                1.0, k, c))
                        .t_max);
    }
    t.values.push_back(row);
  }
  return t;
}

std::string format_table_text(const Table& table) {
  std::size_t width = table.corner.size();
  for (const auto& r : table.rows) width = std::max(width, r.size());
  std::string out = table.title + "\n";
  out += "columns:";
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    out += (j == 0 ? " " : " | ") + table.columns[j];
  }
  out += "\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::string line = table.rows[i];
    line.resize(width, ' ');
    for (double v : table.values[i]) line += "  " + fixed3(v);
    out += line + "\n";
  }
  return out;
}

std::string format_table_csv(const Table& table) {
  std::string out = table.corner;
  for (const auto& c : table.columns) out += "," + c;
  out += "\n";
  char buf[64];
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out += table.rows[i];
    for (double v : table.values[i]) {
      std::snprintf(buf, sizeof(buf), ",%.6f", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace audiorf
