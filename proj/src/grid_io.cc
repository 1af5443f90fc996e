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

#include "audiorf/grid_io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace audiorf {
namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_number(const std::string& field, const std::string& path,
                    std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::runtime_error(path + ":" + std::to_string(line) +
                             ": bad number '" + field + "'");
  }
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double axis_step(const std::vector<double>& axis) {
  return axis.size() > 1 ? (axis.back() - axis.front()) / (axis.size() - 1.0)
                         : 0.0;
}

}  // namespace

std::string grid_to_csv(const RealGrid& grid) {
  std::string out = "nu";
  for (double t : grid.times) {
    out += '\t';
    append_number(out, t);
  }
  out += '\n';
  for (std::size_t c = 0; c < grid.channels(); ++c) {
    append_number(out, grid.nus[c]);
    for (std::size_t j = 0; j < grid.frames(); ++j) {
      out += '\t';
      append_number(out, grid.at(j, c));
    }
    out += '\n';
  }
  return out;
}

void write_grid_csv(const RealGrid& grid, const std::string& path) {
  if (grid.empty()) throw std::invalid_argument(path + ": empty grid");
  write_file(path, grid_to_csv(grid));
}

RealGrid read_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  auto header = split_tabs(line);
  if (header.empty() || header[0] != "nu") {
    throw std::runtime_error(path + ": missing 'nu' header");
  }
  std::vector<double> times;
  for (std::size_t i = 1; i < header.size(); ++i) {
    times.push_back(parse_number(header[i], path, 1));
  }
  std::vector<double> nus;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != times.size() + 1) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": wrong number of fields");
    }
    nus.push_back(parse_number(fields[0], path, line_no));
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      row.push_back(parse_number(fields[i], path, line_no));
    }
    rows.push_back(std::move(row));
  }
  RealGrid grid(times, nus, axis_step(times), axis_step(nus));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    for (std::size_t j = 0; j < times.size(); ++j) grid.at(j, c) = rows[c][j];
  }
  return grid;
}

std::uint8_t pgm_level(double v, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("PGM range needs hi > lo");
  const double x = std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  return static_cast<std::uint8_t>(std::floor(255.0 * x + 0.5));
}

std::string grid_to_pgm(const RealGrid& grid, double lo, double hi) {
  std::string out = "P5\n" + std::to_string(grid.frames()) + " " +
                    std::to_string(grid.channels()) + "\n255\n";
  for (std::size_t row = 0; row < grid.channels(); ++row) {
    const std::size_t c = grid.channels() - 1 - row;
    for (std::size_t j = 0; j < grid.frames(); ++j) {
      out.push_back(static_cast<char>(pgm_level(grid.at(j, c), lo, hi)));
    }
  }
  return out;
}

void write_grid_pgm(const RealGrid& grid, const std::string& path, double lo,
                    double hi) {
  if (grid.empty()) throw std::invalid_argument(path + ": empty grid");
  write_file(path, grid_to_pgm(grid, lo, hi));
}

std::string curves_to_json(const std::vector<PartialCurve>& curves) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& curve : curves) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : curve.points) {
      points.push_back({{"frame", p.frame},
                        {"time", p.time},
                        {"nu", p.nu},
                        {"strength", p.strength}});
    }
    doc.push_back({{"points", points}});
  }
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace audiorf
