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

#include "audiorf/cli.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "audiorf/features.h"
#include "audiorf/grid_io.h"
#include "audiorf/receptive_fields.h"
#include "audiorf/selectivity.h"
#include "audiorf/spectrogram.h"
#include "audiorf/wav.h"
#include "json.hpp"

namespace audiorf {
namespace {

// Bad flag values detected after parsing; mapped to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Run configuration in JSON: one object per subcommand, e.g.
// {"features": {"K": 4, "onsets": true, "glissando-bank": [-20, 0, 20]}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    nlohmann::json doc = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        doc[name] = opt->results().size() == 1
                        ? nlohmann::json(opt->results().front())
                        : nlohmann::json(opt->results());
      } else if (default_also && !opt->get_default_str().empty()) {
        doc[name] = opt->get_default_str();
      }
    }
    return doc.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json doc;
    try {
      input >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("invalid JSON config: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    flatten(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const nlohmann::json& node,
                      const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    if (!node.is_object()) {
      throw CLI::ConversionError("JSON config must be an object");
    }
    for (const auto& [key, value] : node.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        flatten(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct SpectrogramOptions {
  std::string wav;
  std::string family = "rec-log";
  int num_levels = 7;
  double ratio = std::numbers::sqrt2;
  double n = 8.0;
  double tau0_ms = 0.0;
  double sigma_max_ms = 0.0;
  int bins_per_octave = 48;
  double nu_min = 0.0;
  double nu_max = 0.0;
  double hop_ms = 1.0;
  bool compensate = false;
  double db_min = -80.0;
  double db_max = 0.0;
};

struct FeatureOptions {
  double tau_a_ms = 5.0;
  double sigma_nu = 0.5;
  double tau_i_ms = 10.0;
  double sigma_nu_i = 1.0;
  double c_min = kDefaultCurveThreshold;
  double max_jump = kDefaultCurveJump;
  bool onsets = false;
  bool offsets = false;
  bool bands = false;
  bool partials = false;
  bool second_moment = false;
  bool refine = false;
  std::vector<double> bank;
};

struct Outputs {
  std::string csv;
  std::string pgm;
  std::string json;
};

TemporalFamily make_family(const std::string& name, int k, double c) {
  if (name == "gauss") return TemporalFamily::gaussian();
  if (name == "rec-uni") return TemporalFamily::causal_uniform(k);
  return TemporalFamily::causal_logarithmic(k, c);
}

void add_spectrogram_options(CLI::App* app, SpectrogramOptions& o) {
  app->add_option("wav", o.wav, "Input WAV file")->required();
  app->add_option("--family", o.family, "Temporal window family")
      ->check(CLI::IsMember({"gauss", "rec-uni", "rec-log"}))
      ->capture_default_str();
  app->add_option("--K", o.num_levels, "Number of recursive stages")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  app->add_option("--c", o.ratio, "Ratio between neighbouring scale levels")
      ->capture_default_str();
  app->add_option("--n", o.n,
                  "Window extent in periods (0 gives a fixed window)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--tau0-ms", o.tau0_ms,
                  "Soft lower bound on the window, as a standard deviation")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--sigma-max-ms", o.sigma_max_ms,
                  "Soft upper bound on the window (0 disables)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--bins-per-octave", o.bins_per_octave, "Channels per octave")
      ->check(CLI::Range(1, 1200))
      ->capture_default_str();
  app->add_option("--nu-min", o.nu_min, "Lowest channel, MIDI (default 80 Hz)");
  app->add_option("--nu-max", o.nu_max,
                  "Highest channel, MIDI (default 16 kHz, capped below "
                  "Nyquist)");
  app->add_option("--hop-ms", o.hop_ms, "Frame step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--compensate-delay", o.compensate,
                "Shift causal channels by their first inflection delay");
  app->add_option("--db-min", o.db_min, "Image range minimum (dB)")
      ->capture_default_str();
  app->add_option("--db-max", o.db_max, "Image range maximum (dB)")
      ->capture_default_str();
}

void add_outputs(CLI::App* app, Outputs& out, bool json) {
  app->add_option("--out-csv", out.csv, "Write the grid as tab-separated text");
  app->add_option("--out-pgm", out.pgm, "Write the grid as a binary PGM image");
  if (json) app->add_option("--out-json", out.json, "Write partial curves");
}

ComplexSpectrogram run_first_layer(const SpectrogramOptions& o,
                                   const AudioBuffer& audio,
                                   const CLI::App* app) {
  if (audio.samples.empty()) throw std::runtime_error(o.wav + ": no samples");
  const double nyquist_nu = hz_to_midi(0.45 * audio.sample_rate);
  const double nu_min = app->count("--nu-min") ? o.nu_min : hz_to_midi(80.0);
  double nu_max = app->count("--nu-max") ? o.nu_max : hz_to_midi(16000.0);
  if (!app->count("--nu-max")) nu_max = std::min(nu_max, nyquist_nu);
  if (nu_max > nyquist_nu) {
    throw UsageError("--nu-max lies above 0.45 times the sample rate");
  }
  if (!(nu_min < nu_max)) throw UsageError("--nu-min must be below --nu-max");

  WindowScaleLaw law;
  law.n = o.n;
  law.tau0 = std::pow(o.tau0_ms * 1e-3, 2);
  law.tau_inf = std::pow(o.sigma_max_ms * 1e-3, 2);
  try {
    law.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.family == "rec-log" && !(o.ratio > 1.0)) {
    throw UsageError("--c must be greater than 1");
  }
  FrequencyGrid grid = build_frequency_grid(nu_min, nu_max, o.bins_per_octave);
  apply_window_law(grid, law);
  const int hop = std::max(
      1, static_cast<int>(std::lround(o.hop_ms * 1e-3 * audio.sample_rate)));
  const TemporalFamily family = make_family(o.family, o.num_levels, o.ratio);
  ComplexSpectrogram spec =
      compute_spectrogram(audio.samples, audio.sample_rate, grid, family, hop);
  if (o.compensate) {
    if (!family.causal()) {
      throw UsageError("--compensate-delay needs a causal family");
    }
    spec = delay_compensate(spec);
  }
  return spec;
}

std::string with_suffix(const std::string& path, const std::string& name,
                        bool single) {
  if (single) return path;
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "." + name;
  }
  return path.substr(0, dot) + "." + name + path.substr(dot);
}

double grid_max(const RealGrid& g) {
  double m = 0.0;
  for (double v : g.values) m = std::max(m, std::abs(v));
  return m > 0.0 ? m : 1.0;
}

int run_spectrogram(const SpectrogramOptions& o, const Outputs& out,
                    bool db, const CLI::App* app) {
  if (out.csv.empty() && out.pgm.empty()) {
    throw UsageError("no output requested");
  }
  const AudioBuffer audio = read_wav(o.wav);
  const ComplexSpectrogram spec = run_first_layer(o, audio, app);
  const RealGrid s_db = to_db(spec);
  if (!out.csv.empty()) {
    if (db) {
      write_grid_csv(s_db, out.csv);
    } else {
      RealGrid mag = spec.data.like<double>();
      for (std::size_t i = 0; i < mag.values.size(); ++i) {
        mag.values[i] = std::abs(spec.data.values[i]);
      }
      write_grid_csv(mag, out.csv);
    }
  }
  if (!out.pgm.empty()) write_grid_pgm(s_db, out.pgm, o.db_min, o.db_max);
  return 0;
}

int run_features(const SpectrogramOptions& o, const FeatureOptions& f,
                 const Outputs& out, const CLI::App* app) {
  const bool glissando = !f.bank.empty();
  const int selected = f.onsets + f.offsets + f.bands + f.partials +
                       f.second_moment + glissando;
  if (selected == 0) throw UsageError("no feature selected");
  if (out.csv.empty() && out.pgm.empty() && out.json.empty()) {
    throw UsageError("no output requested");
  }
  if (f.partials && out.json.empty() && out.csv.empty()) {
    throw UsageError("--partials needs --out-json or --out-csv");
  }
  if (!(f.sigma_nu > 0.0) || !(f.tau_a_ms > 0.0)) {
    throw UsageError("--sigma-nu and --tau-a-ms must be positive");
  }
  const AudioBuffer audio = read_wav(o.wav);
  const ComplexSpectrogram spec = run_first_layer(o, audio, app);
  const RealGrid s_db = to_db(spec);
  FeatureScales scales;
  scales.family = spec.family;
  scales.tau_a = std::pow(f.tau_a_ms * 1e-3, 2);
  scales.s = f.sigma_nu * f.sigma_nu;
  if (scales.family.causal() && scales.family.num_levels < 2 &&
      (f.onsets || f.offsets || f.second_moment)) {
    throw UsageError("temporal derivatives need --K of at least 2");
  }

  std::vector<std::pair<std::string, RealGrid>> maps;
  if (f.onsets) maps.emplace_back("onsets", detect_onsets(s_db, scales));
  if (f.offsets) maps.emplace_back("offsets", detect_offsets(s_db, scales));
  if (f.bands) maps.emplace_back("bands", enhance_bands(s_db, scales));
  if (glissando) {
    maps.emplace_back("glissando",
                      glissando_filterbank(s_db, f.bank, scales, f.refine).v_hat);
  }
  if (f.second_moment) {
    maps.emplace_back(
        "second-moment",
        second_moment_glissando(s_db, scales, std::pow(f.tau_i_ms * 1e-3, 2),
                                f.sigma_nu_i * f.sigma_nu_i)
            .v_hat);
  }
  std::vector<PartialCurve> curves;
  if (f.partials) {
    curves = extract_partial_curves(band_response(s_db, scales), f.c_min,
                                    f.max_jump);
  }

  const bool curves_as_csv = f.partials && out.json.empty();
  const bool single = maps.size() + (curves_as_csv ? 1 : 0) == 1;
  for (const auto& [name, grid] : maps) {
    if (!out.csv.empty()) write_grid_csv(grid, with_suffix(out.csv, name, single));
    if (!out.pgm.empty()) {
      const double hi = grid_max(grid);
      const bool signed_map = name == "glissando" || name == "second-moment";
      write_grid_pgm(grid, with_suffix(out.pgm, name, maps.size() == 1),
                     signed_map ? -hi : 0.0, hi);
    }
  }
  if (f.partials) {
    if (!out.json.empty()) {
      write_file(out.json, curves_to_json(curves));
    } else {
      std::string text = "curve\tframe\ttime\tnu\tstrength\n";
      std::ostringstream os;
      os.precision(17);
      for (std::size_t k = 0; k < curves.size(); ++k) {
        for (const auto& p : curves[k].points) {
          os << k << '\t' << p.frame << '\t' << p.time << '\t' << p.nu << '\t'
             << p.strength << '\n';
        }
      }
      write_file(with_suffix(out.csv, "partials", single), text + os.str());
    }
  }
  return 0;
}

int run_analyze(int table, bool csv, std::ostream& out) {
  const auto emit = [&](const Table& t) {
    out << (csv ? format_table_csv(t) : format_table_text(t));
  };
  if (table == 0 || table == 1) emit(bandwidth_table());
  if (table == 0) out << "\n";
  if (table == 0 || table == 2) emit(mean_delay_table());
  if (table == 0) out << "\n";
  if (table == 0 || table == 3) emit(max_delay_table());
  return 0;
}

struct KernelOptions {
  std::string family = "rec-log";
  int num_levels = 7;
  double ratio = std::numbers::sqrt2;
  double tau_a_ms = 10.0;
  double sigma_nu = 2.0;
  double v = 0.0;
  int alpha = 0;
  int beta = 0;
  double t_span_ms = 100.0;
  double nu_span = 24.0;
  double dt_ms = 0.5;
  double dnu = 0.25;
  std::string impulse;
};

int run_kernels(const KernelOptions& k, const Outputs& out) {
  if (k.impulse.empty() && out.csv.empty() && out.pgm.empty()) {
    throw UsageError("no output requested");
  }
  RFSpec spec;
  spec.family = make_family(k.family, k.num_levels, k.ratio);
  spec.tau_a = std::pow(k.tau_a_ms * 1e-3, 2);
  spec.s = k.sigma_nu * k.sigma_nu;
  spec.v = k.v;
  spec.alpha = k.alpha;
  spec.beta = k.beta;
  spec.normalized = false;
  RealGrid image;
  try {
    image = rf_kernel_image(spec, k.t_span_ms * 1e-3, k.nu_span, k.dt_ms * 1e-3,
                            k.dnu);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!k.impulse.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "t\th\n";
    const std::size_t centre = image.channels() / 2;
    const double g0 = gaussian_kernel_sample({spec.s, 0.0}, image.nus[centre]);
    for (std::size_t j = 0; j < image.frames(); ++j) {
      os << image.times[j] << '\t' << image.at(j, centre) / g0 << '\n';
    }
    write_file(k.impulse, os.str());
  }
  if (!out.csv.empty()) write_grid_csv(image, out.csv);
  if (!out.pgm.empty()) {
    const double hi = grid_max(image);
    write_grid_pgm(image, out.pgm, -hi, hi);
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Auditory receptive fields: multi-scale spectrograms, "
               "spectro-temporal features and window analysis",
               "audiorf"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON run configuration; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  app.fallthrough();

  SpectrogramOptions spec_opts;
  Outputs spec_out;
  bool db = false;
  CLI::App* spectrogram =
      app.add_subcommand("spectrogram", "Compute a multi-scale spectrogram");
  add_spectrogram_options(spectrogram, spec_opts);
  spectrogram->add_flag("--db", db, "Write dB values instead of magnitudes");
  add_outputs(spectrogram, spec_out, false);

  SpectrogramOptions feat_spec;
  FeatureOptions feat;
  Outputs feat_out;
  CLI::App* features =
      app.add_subcommand("features", "Compute second-layer auditory features");
  add_spectrogram_options(features, feat_spec);
  features->add_option("--tau-a-ms", feat.tau_a_ms,
                       "Temporal scale of the features, as a standard deviation")
      ->capture_default_str();
  features->add_option("--sigma-nu", feat.sigma_nu,
                       "Spectral scale of the features (semitones)")
      ->capture_default_str();
  features->add_option("--tau-i-ms", feat.tau_i_ms,
                       "Temporal integration scale for --second-moment")
      ->capture_default_str();
  features->add_option("--sigma-nu-i", feat.sigma_nu_i,
                       "Spectral integration scale for --second-moment")
      ->capture_default_str();
  features->add_option("--c-min", feat.c_min, "Partial-curve threshold")
      ->capture_default_str();
  features->add_option("--max-jump", feat.max_jump,
                       "Largest nu step between linked curve points")
      ->capture_default_str();
  features->add_flag("--onsets", feat.onsets, "Rectified onset map");
  features->add_flag("--offsets", feat.offsets, "Rectified offset map");
  features->add_flag("--bands", feat.bands, "Rectified spectral band map");
  features->add_flag("--partials", feat.partials, "Partial-tone curves");
  features->add_option("--glissando-bank", feat.bank,
                       "Glissando filter bank, semitones per second")
      ->delimiter(',');
  features->add_flag("--refine", feat.refine,
                     "Interpolate the filter-bank estimate");
  features->add_flag("--second-moment", feat.second_moment,
                     "Second-moment glissando estimate");
  add_outputs(features, feat_out, true);

  int table = 0;
  bool csv = false;
  CLI::App* analyze =
      app.add_subcommand("analyze", "Print bandwidth and delay tables");
  analyze->add_option("--table", table, "Table to print (default all)")
      ->check(CLI::Range(1, 3));
  analyze->add_flag("--csv", csv, "Comma-separated output");

  KernelOptions kern;
  Outputs kern_out;
  CLI::App* kernels =
      app.add_subcommand("kernels", "Render receptive-field kernels");
  kernels->add_option("--family", kern.family, "Temporal kernel family")
      ->check(CLI::IsMember({"gauss", "rec-uni", "rec-log"}))
      ->capture_default_str();
  kernels->add_option("--K", kern.num_levels, "Number of recursive stages")
      ->check(CLI::Range(1, 64))
      ->capture_default_str();
  kernels->add_option("--c", kern.ratio, "Scale ratio")->capture_default_str();
  kernels->add_option("--tau-a-ms", kern.tau_a_ms, "Temporal scale (std. dev.)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernels->add_option("--sigma-nu", kern.sigma_nu, "Spectral scale (semitones)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernels->add_option("--v", kern.v, "Glissando, semitones per second")
      ->capture_default_str();
  kernels->add_option("--alpha", kern.alpha, "Temporal derivative order")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  kernels->add_option("--beta", kern.beta, "Spectral derivative order")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  kernels->add_option("--t-span-ms", kern.t_span_ms, "Image duration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernels->add_option("--nu-span", kern.nu_span, "Image height (semitones)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernels->add_option("--dt-ms", kern.dt_ms, "Image time step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernels->add_option("--dnu", kern.dnu, "Image nu step (semitones)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  kernels->add_option("--out-impulse", kern.impulse,
                      "Write the temporal kernel along nu = 0");
  add_outputs(kernels, kern_out, false);

  std::vector<const char*> argv = {"audiorf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    if (*spectrogram) return run_spectrogram(spec_opts, spec_out, db, spectrogram);
    if (*features) return run_features(feat_spec, feat, feat_out, features);
    if (*analyze) return run_analyze(table, csv, out);
    if (*kernels) return run_kernels(kern, kern_out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace audiorf
