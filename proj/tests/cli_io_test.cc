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

#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "audiorf/cli.h"
#include "audiorf/grid_io.h"
#include "audiorf/parallel.h"
#include "audiorf/wav.h"
#include "json.hpp"
#include "test_util.h"

namespace audiorf {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("audiorf_cli_io_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string scratch(const std::string& name) { return (scratch_dir() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put16(std::string& s, unsigned v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>((v >> 8) & 0xFF));
}
void put32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

// Hand-built RIFF/WAVE image. declared_data overrides the data chunk size.
std::string wav_bytes(unsigned tag, unsigned channels, unsigned rate, unsigned bits,
                      const std::string& data, bool extensible = false,
                      long declared_data = -1) {
  std::string fmt;
  put16(fmt, extensible ? 0xFFFE : tag);
  put16(fmt, channels);
  put32(fmt, rate);
  put32(fmt, rate * channels * bits / 8);
  put16(fmt, channels * bits / 8);
  put16(fmt, bits);
  if (extensible) {
    put16(fmt, 22);
    put16(fmt, bits);
    put32(fmt, 0);
    put16(fmt, tag);
    fmt += std::string("\x00\x00\x00\x00\x10\x00\x80\x00\x00\xAA\x00\x38\x9B\x71", 14);
  }
  std::string out = "RIFF";
  const std::uint32_t data_size =
      declared_data >= 0 ? static_cast<std::uint32_t>(declared_data) : data.size();
  put32(out, static_cast<std::uint32_t>(4 + 8 + fmt.size() + 8 + data_size));
  out += "WAVE";
  out += "fmt ";
  put32(out, static_cast<std::uint32_t>(fmt.size()));
  out += fmt;
  out += "data";
  put32(out, data_size);
  out += data;
  return out;
}

std::string write_bytes(const std::string& name, const std::string& bytes) {
  const std::string path = scratch(name);
  std::ofstream(path, std::ios::binary) << bytes;
  return path;
}

std::string error_of(const std::string& path) {
  try {
    read_wav(path);
  } catch (const std::runtime_error& e) {
    return e.what();
  }
  return "";
}

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(AUDIORF_CLI_PATH) + " " + args + " >" +
                          scratch("bin.out") + " 2>" + scratch("bin.err");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tone_wav() {
  const std::string path = scratch("tone.wav");
  write_wav(path, testutil::sine(440.0, 8000.0, 0.25, 0.5), 1, 8000, WavEncoding::kPcm16);
  return path;
}

TEST_CASE("16-bit scaling") {
  std::string data;
  put16(data, 32767);
  put16(data, 0x8000);
  put16(data, 0);
  const auto a = read_wav(write_bytes("s16.wav", wav_bytes(1, 1, 44100, 16, data)));
  CHECK(a.sample_rate == 44100.0);
  REQUIRE(a.samples.size() == 3);
  CHECK(a.samples[0] == 32767.0 / 32768.0);
  CHECK(a.samples[1] == -1.0);
  CHECK(a.samples[2] == 0.0);
}

TEST_CASE("encodings round trip") {
  const std::vector<double> x = {0.0, 0.25, -0.5, 0.999, -0.999, 0.123456};
  for (auto [enc, tol] : {std::pair{WavEncoding::kPcm16, 1.0 / 32768},
                          std::pair{WavEncoding::kPcm24, 1.0 / 8388608},
                          std::pair{WavEncoding::kPcm32, 1.0 / 2147483648.0},
                          std::pair{WavEncoding::kFloat32, 1e-7}}) {
    const std::string path = scratch("rt.wav");
    write_wav(path, x, 1, 22050, enc);
    const auto a = read_wav(path);
    CHECK(a.sample_rate == 22050.0);
    REQUIRE(a.samples.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(a.samples[i] - x[i]) <= tol);
  }
}

TEST_CASE("stereo is mixed by the mean") {
  const std::string path = scratch("stereo.wav");
  write_wav(path, std::vector<double>{0.5, -0.5, 0.25, 0.75}, 2, 8000, WavEncoding::kFloat32);
  const auto a = read_wav(path);
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == 0.0);
  CHECK(a.samples[1] == 0.5);
}

TEST_CASE("extensible 24-bit PCM") {
  std::string data = {'\xFF', '\xFF', '\x7F', '\x00', '\x00', '\x80'};
  const auto a = read_wav(write_bytes("ext.wav", wav_bytes(1, 1, 48000, 24, data, true)));
  REQUIRE(a.samples.size() == 2);
  CHECK(a.samples[0] == 8388607.0 / 8388608.0);
  CHECK(a.samples[1] == -1.0);
}

TEST_CASE("unsupported and damaged files") {
  const std::string eight = write_bytes("u8.wav", wav_bytes(1, 1, 8000, 8, "\x80\x80"));
  CHECK(error_of(eight).find("unsupported bit depth 8") != std::string::npos);

  const std::string mp3 = write_bytes("mp3.wav", wav_bytes(0x55, 1, 8000, 16, "\0\0"));
  CHECK(error_of(mp3).find("unsupported WAV format tag 0x0055") != std::string::npos);

  const std::string body(10, '\0');
  const std::string bytes = wav_bytes(1, 1, 8000, 16, body, false, 100);
  const std::string cut = write_bytes("cut.wav", bytes);
  CHECK(error_of(cut).find("truncated WAV file at byte offset " +
                           std::to_string(bytes.size())) != std::string::npos);

  CHECK(error_of(write_bytes("junk.wav", "RIFX")).find("byte offset 4") != std::string::npos);
  CHECK(error_of(scratch("missing.wav")).find("cannot open") != std::string::npos);
}

TEST_CASE("CSV round trip") {
  RealGrid g = testutil::make_grid(2, 2, 0.001, 69.0, 0.25);
  g.at(0, 0) = -12.5;
  g.at(1, 0) = 1.0 / 3.0;
  g.at(0, 1) = 1e-300;
  g.at(1, 1) = -0.0625;
  const std::string text = grid_to_csv(g);
  CHECK(text.rfind("nu\t0\t0.001\n69\t-12.5\t", 0) == 0);
  const std::string path = scratch("grid.csv");
  write_grid_csv(g, path);
  const RealGrid back = read_grid_csv(path);
  CHECK(back.times == g.times);
  CHECK(back.nus == g.nus);
  CHECK(testutil::max_abs_diff(back.values, g.values) < 1e-6);
  CHECK(back.values == g.values);

  write_bytes("bad.csv", "nu\t0\n69\tx\n");
  CHECK_THROWS_AS(read_grid_csv(scratch("bad.csv")), std::runtime_error);
  CHECK_THROWS_AS(write_grid_csv(RealGrid{}, path), std::invalid_argument);
}

TEST_CASE("PGM pixels") {
  CHECK(pgm_level(-80.0, -80.0, 0.0) == 0);
  CHECK(pgm_level(0.0, -80.0, 0.0) == 255);
  CHECK(pgm_level(-40.0, -80.0, 0.0) == 128);
  CHECK(pgm_level(-200.0, -80.0, 0.0) == 0);
  CHECK(pgm_level(12.0, -80.0, 0.0) == 255);
  CHECK_THROWS_AS(pgm_level(0.0, 1.0, 1.0), std::invalid_argument);

  RealGrid g = testutil::make_grid(3, 2, 0.001, 60.0, 1.0);
  g.at(0, 1) = 0.0;
  g.at(1, 1) = -40.0;
  g.at(2, 1) = -80.0;
  const std::string pgm = grid_to_pgm(g, -80.0, 0.0);
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(pgm.size() == header.size() + 6);
  CHECK(pgm.substr(0, header.size()) == header);
  const auto px = [&](std::size_t i) {
    return static_cast<unsigned char>(pgm[header.size() + i]);
  };
  CHECK(px(0) == 255);
  CHECK(px(1) == 128);
  CHECK(px(2) == 0);
  CHECK(px(3) == 255);
}

TEST_CASE("curves as JSON") {
  PartialCurve c;
  c.points.push_back({3, 0.003, 69.01, 4.5});
  const auto doc = nlohmann::json::parse(curves_to_json({c}));
  CHECK(doc.size() == 1);
  CHECK(doc[0]["points"][0]["frame"] == 3);
  CHECK(doc[0]["points"][0]["nu"] == 69.01);
}

TEST_CASE("analyze prints the mean delay table") {
  const Run r = run_cli({"analyze", "--table", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("K=4  2.000  1.914  1.777  1.641") != std::string::npos);
  const Run csv = run_cli({"analyze", "--table", "3", "--csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("K=2,") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  const std::string wav = tone_wav();
  Run r = run_cli({"spectrogram", wav});
  CHECK(r.code == 2);
  CHECK(r.err.find("no output requested") != std::string::npos);
  r = run_cli({"spectrogram", wav, "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  r = run_cli({"spectrogram", wav, "--family", "box", "--out-csv", scratch("x.csv")});
  CHECK(r.code == 2);
  r = run_cli({"spectrogram", scratch("missing.wav"), "--out-csv", scratch("x.csv")});
  CHECK(r.code == 1);
  CHECK(r.err.find("cannot open") != std::string::npos);

  CHECK(run_binary("spectrogram " + wav) == 2);
  CHECK(slurp(scratch("bin.err")).find("no output requested") != std::string::npos);
  CHECK(run_binary("analyze --nonsense") == 2);
  CHECK(run_binary("analyze --table 2") == 0);
  CHECK(slurp(scratch("bin.out")).find("K=4  2.000  1.914  1.777  1.641") != std::string::npos);
}

TEST_CASE("onsets of a silent file are zero") {
  const std::string wav = scratch("silent.wav");
  write_wav(wav, std::vector<double>(4000, 0.0), 1, 8000);
  const std::string csv = scratch("onsets.csv");
  const Run r = run_cli({"features", wav, "--onsets", "--out-csv", csv, "--nu-min", "60",
                         "--nu-max", "72"});
  REQUIRE(r.code == 0);
  const RealGrid g = read_grid_csv(csv);
  CHECK(g.channels() == 49);
  CHECK(g.frames() == 500);
  for (double v : g.values) CHECK(v == 0.0);
}

TEST_CASE("spectrogram outputs") {
  const std::string wav = tone_wav();
  const std::string csv = scratch("spec.csv"), pgm = scratch("spec.pgm");
  const Run r = run_cli({"spectrogram", wav, "--db", "--nu-min", "57", "--nu-max", "81",
                         "--out-csv", csv, "--out-pgm", pgm});
  REQUIRE(r.code == 0);
  const RealGrid g = read_grid_csv(csv);
  CHECK(g.channels() == 97);
  CHECK(g.frames() == 250);
  std::size_t best = 0;
  for (std::size_t c = 0; c < g.channels(); ++c) {
    if (g.at(200, c) > g.at(200, best)) best = c;
  }
  CHECK(g.nus[best] == 69.0);
  CHECK(std::abs(g.at(200, best) - 20.0 * std::log10(0.25)) < 0.5);
  CHECK(slurp(pgm).rfind("P5\n250 97\n255\n", 0) == 0);
}

TEST_CASE("JSON config supplies flags and the command line overrides it") {
  const std::string wav = tone_wav();
  const std::string cfg = write_bytes(
      "run.json", R"({"spectrogram": {"hop-ms": 5, "nu-min": 60, "nu-max": 72, "db": true}})");
  const std::string a = scratch("cfg_a.csv"), b = scratch("cfg_b.csv");
  REQUIRE(run_cli({"spectrogram", wav, "--config", cfg, "--out-csv", a}).code == 0);
  CHECK(read_grid_csv(a).frames() == 50);
  CHECK(read_grid_csv(a).channels() == 49);
  REQUIRE(run_cli({"spectrogram", wav, "--config", cfg, "--hop-ms", "2", "--out-csv", b}).code ==
          0);
  CHECK(read_grid_csv(b).frames() == 125);

  const std::string bad = write_bytes("bad.json", R"({"spectrogram": {"no-such-flag": 1}})");
  CHECK(run_cli({"spectrogram", wav, "--config", bad, "--out-csv", a}).code == 2);
  const std::string broken = write_bytes("broken.json", "{nope");
  CHECK(run_cli({"spectrogram", wav, "--config", broken, "--out-csv", a}).code == 2);
}

TEST_CASE("outputs are deterministic across runs and thread counts") {
  const std::string wav = tone_wav();
  const std::vector<std::string> base = {"features", wav, "--bands", "--onsets",
                                         "--nu-min", "57", "--nu-max", "81"};
  std::vector<std::string> contents;
  for (unsigned threads : {1u, 3u, 1u}) {
    set_num_threads(threads);
    auto args = base;
    const std::string prefix = scratch("det" + std::to_string(contents.size()));
    args.insert(args.end(), {"--out-csv", prefix + ".csv", "--out-pgm", prefix + ".pgm"});
    REQUIRE(run_cli(args).code == 0);
    contents.push_back(slurp(prefix + ".bands.csv") + slurp(prefix + ".onsets.csv") +
                       slurp(prefix + ".bands.pgm") + slurp(prefix + ".onsets.pgm"));
  }
  set_num_threads(0);
  CHECK(contents[0].size() > 1000);
  CHECK(contents[0] == contents[1]);
  CHECK(contents[0] == contents[2]);
}

TEST_CASE("features write partial curves and glissando maps") {
  const std::string wav = tone_wav();
  const std::string json = scratch("curves.json"), csv = scratch("gl.csv");
  REQUIRE(run_cli({"features", wav, "--partials", "--out-json", json, "--nu-min", "57",
                   "--nu-max", "81"})
              .code == 0);
  const auto doc = nlohmann::json::parse(slurp(json));
  REQUIRE(doc.size() == 1);
  CHECK(std::abs(doc[0]["points"].back()["nu"].get<double>() - 69.0) < 0.1);

  REQUIRE(run_cli({"features", wav, "--glissando-bank", "-20,0,20", "--out-csv", csv,
                   "--nu-min", "57", "--nu-max", "81"})
              .code == 0);
  for (double v : read_grid_csv(csv).values) {
    CHECK((v == -20.0 || v == 0.0 || v == 20.0));
  }
  CHECK(run_cli({"features", wav, "--out-csv", csv}).code == 2);
}

TEST_CASE("kernels subcommand") {
  const std::string imp = scratch("imp.tsv"), csv = scratch("kern.csv");
  REQUIRE(run_cli({"kernels", "--family", "rec-uni", "--K", "4", "--out-impulse", imp,
                   "--out-csv", csv})
              .code == 0);
  std::istringstream in(slurp(imp));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t\th");
  double mass = 0.0, t = 0.0, h = 0.0;
  while (in >> t >> h) mass += h * 0.5e-3;
  CHECK(std::abs(mass - 1.0) < 0.01);
  const RealGrid k = read_grid_csv(csv);
  CHECK(k.frames() == 201);
  CHECK(k.channels() == 97);
  CHECK(run_cli({"kernels"}).code == 2);
  CHECK(run_cli({"kernels", "--sigma-nu", "0", "--out-csv", csv}).code == 2);
}

}  // namespace
}  // namespace audiorf
