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

#include "audiorf/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace audiorf {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

[[noreturn]] void truncated(const std::string& path, std::size_t offset,
                            const char* what) {
  throw std::runtime_error(path + ": truncated WAV file at byte offset " +
                           std::to_string(offset) + " (" + what + ")");
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::size_t size = bytes.size();
  if (size < 12) truncated(path, size, "RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw std::runtime_error(path + ": not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (true) {
    if (pos + 8 > size) {
      if (!have_fmt) truncated(path, size, "missing fmt chunk");
      truncated(path, size, "missing data chunk");
    }
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t length = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (length < 16 || body + length > size) truncated(path, size, "fmt chunk");
      format = le16(bytes.data() + body);
      channels = le16(bytes.data() + body + 2);
      rate = le32(bytes.data() + body + 4);
      bits = le16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        if (length < 40) truncated(path, size, "extensible fmt chunk");
        format = le16(bytes.data() + body + 24);  // Sub-format GUID prefix.
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw std::runtime_error(path + ": data chunk before fmt");
      if (format != kFormatPcm && format != kFormatFloat) {
        char tag[16];
        std::snprintf(tag, sizeof(tag), "0x%04X", format);
        throw std::runtime_error(path + ": unsupported WAV format tag " + tag);
      }
      if (format == kFormatPcm && bits != 16 && bits != 24 && bits != 32) {
        throw std::runtime_error(path + ": unsupported bit depth " +
                                 std::to_string(bits));
      }
      if (format == kFormatFloat && bits != 32) {
        throw std::runtime_error(path + ": unsupported bit depth " +
                                 std::to_string(bits) + " for float samples");
      }
      if (channels == 0 || rate == 0) {
        throw std::runtime_error(path + ": invalid channel count or rate");
      }
      if (body + length > size) truncated(path, size, "data chunk");

      const std::size_t width = bits / 8;
      const std::size_t frames = length / (width * channels);
      AudioBuffer out;
      out.sample_rate = rate;
      out.samples.resize(frames);
      const unsigned char* p = bytes.data() + body;
      for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c, p += width) {
          double v;
          if (format == kFormatFloat) {
            float x;
            const std::uint32_t u = le32(p);
            std::memcpy(&x, &u, 4);
            v = x;
          } else if (bits == 16) {
            v = static_cast<std::int16_t>(le16(p)) / 32768.0;
          } else if (bits == 24) {
            std::int32_t x = p[0] | (p[1] << 8) | (p[2] << 16);
            if (x & 0x800000) x -= 0x1000000;
            v = x / 8388608.0;
          } else {
            v = static_cast<std::int32_t>(le32(p)) / 2147483648.0;
          }
          acc += v;
        }
        out.samples[f] = acc / channels;
      }
      return out;
    }
    pos = body + length + (length & 1u);
  }
}

void write_wav(const std::string& path, std::span<const double> interleaved,
               int channels, int sample_rate, WavEncoding encoding) {
  if (channels < 1 || sample_rate < 1) {
    throw std::invalid_argument("write_wav needs channels >= 1 and rate >= 1");
  }
  const int bits = encoding == WavEncoding::kPcm16 ? 16
                   : encoding == WavEncoding::kPcm24 ? 24
                                                     : 32;
  const std::uint16_t format =
      encoding == WavEncoding::kFloat32 ? kFormatFloat : kFormatPcm;
  const auto data_bytes =
      static_cast<std::uint32_t>(interleaved.size() * (bits / 8));
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, format);
  put16(out, static_cast<std::uint16_t>(channels));
  put32(out, static_cast<std::uint32_t>(sample_rate));
  put32(out, static_cast<std::uint32_t>(sample_rate * channels * bits / 8));
  put16(out, static_cast<std::uint16_t>(channels * bits / 8));
  put16(out, static_cast<std::uint16_t>(bits));
  out += "data";
  put32(out, data_bytes);
  for (double x : interleaved) {
    if (encoding == WavEncoding::kFloat32) {
      const float f = static_cast<float>(x);
      std::uint32_t u;
      std::memcpy(&u, &f, 4);
      put32(out, u);
      continue;
    }
    const double full = std::ldexp(1.0, bits - 1);
    const auto q = static_cast<std::int64_t>(
        std::clamp(std::round(x * full), -full, full - 1.0));
    for (int b = 0; b < bits / 8; ++b) {
      out.push_back(static_cast<char>((q >> (8 * b)) & 0xFF));
    }
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(path + ": cannot open for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error(path + ": write failed");
}

}  // namespace audiorf
