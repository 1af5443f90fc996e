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

#ifndef AUDIORF_WAV_H_
#define AUDIORF_WAV_H_

#include <span>
#include <string>
#include <vector>

namespace audiorf {

// Mono samples; integer PCM is scaled by 2^-(bits-1).
struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 0.0;
};

// Reads RIFF/WAVE with PCM 16, 24 or 32 bit integers or 32 bit floats,
// including WAVE_FORMAT_EXTENSIBLE. Channels are averaged. Throws
// std::runtime_error naming the format tag or bit depth when unsupported and
// the byte offset when the file is truncated.
AudioBuffer read_wav(const std::string& path);

enum class WavEncoding { kPcm16, kPcm24, kPcm32, kFloat32 };

// Writes interleaved samples; integer encodings clamp to the full range.
void write_wav(const std::string& path, std::span<const double> interleaved,
               int channels, int sample_rate,
               WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace audiorf

#endif  // AUDIORF_WAV_H_
