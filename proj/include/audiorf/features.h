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

#ifndef AUDIORF_FEATURES_H_
#define AUDIORF_FEATURES_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "audiorf/grid.h"
#include "audiorf/temporal_scale_space.h"

namespace audiorf {

// Scales of a second-layer operator: temporal tau_a (s^2) and spectral s
// (semitones^2).
struct FeatureScales {
  TemporalFamily family;
  double tau_a = 0.0;
  double s = 0.0;
};

inline constexpr double kDefaultCurveThreshold = 3.0;
inline constexpr double kDefaultCurveJump = 1.0;

// Rectified sqrt(tau_a) d/dt response (positive part for onsets, negated
// negative part for offsets). Warm-up frames are zero.
RealGrid detect_onsets(const RealGrid& s_db, const FeatureScales& scales);
RealGrid detect_offsets(const RealGrid& s_db, const FeatureScales& scales);

// -s d^2/dnu^2 response along the glissando direction v, not rectified.
RealGrid band_response(const RealGrid& s_db, const FeatureScales& scales,
                       double v = 0.0);
// Positive part of band_response with warm-up frames zeroed.
RealGrid enhance_bands(const RealGrid& s_db, const FeatureScales& scales);

struct CurvePoint {
  std::size_t frame = 0;
  double time = 0.0;
  double nu = 0.0;        // Sub-bin position, semitones.
  double strength = 0.0;  // Interpolated band response.
};

struct PartialCurve {
  std::vector<CurvePoint> points;  // One per consecutive frame.
};

// Spectral maxima of a band response that reach c_min, located to sub-bin
// precision, then linked greedily from frame to frame to the nearest curve
// end within max_jump semitones. Warm-up frames are skipped.
std::vector<PartialCurve> extract_partial_curves(
    const RealGrid& band, double c_min = kDefaultCurveThreshold,
    double max_jump = kDefaultCurveJump);

struct GlissandoEstimate {
  RealGrid v_hat;     // semitones / s
  RealGrid response;  // Band response at v_hat's bank element.
};

// Per-cell argmax of band_response over the bank. Ties go to the smallest
// |v|. With refine, a parabola through the neighbouring bank elements
// refines the estimate. Both maps are zero in warm-up frames. Throws
// std::invalid_argument for an empty bank.
GlissandoEstimate glissando_filterbank(const RealGrid& s_db,
                                       std::span<const double> bank,
                                       const FeatureScales& scales,
                                       bool refine = false);

struct SecondMomentField {
  RealGrid ytt, ytn, ynn;
  RealGrid v_hat;                // 0 where undefined.
  std::vector<std::uint8_t> defined;  // Frame-major, 1 where ynn > floor
                                      // outside warm-up.
  double floor = 0.0;
};

// Products of the unnormalized first derivatives smoothed at the
// integration scales, and v = -ytn / ynn. Warm-up cells are zero, stay
// undefined and do not enter the median that sets the floor. Throws if an integration scale is
// below the corresponding derivative scale.
SecondMomentField second_moment_glissando(const RealGrid& s_db,
                                          const FeatureScales& derivative,
                                          double tau_i, double s_i);

// Floor relative to the median of ynn below which v is undefined.
inline constexpr double kSecondMomentFloor = 1e-6;

}  // namespace audiorf

#endif  // AUDIORF_FEATURES_H_
