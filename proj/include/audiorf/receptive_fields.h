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

// Second-layer spectro-temporal receptive fields over a dB spectrogram.
//
// A receptive field smooths the grid over time (scale tau_a, seconds^2) and
// over log-frequency (scale s, semitones^2), optionally along a glissando
// direction v (semitones/s), and then applies alpha temporal and beta
// spectral difference operators scaled to physical units. Channels with a
// start-up transient have their warm-up count extended by the temporal reach
// of each operator.

#ifndef AUDIORF_RECEPTIVE_FIELDS_H_
#define AUDIORF_RECEPTIVE_FIELDS_H_

#include "audiorf/grid.h"
#include "audiorf/temporal_scale_space.h"

namespace audiorf {

struct RFSpec {
  TemporalFamily family;
  double tau_a = 0.0;  // seconds^2
  double s = 0.0;      // semitones^2
  double v = 0.0;      // semitones / second
  int alpha = 0;
  int beta = 0;
  // Multiply by tau_a^(alpha/2) s^(beta/2).
  bool normalized = true;

  void validate() const;
  double normalization() const;
};

// Discrete Gaussian along nu in every frame, mirrored at the grid edges.
RealGrid spectral_smooth(const RealGrid& grid, double s, double epsilon = 1e-6);

// Smoothing along frames in every channel. Causal families run the
// recursive cascade at the frame rate, starting from the steady state of the
// first frame; the Gaussian family uses the discrete Gaussian with mirrored
// edges.
RealGrid temporal_smooth(const RealGrid& grid, const TemporalFamily& family,
                         double tau_a, double epsilon = 1e-6);

// Temporal differences divided by the frame step. Order 1 is the backward
// difference; order 2 is backward aligned for causal data and centred
// otherwise. Samples before the first frame repeat the first frame.
RealGrid temporal_difference(const RealGrid& grid, int order, bool causal);

// Centred spectral differences of order 1 or 2 divided by the bin step,
// mirrored at the edges.
RealGrid spectral_difference(const RealGrid& grid, int order);

// Resamples every frame along nu: out(t, nu) = in(t, nu + v (t - t_ref)),
// with Catmull-Rom interpolation and mirrored edges. A ridge moving at v
// becomes stationary.
RealGrid glissando_warp(const RealGrid& grid, double v, double t_ref);
RealGrid glissando_unwarp(const RealGrid& grid, double v, double t_ref);

// Time of the centre frame, the fixed point of the warps used by apply_rf.
double reference_time(const RealGrid& grid);

// Receptive-field response with the same axes as the input. A nonzero v
// warps, applies the separable field and warps back, so temporal
// derivatives follow the glissando direction.
RealGrid apply_rf(const RealGrid& grid, const RFSpec& spec);

// Continuous kernel image on a (time, nu) lattice: the alpha-th temporal
// derivative of the temporal kernel times the beta-th derivative of the
// Gaussian over nu, sheared by v. Gaussian time axes are centred on 0;
// causal ones start at 0. The nu axis is centred on 0. Requires s > 0.
RealGrid rf_kernel_image(const RFSpec& spec, double t_span, double nu_span,
                         double dt, double dnu);

}  // namespace audiorf

#endif  // AUDIORF_RECEPTIVE_FIELDS_H_
