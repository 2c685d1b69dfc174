// include/vibntf/synth.hpp

// Copyright 2026  The vibntf authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef VIBNTF_SYNTH_HPP_
#define VIBNTF_SYNTH_HPP_

#include <vector>

#include "vibntf/audio.hpp"
#include "vibntf/rng.hpp"

namespace vibntf {

// One vibrato square-wave voice: odd harmonics of f0 with 1/(2p-1)
// amplitudes, all partials sharing the multiplicative frequency modulation
// (1 + depth*sin(2*pi*rate*tau)).
struct VibratoParams {
  double f0_hz = 220.0;
  int num_partials = 1;
  double depth = 0.0;           // modulation depth as a fraction of f0
  double rate_hz = 1.0;         // modulation rate
  std::vector<double> phase0;   // initial phase per partial, radians

  void validate() const;
};

struct SynthRanges {
  // Equal-tempered note grid: f0 = base_f0_hz * 2^(k/12), k in
  // {0 .. num_semitones-1}.  Defaults cover A3 (220 Hz) through G#5.
  double base_f0_hz = 220.0;
  int num_semitones = 24;
  int min_partials = 10;
  int max_partials = 30;
  double min_depth = 0.05;
  double max_depth = 0.20;
  double min_rate_hz = 0.5;     // rate drawn log-uniformly
  double max_rate_hz = 10.0;

  void validate() const;
};

// Draws note, partial count, depth, rate, then one initial phase per kept
// partial, in that order.  The partial count is reduced so the highest
// partial's maximum instantaneous frequency stays below Nyquist.
VibratoParams sample_vibrato_params(Rng& rng, const SynthRanges& ranges,
                                    int sample_rate);

// x(tau) = sum_p (1/(2p-1)) sin(phase0_p + w_p*(tau + I(tau))) with
// w_p = 2*pi*(2p-1)*f0 and I(tau) = depth*(1 - cos(2*pi*rate*tau))/(2*pi*rate),
// peak-normalized to 0.9.
AudioBuffer render_vibrato_square(const VibratoParams& params,
                                  double duration_s, int sample_rate);

// Analytic frequency-slope-to-frequency ratio of every partial at time tau,
// kappa'(tau) / (1 + kappa(tau)).  Ground truth for estimator tests.
double vibrato_fsfr(const VibratoParams& params, double tau);

}  // namespace vibntf

#endif  // VIBNTF_SYNTH_HPP_
