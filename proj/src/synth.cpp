// src/synth.cpp

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

#include "vibntf/synth.hpp"

#include <cmath>
#include <cstdint>

#include "vibntf/errors.hpp"

namespace vibntf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPeakTarget = 0.9;

double max_partial_freq(double f0_hz, int num_partials, double depth) {
  return (2.0 * num_partials - 1.0) * f0_hz * (1.0 + depth);
}

}  // namespace

void VibratoParams::validate() const {
  if (!(f0_hz > 0.0)) {
    throw InputError("vibrato f0 must be positive");
  }
  if (num_partials < 1) {
    throw InputError("vibrato needs at least one partial");
  }
  if (!(depth >= 0.0 && depth < 1.0)) {
    throw InputError("vibrato depth must lie in [0, 1)");
  }
  if (!(rate_hz > 0.0)) {
    throw InputError("vibrato rate must be positive");
  }
  if (static_cast<int>(phase0.size()) != num_partials) {
    throw ShapeError("vibrato phase list must have one entry per partial");
  }
}

void SynthRanges::validate() const {
  if (!(base_f0_hz > 0.0) || num_semitones < 1) {
    throw InputError("synth note grid is empty");
  }
  if (min_partials < 1 || max_partials < min_partials) {
    throw InputError("synth partial range is empty");
  }
  if (!(min_depth >= 0.0 && max_depth < 1.0 && min_depth <= max_depth)) {
    throw InputError("synth depth range must lie in [0, 1)");
  }
  if (!(min_rate_hz > 0.0 && min_rate_hz <= max_rate_hz)) {
    throw InputError("synth rate range must be positive");
  }
}

VibratoParams sample_vibrato_params(Rng& rng, const SynthRanges& ranges,
                                    int sample_rate) {
  ranges.validate();
  if (sample_rate <= 0) {
    throw InputError("sample_vibrato_params: sample rate must be positive");
  }
  VibratoParams params;
  const int note = rng.uniform_int(0, ranges.num_semitones - 1);
  params.f0_hz = ranges.base_f0_hz * std::pow(2.0, note / 12.0);
  params.num_partials = rng.uniform_int(ranges.min_partials, ranges.max_partials);
  params.depth = rng.uniform(ranges.min_depth, ranges.max_depth);
  params.rate_hz = rng.log_uniform(ranges.min_rate_hz, ranges.max_rate_hz);

  const double nyquist = 0.5 * sample_rate;
  while (params.num_partials > 1 &&
         max_partial_freq(params.f0_hz, params.num_partials, params.depth) >=
             nyquist) {
    --params.num_partials;
  }
  if (max_partial_freq(params.f0_hz, params.num_partials, params.depth) >=
      nyquist) {
    throw InputError("sample_vibrato_params: fundamental exceeds Nyquist");
  }

  params.phase0.resize(params.num_partials);
  for (int p = 0; p < params.num_partials; ++p) {
    params.phase0[p] = 2.0 * kPi * rng.uniform();
  }
  return params;
}

AudioBuffer render_vibrato_square(const VibratoParams& params,
                                  double duration_s, int sample_rate) {
  params.validate();
  if (!(duration_s > 0.0)) {
    throw InputError("render_vibrato_square: duration must be positive");
  }
  if (sample_rate <= 0) {
    throw InputError("render_vibrato_square: sample rate must be positive");
  }
  if (max_partial_freq(params.f0_hz, params.num_partials, params.depth) >=
      0.5 * sample_rate) {
    throw InputError("render_vibrato_square: highest partial would alias");
  }

  const std::int64_t len =
      static_cast<std::int64_t>(std::llround(duration_s * sample_rate));
  if (len < 1) {
    throw InputError("render_vibrato_square: duration shorter than one sample");
  }
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.samples.assign(static_cast<std::size_t>(len), 0.0);

  const double mod_omega = 2.0 * kPi * params.rate_hz;
  for (std::int64_t m = 0; m < len; ++m) {
    const double tau = static_cast<double>(m) / sample_rate;
    // Closed-form integral of kappa(u) = depth*sin(mod_omega*u) over [0,tau].
    const double warp =
        tau + params.depth * (1.0 - std::cos(mod_omega * tau)) / mod_omega;
    double x = 0.0;
    for (int p = 0; p < params.num_partials; ++p) {
      const double harmonic = 2.0 * p + 1.0;
      const double omega = 2.0 * kPi * harmonic * params.f0_hz;
      x += std::sin(params.phase0[p] + omega * warp) / harmonic;
    }
    out.samples[static_cast<std::size_t>(m)] = x;
  }

  const double peak = peak_abs(out.samples);
  if (!(peak > 0.0)) {
    throw DegenerateInputError("render_vibrato_square: rendered silence");
  }
  const double gain = kPeakTarget / peak;
  for (double& v : out.samples) {
    v *= gain;
  }
  return out;
}

double vibrato_fsfr(const VibratoParams& params, double tau) {
  const double mod_omega = 2.0 * kPi * params.rate_hz;
  const double kappa = params.depth * std::sin(mod_omega * tau);
  const double kappa_dot = params.depth * mod_omega * std::cos(mod_omega * tau);
  return kappa_dot / (1.0 + kappa);
}

}  // namespace vibntf
