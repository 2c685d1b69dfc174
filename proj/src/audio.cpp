// src/audio.cpp

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

#include "vibntf/audio.hpp"

#include <algorithm>
#include <cmath>

#include "vibntf/errors.hpp"

namespace vibntf {

double rms(const std::vector<double>& samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (double x : samples) acc += x * x;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

double peak_abs(const std::vector<double>& samples) {
  double peak = 0.0;
  for (double x : samples) peak = std::max(peak, std::abs(x));
  return peak;
}

bool all_finite(const std::vector<double>& samples) {
  for (double x : samples) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

MixResult mix_at_0db(const std::vector<AudioBuffer>& sources) {
  if (sources.size() < 2) {
    throw DegenerateInputError("mix_at_0db: need at least two sources");
  }
  const int rate = sources.front().sample_rate;
  std::size_t longest = 0;
  for (const auto& src : sources) {
    if (src.sample_rate != rate) {
      throw ShapeError("mix_at_0db: sources have mismatched sample rates");
    }
    if (!all_finite(src.samples)) {
      throw DegenerateInputError("mix_at_0db: source contains NaN/Inf");
    }
    longest = std::max(longest, src.size());
  }

  MixResult out;
  out.scaled_sources.reserve(sources.size());
  for (const auto& src : sources) {
    AudioBuffer padded = src;
    padded.samples.resize(longest, 0.0);
    out.scaled_sources.push_back(std::move(padded));
  }

  // Common target level: the smallest source RMS over the padded duration.
  double target = -1.0;
  constexpr double kSilentRms = 1e-12;
  for (const auto& src : out.scaled_sources) {
    const double level = rms(src.samples);
    if (level < kSilentRms) {
      throw DegenerateInputError("mix_at_0db: silent source (zero RMS)");
    }
    target = target < 0.0 ? level : std::min(target, level);
  }
  for (auto& src : out.scaled_sources) {
    const double gain = target / rms(src.samples);
    for (double& x : src.samples) x *= gain;
  }

  out.mixture.sample_rate = rate;
  out.mixture.samples.assign(longest, 0.0);
  for (const auto& src : out.scaled_sources) {
    for (std::size_t n = 0; n < longest; ++n) {
      out.mixture.samples[n] += src.samples[n];
    }
  }
  return out;
}

}  // namespace vibntf
