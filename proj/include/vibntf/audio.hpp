// include/vibntf/audio.hpp

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

#ifndef VIBNTF_AUDIO_HPP_
#define VIBNTF_AUDIO_HPP_

#include <cstddef>
#include <vector>

namespace vibntf {

// Mono audio, dimensionless amplitudes with nominal range [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 44100;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

struct MixResult {
  AudioBuffer mixture;
  // Per-source gain-adjusted signals; these are the ground-truth references
  // for evaluation.
  std::vector<AudioBuffer> scaled_sources;
};

double rms(const std::vector<double>& samples);
double peak_abs(const std::vector<double>& samples);
bool all_finite(const std::vector<double>& samples);

// Equal-power (0 dB) mixing: every source is rescaled to a common RMS (the
// smallest source RMS, so no source is amplified), lengths are equalized by
// right zero-padding, and the mixture is the sample-wise sum of the scaled
// sources in input order.  RMS is measured over the full padded duration.
// Throws DegenerateInputError for fewer than two sources or a silent source,
// ShapeError for mismatched sample rates.
MixResult mix_at_0db(const std::vector<AudioBuffer>& sources);

}  // namespace vibntf

#endif  // VIBNTF_AUDIO_HPP_
