// include/vibntf/bss_eval.hpp

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

#ifndef VIBNTF_BSS_EVAL_HPP_
#define VIBNTF_BSS_EVAL_HPP_

#include <vector>

#include "vibntf/audio.hpp"

namespace vibntf {

// Separation quality per estimate under the best estimate-to-reference
// matching: permutation[i] is the reference assigned to estimate i, chosen
// to maximize the mean SIR over all bijections.  Values are capped to
// +/- 200 dB so degenerate error terms stay finite.
struct BssMetrics {
  std::vector<double> sdr_db;
  std::vector<double> sir_db;
  std::vector<double> sar_db;
  std::vector<int> permutation;
};

// Allowed-distortion decomposition of each estimate against the references:
// s_target is the least-squares projection onto the matched reference's
// delayed copies (delays 0 .. filter_len-1), e_interf extends the projection
// to every reference's delays, e_artif is what remains.
//   SDR = 10 log10(|s_target|^2 / |e_interf + e_artif|^2)
//   SIR = 10 log10(|s_target|^2 / |e_interf|^2)
//   SAR = 10 log10(|s_target + e_interf|^2 / |e_artif|^2)
// Signal counts and lengths must agree; a silent reference is reported as a
// numerical error because its projection basis is rank-deficient.
BssMetrics bss_eval_sources(const std::vector<AudioBuffer>& estimates,
                            const std::vector<AudioBuffer>& references,
                            int filter_len);

}  // namespace vibntf

#endif  // VIBNTF_BSS_EVAL_HPP_
