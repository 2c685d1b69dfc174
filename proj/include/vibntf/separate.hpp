// include/vibntf/separate.hpp

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

#ifndef VIBNTF_SEPARATE_HPP_
#define VIBNTF_SEPARATE_HPP_

#include <Eigen/Dense>
#include <vector>

#include "vibntf/factorize.hpp"
#include "vibntf/observation.hpp"
#include "vibntf/stft.hpp"

namespace vibntf {

// Per-source Wiener gains, each F x T in [0,1], summing to 1 at every bin.
struct MaskSet {
  std::vector<Eigen::ArrayXXd> masks;

  int num_sources() const { return static_cast<int>(masks.size()); }
};

struct SeparationResult {
  std::vector<Spectrogram> source_spectrograms;
  std::vector<AudioBuffer> source_signals;
};

// Posterior source share of each bin, conditioned on the observed
// modulation-ratio slot r(f,t).  Set condition_on_r false to marginalize the
// ratio axis away instead (ablation: masks then ignore the FM evidence).
// Bins whose model value underflows get the uniform mask.
MaskSet wiener_masks_vibntf(const FactorSet& fs, const ObservationTensor& obs,
                            bool condition_on_r = true);

// Component share q(f|z)q(z,t) / sum_z', one mask per component.
MaskSet wiener_masks_klnmf(const NmfFactorSet& nmf);

// Multiplies the mixture spectrogram by each mask and inverts.  The source
// spectrograms sum bin-wise to the mixture, so the signals sum to the
// inverse-transformed mixture.
SeparationResult apply_masks(const Spectrogram& mix_spec, const MaskSet& masks);

}  // namespace vibntf

#endif  // VIBNTF_SEPARATE_HPP_
