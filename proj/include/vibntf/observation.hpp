// include/vibntf/observation.hpp

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

#ifndef VIBNTF_OBSERVATION_HPP_
#define VIBNTF_OBSERVATION_HPP_

#include <Eigen/Dense>

#include "vibntf/ddm.hpp"
#include "vibntf/stft.hpp"

namespace vibntf {

// Sparse observation tensor p(f,t,r): the normalized spectrogram with each
// (f,t) cell assigned to exactly one modulation-ratio slot.  Stored as the
// (energy, r_index) pair; the tensor is never materialized densely.
struct ObservationTensor {
  ProbGrid energy;          // F x T, sums to one
  Eigen::MatrixXi r_index;  // F x T, values in {0 .. num_r-1}
  int num_r = 0;

  int bins() const { return static_cast<int>(energy.values.rows()); }
  int hops() const { return static_cast<int>(energy.values.cols()); }

  // Logical tensor entry, for oracles and debugging only.
  double at(int f, int t, int r) const {
    return r_index(f, t) == r ? energy.values(f, t) : 0.0;
  }
};

ObservationTensor build_observation(const ProbGrid& energy,
                                    const QuantizedFsfr& quantized);

}  // namespace vibntf

#endif  // VIBNTF_OBSERVATION_HPP_
