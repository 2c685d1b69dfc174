// src/observation.cpp

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

#include "vibntf/observation.hpp"

#include <sstream>

#include "vibntf/errors.hpp"

namespace vibntf {

ObservationTensor build_observation(const ProbGrid& energy,
                                    const QuantizedFsfr& quantized) {
  if (energy.values.rows() != quantized.r_index.rows() ||
      energy.values.cols() != quantized.r_index.cols()) {
    std::ostringstream os;
    os << "build_observation: energy grid is " << energy.values.rows() << "x"
       << energy.values.cols() << ", r_index is " << quantized.r_index.rows()
       << "x" << quantized.r_index.cols();
    throw ShapeError(os.str());
  }
  if (quantized.num_bins < 1) {
    throw InputError("build_observation: quantization bin count must be >= 1");
  }
  if ((quantized.r_index.array() < 0).any() ||
      (quantized.r_index.array() >= quantized.num_bins).any()) {
    throw InputError("build_observation: r_index out of range");
  }
  ObservationTensor obs;
  obs.energy = energy;
  obs.r_index = quantized.r_index;
  obs.num_r = quantized.num_bins;
  return obs;
}

}  // namespace vibntf
