// tests/oracles.hpp

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

// Brute-force reference implementations used only by tests.  Everything here
// favors the most literal possible translation of the definitions (dense
// tensors, explicit delay matrices, generic least squares) over speed, so
// the production code has an independent implementation to be checked
// against.

#ifndef VIBNTF_TESTS_ORACLES_HPP_
#define VIBNTF_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <vector>

#include "vibntf/audio.hpp"
#include "vibntf/factorize.hpp"
#include "vibntf/observation.hpp"

namespace vibntf_tests {

// Dense model value q(f,t,r) as a stacked F x (T*R) grid, column t*R + r..
// kept simple: element access via dense_model_at.
double dense_model_at(const vibntf::FactorSet& fs, int f, int t, int r);

double dense_vibntf_objective(const vibntf::ObservationTensor& obs,
                              const vibntf::FactorSet& fs);

// Full five-dimensional E-step and normalized marginals, recomputing the
// posterior between factor updates when strict is set.
vibntf::FactorSet dense_vibntf_iterate(const vibntf::ObservationTensor& obs,
                                       const vibntf::FactorSet& fs,
                                       bool strict);

// Posterior source share at every bin, conditioned on the observed r.
std::vector<Eigen::ArrayXXd> dense_vibntf_masks(
    const vibntf::FactorSet& fs, const vibntf::ObservationTensor& obs);

double dense_klnmf_objective(const vibntf::ProbGrid& p,
                             const vibntf::NmfFactorSet& nmf);
vibntf::NmfFactorSet dense_klnmf_iterate(const vibntf::ProbGrid& p,
                                         const vibntf::NmfFactorSet& nmf,
                                         bool strict);

// Per-(estimate, reference) metrics from explicit delay matrices and QR
// least squares; entry (i, j) treats reference j as the target.
struct DenseBssResult {
  Eigen::MatrixXd sdr;
  Eigen::MatrixXd sir;
  Eigen::MatrixXd sar;
};
DenseBssResult dense_bss_oracle(const std::vector<vibntf::AudioBuffer>& estimates,
                                const std::vector<vibntf::AudioBuffer>& references,
                                int filter_len);

}  // namespace vibntf_tests

#endif  // VIBNTF_TESTS_ORACLES_HPP_
