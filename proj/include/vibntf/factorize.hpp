// include/vibntf/factorize.hpp

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

#ifndef VIBNTF_FACTORIZE_HPP_
#define VIBNTF_FACTORIZE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vibntf/observation.hpp"
#include "vibntf/stft.hpp"

namespace vibntf {

// Factors of the tensor model
//   q(f,t,r) = sum_s q(s) q(r|t,s) sum_z q(f|z,s) q(z,t|s).
// Per source s: spectra[s] is F x Z (columns sum to 1 over f),
// activations[s] is Z x T (sums to 1 over all z,t), fm[s] is R x T
// (columns sum to 1 over r).  mix sums to 1 over s.
struct FactorSet {
  Eigen::VectorXd mix;
  std::vector<Eigen::MatrixXd> spectra;
  std::vector<Eigen::MatrixXd> activations;
  std::vector<Eigen::MatrixXd> fm;

  int num_sources() const { return static_cast<int>(mix.size()); }
  int bins() const { return static_cast<int>(spectra.at(0).rows()); }
  int components() const { return static_cast<int>(spectra.at(0).cols()); }
  int hops() const { return static_cast<int>(activations.at(0).cols()); }
  int ratio_bins() const { return static_cast<int>(fm.at(0).rows()); }
};

// Factors of the matrix model q(f,t) = sum_z q(f|z) q(z,t).  Spectra columns
// sum to 1 over f; activations sum to 1 over all (z,t).
struct NmfFactorSet {
  Eigen::MatrixXd spectra;      // F x Z
  Eigen::MatrixXd activations;  // Z x T

  int bins() const { return static_cast<int>(spectra.rows()); }
  int components() const { return static_cast<int>(spectra.cols()); }
  int hops() const { return static_cast<int>(activations.cols()); }
};

struct FitOptions {
  int iterations = 100;
  std::uint64_t seed = 0;
  // Recompute the latent posterior after each factor update (four passes per
  // iteration) instead of updating all factors from one posterior.
  bool strict_mm = false;
  // Random restarts: run num_inits seeded initializations for select_iters
  // iterations each, keep the one with the highest training objective, and
  // continue it until it has seen `iterations` total.  The landscape has
  // symmetric local optima where no source specializes; which basin a run
  // enters is decided in the first few iterations and is visible in the
  // objective, so a short tournament buys most of the benefit of full
  // restarts.  num_inits=1 reduces to a single run of `iterations`.
  int num_inits = 6;
  int select_iters = 15;

  void validate() const;
};

// Random valid conditional probabilities, reproducible for a given seed.
FactorSet init_factors(int num_bins, int num_hops, int num_r, int num_sources,
                       int num_components, std::uint64_t seed);
NmfFactorSet init_nmf_factors(int num_bins, int num_hops, int num_components,
                              std::uint64_t seed);

// Cross entropy sum_{f,t,r} p(f,t,r) log q(f,t,r) over the nonzero
// observations; model zeros are floored to keep the value finite.
double vibntf_objective(const ObservationTensor& obs, const FactorSet& fs);
double klnmf_objective(const ProbGrid& p, const NmfFactorSet& nmf);

// One minorization-maximization sweep: posterior over (z,s) per observed
// cell, then each factor becomes the matching normalized marginal.
FactorSet vibntf_iterate(const ObservationTensor& obs, const FactorSet& fs,
                         const FitOptions& opts);
NmfFactorSet klnmf_iterate(const ProbGrid& p, const NmfFactorSet& nmf,
                           const FitOptions& opts);

FactorSet vibntf_fit(const ObservationTensor& obs, int num_sources,
                     int num_components, const FitOptions& opts);
NmfFactorSet klnmf_fit(const ProbGrid& p, int num_components,
                       const FitOptions& opts);

}  // namespace vibntf

#endif  // VIBNTF_FACTORIZE_HPP_
