// src/separate.cpp

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

#include "vibntf/separate.hpp"

#include <sstream>

#include "vibntf/errors.hpp"

namespace vibntf {

MaskSet wiener_masks_vibntf(const FactorSet& fs, const ObservationTensor& obs,
                            bool condition_on_r) {
  if (obs.bins() != fs.bins() || obs.hops() != fs.hops() ||
      obs.num_r != fs.ratio_bins()) {
    throw ShapeError("wiener_masks_vibntf: factor and observation shapes differ");
  }
  const int num_bins = fs.bins();
  const int num_hops = fs.hops();
  const int num_sources = fs.num_sources();
  const double uniform = 1.0 / static_cast<double>(num_sources);

  std::vector<Eigen::MatrixXd> surface(num_sources);
  for (int s = 0; s < num_sources; ++s) {
    surface[s] = fs.spectra[s] * fs.activations[s];
  }

  MaskSet out;
  out.masks.assign(num_sources, Eigen::ArrayXXd::Zero(num_bins, num_hops));
  std::vector<double> w(num_sources);
  for (int t = 0; t < num_hops; ++t) {
    for (int f = 0; f < num_bins; ++f) {
      const int r = obs.r_index(f, t);
      double denom = 0.0;
      for (int s = 0; s < num_sources; ++s) {
        const double fm = condition_on_r ? fs.fm[s](r, t) : 1.0;
        w[s] = fs.mix(s) * fm * surface[s](f, t);
        denom += w[s];
      }
      for (int s = 0; s < num_sources; ++s) {
        out.masks[s](f, t) = denom > 0.0 ? w[s] / denom : uniform;
      }
    }
  }
  return out;
}

MaskSet wiener_masks_klnmf(const NmfFactorSet& nmf) {
  const int num_bins = nmf.bins();
  const int num_hops = nmf.hops();
  const int num_components = nmf.components();
  const double uniform = 1.0 / static_cast<double>(num_components);

  MaskSet out;
  out.masks.assign(num_components, Eigen::ArrayXXd::Zero(num_bins, num_hops));
  std::vector<double> w(num_components);
  for (int t = 0; t < num_hops; ++t) {
    for (int f = 0; f < num_bins; ++f) {
      double denom = 0.0;
      for (int z = 0; z < num_components; ++z) {
        w[z] = nmf.spectra(f, z) * nmf.activations(z, t);
        denom += w[z];
      }
      for (int z = 0; z < num_components; ++z) {
        out.masks[z](f, t) = denom > 0.0 ? w[z] / denom : uniform;
      }
    }
  }
  return out;
}

SeparationResult apply_masks(const Spectrogram& mix_spec, const MaskSet& masks) {
  if (masks.masks.empty()) {
    throw ShapeError("apply_masks: empty mask set");
  }
  for (const Eigen::ArrayXXd& m : masks.masks) {
    if (m.rows() != mix_spec.values.rows() || m.cols() != mix_spec.values.cols()) {
      std::ostringstream os;
      os << "apply_masks: mask is " << m.rows() << "x" << m.cols()
         << ", spectrogram is " << mix_spec.values.rows() << "x"
         << mix_spec.values.cols();
      throw ShapeError(os.str());
    }
  }
  SeparationResult result;
  result.source_spectrograms.reserve(masks.masks.size());
  result.source_signals.reserve(masks.masks.size());
  for (const Eigen::ArrayXXd& m : masks.masks) {
    Spectrogram s = mix_spec;
    s.values.array() *= m.cast<std::complex<double>>();
    result.source_signals.push_back(istft(s));
    result.source_spectrograms.push_back(std::move(s));
  }
  return result;
}

}  // namespace vibntf
