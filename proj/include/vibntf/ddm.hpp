// include/vibntf/ddm.hpp

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

#ifndef VIBNTF_DDM_HPP_
#define VIBNTF_DDM_HPP_

#include <Eigen/Dense>
#include <vector>

#include "vibntf/audio.hpp"
#include "vibntf/stft.hpp"

namespace vibntf {

struct DdmConfig {
  // Atoms per least-squares system: heterodyned Hann windows at this many
  // neighboring frequency bins of the same hop.  Odd, at least 3.
  int num_atoms = 5;
  // Frequency estimates below this magnitude (rad/s) make the
  // slope-to-frequency ratio meaningless; such bins are marked invalid.
  double min_freq_eps = 2.0 * 3.14159265358979323846;

  void validate() const;
};

// Per-bin estimates of a constant-amplitude linear-FM sinusoid:
//   eta1_im   instantaneous angular frequency at the frame center (rad/s)
//   eta1_re   amplitude log-derivative at the frame center (1/s); near zero
//             for a steady partial, large when the envelope is modulated
//             (e.g. two partials of different sources beating in one lobe)
//   eta2_im   half the angular frequency slope (rad/s^2)
//   fsfr      frequency-slope-to-frequency ratio 2*eta2_im/eta1_im (1/s)
//   residual  relative least-squares misfit in [0, 1]; 0 means the local
//             patch is explained exactly by one linear-FM sinusoid, 1 means
//             not at all
// valid is false where the local system was rank-deficient or the frequency
// estimate fell below min_freq_eps; fsfr is 0 and residual is 1 there.
struct FsfrField {
  Eigen::ArrayXXd eta1_im;
  Eigen::ArrayXXd eta1_re;
  Eigen::ArrayXXd eta2_im;
  Eigen::ArrayXXd fsfr;
  Eigen::ArrayXXd residual;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;

  int bins() const { return static_cast<int>(fsfr.rows()); }
  int hops() const { return static_cast<int>(fsfr.cols()); }
};

struct PostprocessConfig {
  // Bins with energy below this quantile of the energy grid are discarded.
  double energy_percentile = 0.10;
  // Ratios outside +/- clip_mult * sample_rate (1/s) are discarded.
  double clip_mult = 4.0;
  // Ratios outside +/- clip_abs (1/s) are discarded as well.  Vibrato keeps
  // |ratio| = depth*rate*2*pi/(1-depth) in the low tens at most, while
  // estimates from colliding partials of different notes spread over
  // thousands; without an absolute bound they stretch the quantization grid
  // until all genuine ratios share one bin.  Set very large to disable.
  double clip_abs = 16.0;
  // Bins whose amplitude log-derivative |Re(eta1)| exceeds this (1/s) are
  // discarded.  The source model is a sum of constant-amplitude partials, so
  // a steady partial keeps |Re(eta1)| near zero while partials of different
  // sources beating inside one analysis lobe modulate the envelope at the
  // beat rate.  Disabled by default: the beating bins it removes also carry
  // genuine ratio signal, and on balance the trade is neutral here; the gate
  // is kept for data with heavier collision noise.
  double max_amp_mod = 1e9;
  // Bins whose least-squares fit left more than this relative residual are
  // discarded: their energy is not a single linear-FM sinusoid (typically
  // colliding partials of different sources), so the ratio is meaningless
  // noise with arbitrary magnitude.  1 keeps everything.
  double max_residual = 1.0;
  // After the absolute gates, the kept range is trimmed to the energy-weighted
  // [eps, 1-eps] quantiles of the remaining ratios.  Spurious estimates carry
  // almost no spectrogram mass, so this pins the quantization range to the
  // values the factorization actually sees.  0 disables the trim.
  double range_mass_eps = 0.02;

  void validate() const;
};

// Even quantization of the post-processed ratios across their data range.
struct QuantizedFsfr {
  Eigen::MatrixXi r_index;     // values in {0 .. num_bins-1}
  int num_bins = 50;
  std::vector<double> edges;   // num_bins + 1 strictly increasing boundaries

  double midpoint(int r) const { return 0.5 * (edges[r] + edges[r + 1]); }
};

// Estimates the local signal parameters at every time-frequency bin.  Each
// frame is converted to its analytic (one-sided) form, three window
// transforms are taken per frame, and a small complex least-squares system
// over the neighboring bins is solved per target bin.  Rank deficiency never
// aborts; it just clears the valid flag.
FsfrField ddm_estimate(const AudioBuffer& buffer, const StftConfig& stft_config,
                       const DdmConfig& ddm_config);

// Replaces unreliable ratios (invalid, low-energy, or out-of-range bins) with
// the median of the reliable ones and marks everything valid.  Throws
// DegenerateInputError when no bin survives the reliability rules.
FsfrField postprocess_fsfr(const FsfrField& field, const ProbGrid& energy,
                           const PostprocessConfig& config, int sample_rate);

// Quantizes a fully valid field into num_bins equal-width intervals spanning
// [min, max] of the data.  The max maps to the last bin; a constant field
// maps everything to bin floor(num_bins/2).
QuantizedFsfr quantize_fsfr(const FsfrField& field, int num_bins);

}  // namespace vibntf

#endif  // VIBNTF_DDM_HPP_
