// include/vibntf/stft.hpp

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

#ifndef VIBNTF_STFT_HPP_
#define VIBNTF_STFT_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vibntf/audio.hpp"

namespace vibntf {

enum class Window { kHann };

struct StftConfig {
  int fft_len = 1024;
  int hop = 256;
  Window window = Window::kHann;

  int num_bins() const { return fft_len / 2 + 1; }
  // fft_len power of two, hop divides fft_len, hop <= fft_len/2.
  void validate() const;
};

// Complex STFT grid, F = fft_len/2 + 1 non-redundant bins (rows) by T hops
// (columns).  Frame t is centered on sample t*hop: it covers
// [t*hop - fft_len/2, t*hop + fft_len/2), zero-padded outside the signal.
struct Spectrogram {
  Eigen::MatrixXcd values;
  StftConfig config;
  int sample_rate = 0;
  std::int64_t original_len = 0;

  int bins() const { return static_cast<int>(values.rows()); }
  int hops() const { return static_cast<int>(values.cols()); }
};

// Nonnegative F x T grid summing to one.
struct ProbGrid {
  Eigen::ArrayXXd values;
};

// Hann analysis window sampled at half-sample offsets,
// w[m] = 0.5*(1 - cos(2*pi*(m + 0.5)/n)).  Strictly positive at every tap,
// which keeps the boundary samples recoverable in the weighted overlap-add
// inverse.
std::vector<double> hann_window(int n);

// Time derivative of the same window in 1/s (needed by DDM atoms).
std::vector<double> hann_window_derivative(int n, int sample_rate);

// Frame count convention: T = ceil(len/hop) + 1.
int num_hops(std::int64_t len, int hop);

Spectrogram stft_forward(const AudioBuffer& buffer, const StftConfig& config);

// Weighted overlap-add inverse with window-squared normalization; exact
// reconstruction (to roundoff) for spectrograms produced by stft_forward,
// linear in the spectrogram for masked ones.
AudioBuffer istft(const Spectrogram& spec);

// p(f,t) = |X(f,t)| / sum|X|.  Throws DegenerateInputError when every
// magnitude is zero.
ProbGrid normalize_spectrogram(const Spectrogram& spec);

}  // namespace vibntf

#endif  // VIBNTF_STFT_HPP_
