// src/stft.cpp

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

#include "vibntf/stft.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "vibntf/errors.hpp"
#include "vibntf/fft.hpp"

namespace vibntf {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void StftConfig::validate() const {
  if (fft_len <= 0 || (fft_len & (fft_len - 1)) != 0) {
    throw ShapeError("StftConfig: fft_len must be a power of two");
  }
  if (hop <= 0 || fft_len % hop != 0) {
    throw ShapeError("StftConfig: hop must divide fft_len");
  }
  if (hop > fft_len / 2) {
    throw ShapeError("StftConfig: hop must be at most fft_len/2");
  }
}

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int m = 0; m < n; ++m) {
    w[m] = 0.5 * (1.0 - std::cos(2.0 * kPi * (m + 0.5) / n));
  }
  return w;
}

std::vector<double> hann_window_derivative(int n, int sample_rate) {
  std::vector<double> wd(n);
  for (int m = 0; m < n; ++m) {
    wd[m] = sample_rate * (kPi / n) * std::sin(2.0 * kPi * (m + 0.5) / n);
  }
  return wd;
}

int num_hops(std::int64_t len, int hop) {
  return static_cast<int>((len + hop - 1) / hop) + 1;
}

Spectrogram stft_forward(const AudioBuffer& buffer, const StftConfig& config) {
  config.validate();
  const std::int64_t len = static_cast<std::int64_t>(buffer.size());
  if (len < 1) throw DegenerateInputError("stft_forward: empty buffer");

  const int n = config.fft_len;
  const int f_bins = config.num_bins();
  const int t_hops = num_hops(len, config.hop);
  const std::vector<double> w = hann_window(n);

  Spectrogram spec;
  spec.config = config;
  spec.sample_rate = buffer.sample_rate;
  spec.original_len = len;
  spec.values.resize(f_bins, t_hops);

  Fft fft(n);
  std::vector<std::complex<double>> frame(n);
  for (int t = 0; t < t_hops; ++t) {
    // Frames are centered on t*hop so every sample carries near-peak window
    // weight in at least one frame; masked reconstructions stay bounded.
    const std::int64_t start =
        static_cast<std::int64_t>(t) * config.hop - n / 2;
    for (int m = 0; m < n; ++m) {
      const std::int64_t idx = start + m;
      const double x = idx >= 0 && idx < len ? buffer.samples[idx] : 0.0;
      frame[m] = x * w[m];
    }
    fft.forward(frame);
    for (int f = 0; f < f_bins; ++f) spec.values(f, t) = frame[f];
  }
  return spec;
}

AudioBuffer istft(const Spectrogram& spec) {
  spec.config.validate();
  const int n = spec.config.fft_len;
  const int f_bins = spec.config.num_bins();
  if (spec.bins() != f_bins) {
    throw ShapeError("istft: spectrogram has " + std::to_string(spec.bins()) +
                     " rows, expected " + std::to_string(f_bins));
  }
  const int t_hops = spec.hops();
  const std::int64_t padded = static_cast<std::int64_t>(t_hops - 1) * spec.config.hop + n;
  if (spec.original_len < 0 || spec.original_len > padded - n / 2) {
    throw ShapeError("istft: original_len inconsistent with hop count");
  }

  const std::vector<double> w = hann_window(n);
  // Accumulators cover the centered frames' full extent; signal sample i
  // lives at buffer index i + n/2.
  std::vector<double> num(padded, 0.0);
  std::vector<double> den(padded, 0.0);

  Fft fft(n);
  std::vector<std::complex<double>> frame(n);
  for (int t = 0; t < t_hops; ++t) {
    for (int f = 0; f < f_bins; ++f) frame[f] = spec.values(f, t);
    for (int f = f_bins; f < n; ++f) frame[f] = std::conj(spec.values(n - f, t));
    fft.inverse(frame);
    const std::int64_t start = static_cast<std::int64_t>(t) * spec.config.hop;
    for (int m = 0; m < n; ++m) {
      num[start + m] += w[m] * frame[m].real();
      den[start + m] += w[m] * w[m];
    }
  }

  AudioBuffer out;
  out.sample_rate = spec.sample_rate;
  out.samples.resize(spec.original_len);
  constexpr double kCoverageFloor = 1e-30;
  for (std::int64_t i = 0; i < spec.original_len; ++i) {
    const std::int64_t j = i + n / 2;
    out.samples[i] = den[j] > kCoverageFloor ? num[j] / den[j] : 0.0;
  }
  return out;
}

ProbGrid normalize_spectrogram(const Spectrogram& spec) {
  ProbGrid grid;
  grid.values = spec.values.array().abs();
  const double total = grid.values.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateInputError("normalize_spectrogram: all-zero spectrogram");
  }
  grid.values /= total;
  return grid;
}

}  // namespace vibntf
