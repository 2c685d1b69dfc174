// src/fft.cpp

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

#include "vibntf/fft.hpp"

#include <cmath>
#include <stdexcept>

#include "vibntf/errors.hpp"

namespace vibntf {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Fft::Fft(int n) : n_(n) {
  if (!is_pow2(n)) {
    throw ShapeError("Fft: size must be a power of two, got " +
                     std::to_string(n));
  }
  twiddle_.resize(n / 2);
  for (int k = 0; k < n / 2; ++k) {
    const double ang = -2.0 * kPi * static_cast<double>(k) / n;
    twiddle_[k] = {std::cos(ang), std::sin(ang)};
  }
  bitrev_.resize(n);
  int log2n = 0;
  while ((1 << log2n) < n) ++log2n;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int b = 0; b < log2n; ++b) r |= ((i >> b) & 1) << (log2n - 1 - b);
    bitrev_[i] = r;
  }
}

void Fft::transform(std::vector<std::complex<double>>& a) const {
  for (int i = 0; i < n_; ++i) {
    const int j = bitrev_[i];
    if (j > i) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n_; len <<= 1) {
    const int half = len >> 1;
    const int step = n_ / len;
    for (int start = 0; start < n_; start += len) {
      for (int k = 0; k < half; ++k) {
        const std::complex<double> w = twiddle_[k * step];
        const std::complex<double> u = a[start + k];
        const std::complex<double> v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

void Fft::forward(std::vector<std::complex<double>>& a) const {
  if (static_cast<int>(a.size()) != n_) {
    throw ShapeError("Fft::forward: buffer size mismatch");
  }
  transform(a);
}

void Fft::inverse(std::vector<std::complex<double>>& a) const {
  if (static_cast<int>(a.size()) != n_) {
    throw ShapeError("Fft::inverse: buffer size mismatch");
  }
  for (auto& x : a) x = std::conj(x);
  transform(a);
  const double scale = 1.0 / n_;
  for (auto& x : a) x = std::conj(x) * scale;
}

void Fft::forward(const std::vector<std::complex<double>>& in,
                  std::vector<std::complex<double>>& out) const {
  out = in;
  forward(out);
}

void Fft::inverse(const std::vector<std::complex<double>>& in,
                  std::vector<std::complex<double>>& out) const {
  out = in;
  inverse(out);
}

}  // namespace vibntf
