// include/vibntf/fft.hpp

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

#ifndef VIBNTF_FFT_HPP_
#define VIBNTF_FFT_HPP_

#include <complex>
#include <vector>

namespace vibntf {

// Radix-2 complex FFT with precomputed twiddles.  Power-of-two sizes only
// (the STFT config requires them).  No global state, so instances are safe
// to use from concurrent trial workers, and results are bit-reproducible
// run to run.
class Fft {
 public:
  explicit Fft(int n);

  void forward(std::vector<std::complex<double>>& a) const;
  // Includes the 1/n scale.
  void inverse(std::vector<std::complex<double>>& a) const;

  // Out-of-place variants; `out` is resized as needed and `in` is untouched.
  void forward(const std::vector<std::complex<double>>& in,
               std::vector<std::complex<double>>& out) const;
  void inverse(const std::vector<std::complex<double>>& in,
               std::vector<std::complex<double>>& out) const;

  int size() const { return n_; }

 private:
  void transform(std::vector<std::complex<double>>& a) const;

  int n_ = 0;
  std::vector<std::complex<double>> twiddle_;  // exp(-2*pi*i*k/n), k < n/2
  std::vector<int> bitrev_;
};

}  // namespace vibntf

#endif  // VIBNTF_FFT_HPP_
