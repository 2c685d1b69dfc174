// tests/test_fft.cpp

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

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "vibntf/errors.hpp"
#include "vibntf/fft.hpp"
#include "vibntf/rng.hpp"

using cplx = std::complex<double>;
using vibntf::Fft;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<cplx> random_signal(int n, std::uint64_t seed) {
  vibntf::Rng rng(seed);
  std::vector<cplx> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = {rng.uniform() - 0.5, rng.uniform() - 0.5};
  }
  return x;
}

// Textbook O(n^2) DFT, the independent reference.
std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> out(n);
  for (int k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (int m = 0; m < n; ++m) {
      const double ang = -2.0 * kPi * k * m / n;
      acc += x[m] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d;
}

}  // namespace

TEST_SUITE("fft") {

TEST_CASE("matches the naive DFT on random input") {
  for (const int n : {2, 4, 16, 64}) {
    std::vector<cplx> x = random_signal(n, 100 + n);
    const std::vector<cplx> expected = naive_dft(x);
    Fft fft(n);
    fft.forward(x);
    CHECK(max_diff(x, expected) < 1e-10 * n);
  }
}

TEST_CASE("impulse transforms to a flat spectrum") {
  const int n = 32;
  std::vector<cplx> x(n, cplx(0.0, 0.0));
  x[0] = 1.0;
  Fft fft(n);
  fft.forward(x);
  for (const cplx& v : x) {
    CHECK(std::abs(v - cplx(1.0, 0.0)) < 1e-14);
  }
}

TEST_CASE("complex exponential concentrates in one bin") {
  const int n = 64, k0 = 5;
  std::vector<cplx> x(n);
  for (int m = 0; m < n; ++m) {
    const double ang = 2.0 * kPi * k0 * m / n;
    x[m] = {std::cos(ang), std::sin(ang)};
  }
  Fft fft(n);
  fft.forward(x);
  for (int k = 0; k < n; ++k) {
    const double expected = k == k0 ? static_cast<double>(n) : 0.0;
    CHECK(std::abs(x[k] - cplx(expected, 0.0)) < 1e-11);
  }
}

TEST_CASE("inverse undoes forward and carries the 1/n scale") {
  const int n = 128;
  const std::vector<cplx> x = random_signal(n, 9);
  std::vector<cplx> y = x;
  Fft fft(n);
  fft.forward(y);

  // Parseval with the unnormalized forward: sum|X|^2 = n * sum|x|^2.
  double ex = 0.0, ey = 0.0;
  for (int i = 0; i < n; ++i) {
    ex += std::norm(x[i]);
    ey += std::norm(y[i]);
  }
  CHECK(ey == doctest::Approx(n * ex).epsilon(1e-12));

  fft.inverse(y);
  CHECK(max_diff(y, x) < 1e-13);
}

TEST_CASE("out-of-place variants match and leave the input untouched") {
  const int n = 64;
  const std::vector<cplx> x = random_signal(n, 21);
  std::vector<cplx> in_place = x;
  Fft fft(n);
  fft.forward(in_place);

  std::vector<cplx> out;
  const std::vector<cplx> input_copy = x;
  fft.forward(x, out);
  CHECK(max_diff(out, in_place) == 0.0);
  CHECK(max_diff(x, input_copy) == 0.0);

  std::vector<cplx> back;
  fft.inverse(out, back);
  CHECK(max_diff(back, x) < 1e-13);
}

TEST_CASE("linearity") {
  const int n = 32;
  const std::vector<cplx> a = random_signal(n, 1);
  const std::vector<cplx> b = random_signal(n, 2);
  const cplx alpha(0.7, -0.3);
  std::vector<cplx> combo(n), fa = a, fb = b;
  for (int i = 0; i < n; ++i) {
    combo[i] = alpha * a[i] + b[i];
  }
  Fft fft(n);
  fft.forward(combo);
  fft.forward(fa);
  fft.forward(fb);
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(combo[i] - (alpha * fa[i] + fb[i])) < 1e-12);
  }
}

TEST_CASE("non-power-of-two sizes are rejected") {
  CHECK_THROWS_AS(Fft(0), vibntf::ShapeError);
  CHECK_THROWS_AS(Fft(3), vibntf::ShapeError);
  CHECK_THROWS_AS(Fft(-8), vibntf::ShapeError);
  CHECK_THROWS_AS(Fft(48), vibntf::ShapeError);
  CHECK_NOTHROW(Fft(1));
}

}  // TEST_SUITE
