// tests/test_stft.cpp

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
#include <vector>

#include "doctest.h"
#include "vibntf/errors.hpp"
#include "vibntf/rng.hpp"
#include "vibntf/stft.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

vibntf::AudioBuffer random_buffer(std::int64_t len, std::uint64_t seed,
                                  int sample_rate = 44100) {
  vibntf::Rng rng(seed);
  vibntf::AudioBuffer b;
  b.sample_rate = sample_rate;
  b.samples.resize(static_cast<std::size_t>(len));
  for (double& v : b.samples) {
    v = 2.0 * rng.uniform() - 1.0;
  }
  return b;
}

double roundtrip_error(const vibntf::AudioBuffer& x,
                       const vibntf::StftConfig& cfg) {
  const vibntf::Spectrogram spec = vibntf::stft_forward(x, cfg);
  const vibntf::AudioBuffer y = vibntf::istft(spec);
  REQUIRE(y.samples.size() == x.samples.size());
  double err = 0.0;
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    err = std::max(err, std::abs(y.samples[i] - x.samples[i]));
  }
  return err;
}

}  // namespace

TEST_SUITE("stft") {

TEST_CASE("hann window is strictly positive and symmetric") {
  const std::vector<double> w = vibntf::hann_window(16);
  REQUIRE(w.size() == 16);
  for (int m = 0; m < 16; ++m) {
    CHECK(w[m] > 0.0);
    CHECK(w[m] == doctest::Approx(w[15 - m]).epsilon(1e-14));
    const double expect = 0.5 * (1.0 - std::cos(2.0 * kPi * (m + 0.5) / 16.0));
    CHECK(w[m] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("window derivative matches numerical differentiation") {
  const int n = 64;
  const int fs = 8000;
  const std::vector<double> wd = vibntf::hann_window_derivative(n, fs);
  for (int m = 0; m < n; ++m) {
    const double h = 1e-6;
    const double tm = (m + 0.5) / static_cast<double>(n);
    const auto cont = [&](double t) {
      return 0.5 * (1.0 - std::cos(2.0 * kPi * t));
    };
    // d/dtau with tau in seconds: t = (m+0.5)/n, dt/dtau = fs/n.
    const double numeric =
        (cont(tm + h) - cont(tm - h)) / (2.0 * h) * fs / n;
    CHECK(wd[m] == doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("frame count convention") {
  CHECK(vibntf::num_hops(88200, 256) == 346);
  CHECK(vibntf::num_hops(1, 256) == 2);
  CHECK(vibntf::num_hops(256, 256) == 2);
  CHECK(vibntf::num_hops(257, 256) == 3);
  CHECK(vibntf::num_hops(88200, 441) == 201);
}

TEST_CASE("paper-scale shape: 2 s at 44.1 kHz is 513 x 346") {
  const vibntf::AudioBuffer x = random_buffer(88200, 11);
  const vibntf::Spectrogram spec = vibntf::stft_forward(x, vibntf::StftConfig{});
  CHECK(spec.bins() == 513);
  CHECK(spec.hops() == 346);
  CHECK(spec.original_len == 88200);
}

TEST_CASE("all-zero input gives all-zero spectrogram and inverse") {
  vibntf::AudioBuffer x;
  x.samples.assign(4000, 0.0);
  const vibntf::Spectrogram spec = vibntf::stft_forward(x, vibntf::StftConfig{});
  CHECK(spec.values.cwiseAbs().maxCoeff() == 0.0);
  const vibntf::AudioBuffer y = vibntf::istft(spec);
  REQUIRE(y.samples.size() == 4000);
  for (double v : y.samples) {
    CHECK(v == 0.0);
  }
}

TEST_CASE("pure 1 kHz tone peaks at bin 23 on interior hops") {
  vibntf::AudioBuffer x;
  x.sample_rate = 44100;
  x.samples.resize(44100);
  for (std::size_t m = 0; m < x.samples.size(); ++m) {
    x.samples[m] = std::sin(2.0 * kPi * 1000.0 * m / 44100.0);
  }
  const vibntf::Spectrogram spec = vibntf::stft_forward(x, vibntf::StftConfig{});
  for (int t = 4; t < spec.hops() - 4; ++t) {
    int argmax = 0;
    spec.values.col(t).cwiseAbs().maxCoeff(&argmax);
    CHECK(argmax == 23);
  }
}

TEST_CASE("roundtrip sweep covers every length up to ten frames") {
  vibntf::StftConfig cfg;
  cfg.fft_len = 16;
  cfg.hop = 4;
  for (std::int64_t len = 1; len <= 160; ++len) {
    const vibntf::AudioBuffer x = random_buffer(len, 100 + len, 8000);
    CHECK(roundtrip_error(x, cfg) < 1e-6);
  }
}

TEST_CASE("roundtrip at the benchmark configuration") {
  const vibntf::AudioBuffer x = random_buffer(88200, 5);
  CHECK(roundtrip_error(x, vibntf::StftConfig{}) < 1e-6);
}

TEST_CASE("istft is linear: masked parts sum to the mixture signal") {
  const vibntf::AudioBuffer x = random_buffer(10000, 42);
  const vibntf::StftConfig cfg;
  const vibntf::Spectrogram spec = vibntf::stft_forward(x, cfg);
  vibntf::Rng rng(77);
  vibntf::Spectrogram a = spec, b = spec;
  for (int t = 0; t < spec.hops(); ++t) {
    for (int f = 0; f < spec.bins(); ++f) {
      const double m = rng.uniform();
      a.values(f, t) *= m;
      b.values(f, t) *= 1.0 - m;
    }
  }
  const vibntf::AudioBuffer xa = vibntf::istft(a);
  const vibntf::AudioBuffer xb = vibntf::istft(b);
  const vibntf::AudioBuffer xm = vibntf::istft(spec);
  for (std::size_t i = 0; i < x.samples.size(); ++i) {
    CHECK(xa.samples[i] + xb.samples[i] ==
          doctest::Approx(xm.samples[i]).epsilon(1e-9));
    CHECK(xm.samples[i] == doctest::Approx(x.samples[i]).epsilon(1e-9));
  }
}

TEST_CASE("normalize_spectrogram basics") {
  vibntf::Spectrogram spec;
  spec.config = vibntf::StftConfig{};
  spec.sample_rate = 44100;
  spec.original_len = 0;

  SUBCASE("single nonzero bin carries all mass") {
    spec.values = Eigen::MatrixXcd::Zero(4, 3);
    spec.values(2, 1) = std::complex<double>(0.0, -3.0);
    const vibntf::ProbGrid p = vibntf::normalize_spectrogram(spec);
    CHECK(p.values(2, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.values.sum() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("uniform magnitudes give 1/(F*T)") {
    spec.values = Eigen::MatrixXcd::Constant(4, 3, std::complex<double>(0.5, 0.0));
    const vibntf::ProbGrid p = vibntf::normalize_spectrogram(spec);
    for (int t = 0; t < 3; ++t) {
      for (int f = 0; f < 4; ++f) {
        CHECK(p.values(f, t) == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
      }
    }
  }

  SUBCASE("scale invariance") {
    spec.values = Eigen::MatrixXcd::Random(6, 5);
    const vibntf::ProbGrid p1 = vibntf::normalize_spectrogram(spec);
    spec.values *= 7.0;
    const vibntf::ProbGrid p2 = vibntf::normalize_spectrogram(spec);
    CHECK((p1.values - p2.values).abs().maxCoeff() < 1e-14);
  }

  SUBCASE("all-zero grid is degenerate") {
    spec.values = Eigen::MatrixXcd::Zero(4, 3);
    CHECK_THROWS_AS(vibntf::normalize_spectrogram(spec),
                    vibntf::DegenerateInputError);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(vibntf::stft_forward(vibntf::AudioBuffer{}, vibntf::StftConfig{}),
                  vibntf::DegenerateInputError);

  vibntf::StftConfig bad;
  bad.fft_len = 1000;  // not a power of two
  CHECK_THROWS_AS(bad.validate(), vibntf::InputError);
  bad.fft_len = 1024;
  bad.hop = 768;  // above fft_len / 2
  CHECK_THROWS_AS(bad.validate(), vibntf::InputError);
  bad.hop = 96;  // does not divide fft_len
  CHECK_THROWS_AS(bad.validate(), vibntf::InputError);

  const vibntf::AudioBuffer x = random_buffer(2000, 1);
  vibntf::Spectrogram spec = vibntf::stft_forward(x, vibntf::StftConfig{});
  spec.values.conservativeResize(spec.values.rows() - 1, spec.values.cols());
  CHECK_THROWS_AS(vibntf::istft(spec), vibntf::ShapeError);
}

}  // TEST_SUITE
