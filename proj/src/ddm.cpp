// src/ddm.cpp

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

#include "vibntf/ddm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "vibntf/errors.hpp"
#include "vibntf/fft.hpp"

namespace vibntf {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Relative determinant threshold for calling the 2x2 system full rank.
constexpr double kRankEps = 1e-12;

}  // namespace

void DdmConfig::validate() const {
  if (num_atoms < 3 || num_atoms % 2 == 0) {
    std::ostringstream os;
    os << "ddm num_atoms must be odd and >= 3, got " << num_atoms;
    throw InputError(os.str());
  }
  if (!(min_freq_eps > 0.0)) {
    throw InputError("ddm min_freq_eps must be positive");
  }
}

void PostprocessConfig::validate() const {
  if (!(energy_percentile >= 0.0 && energy_percentile < 1.0)) {
    throw InputError("fsfr energy_percentile must lie in [0, 1)");
  }
  if (!(clip_mult > 0.0)) {
    throw InputError("fsfr clip_mult must be positive");
  }
  if (!(clip_abs > 0.0)) {
    throw InputError("fsfr clip_abs must be positive");
  }
  if (!(max_amp_mod > 0.0)) {
    throw InputError("fsfr max_amp_mod must be positive");
  }
  if (!(max_residual > 0.0 && max_residual <= 1.0)) {
    throw InputError("fsfr max_residual must lie in (0, 1]");
  }
  if (!(range_mass_eps >= 0.0 && range_mass_eps < 0.5)) {
    throw InputError("fsfr range_mass_eps must lie in [0, 0.5)");
  }
}

FsfrField ddm_estimate(const AudioBuffer& buffer, const StftConfig& stft_config,
                       const DdmConfig& ddm_config) {
  stft_config.validate();
  ddm_config.validate();
  if (buffer.samples.empty()) {
    throw DegenerateInputError("ddm_estimate: empty signal");
  }
  if (buffer.sample_rate <= 0) {
    throw InputError("ddm_estimate: sample rate must be positive");
  }

  const int n = stft_config.fft_len;
  const int hop = stft_config.hop;
  const int num_bins = stft_config.num_bins();
  const int num_frames = num_hops(static_cast<std::int64_t>(buffer.samples.size()), hop);
  const double fs = static_cast<double>(buffer.sample_rate);
  const int num_atoms = ddm_config.num_atoms;
  const int half_atoms = num_atoms / 2;

  const std::vector<double> w = hann_window(n);
  const std::vector<double> wd = hann_window_derivative(n, buffer.sample_rate);
  // Frame-centered time axis in seconds; the estimates refer to this origin.
  std::vector<double> wt(n);
  for (int m = 0; m < n; ++m) {
    const double tau = (m - 0.5 * (n - 1)) / fs;
    wt[m] = w[m] * tau;
  }

  // Center-aligned frames, matching stft_forward: frame t spans
  // [t*hop - n/2, t*hop + n/2) in signal time, zero outside the signal.
  const std::int64_t padded_len =
      static_cast<std::int64_t>(num_frames - 1) * hop + n;
  std::vector<double> padded(static_cast<std::size_t>(padded_len), 0.0);
  std::copy(buffer.samples.begin(), buffer.samples.end(),
            padded.begin() + n / 2);

  FsfrField field;
  field.eta1_im = Eigen::ArrayXXd::Zero(num_bins, num_frames);
  field.eta1_re = Eigen::ArrayXXd::Zero(num_bins, num_frames);
  field.eta2_im = Eigen::ArrayXXd::Zero(num_bins, num_frames);
  field.fsfr = Eigen::ArrayXXd::Zero(num_bins, num_frames);
  field.residual = Eigen::ArrayXXd::Constant(num_bins, num_frames, 1.0);
  field.valid =
      Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(num_bins, num_frames, false);

  Fft fft(n);
  std::vector<std::complex<double>> frame(n), spectrum(n), analytic(n);
  std::vector<std::complex<double>> f1(n), f2(n), f3(n), scratch(n);
  std::vector<std::complex<double>> rhs(num_bins);

  for (int t = 0; t < num_frames; ++t) {
    const std::int64_t offset = static_cast<std::int64_t>(t) * hop;
    for (int m = 0; m < n; ++m) {
      frame[m] = padded[static_cast<std::size_t>(offset + m)];
    }

    // Analytic form of the frame: keep DC and Nyquist, double the positive
    // bins, drop the negative ones.
    fft.forward(frame, spectrum);
    analytic.assign(n, std::complex<double>(0.0, 0.0));
    analytic[0] = spectrum[0];
    analytic[n / 2] = spectrum[n / 2];
    for (int k = 1; k < n / 2; ++k) {
      analytic[k] = 2.0 * spectrum[k];
    }
    fft.inverse(analytic, frame);

    for (int m = 0; m < n; ++m) {
      scratch[m] = frame[m] * w[m];
    }
    fft.forward(scratch, f1);
    for (int m = 0; m < n; ++m) {
      scratch[m] = frame[m] * wt[m];
    }
    fft.forward(scratch, f2);
    for (int m = 0; m < n; ++m) {
      scratch[m] = frame[m] * wd[m];
    }
    fft.forward(scratch, f3);

    // Right-hand side per bin: the window-derivative transform minus the
    // atom's own frequency term, so that rows read
    //   <x, phi_f'> = -eta1 <x, phi_f> - 2 eta2 <x, tau phi_f>.
    // The constant per-bin phase of the half-offset frame origin multiplies
    // every term of a row equally and drops out of the least squares.
    for (int f = 0; f < num_bins; ++f) {
      const double omega = 2.0 * kPi * f * fs / n;
      rhs[f] = f3[f] - std::complex<double>(0.0, omega) * f1[f];
    }

    for (int f0 = 0; f0 < num_bins; ++f0) {
      double g11 = 0.0, g22 = 0.0, yy = 0.0;
      std::complex<double> g12(0.0, 0.0), h1(0.0, 0.0), h2(0.0, 0.0);
      for (int l = 0; l < num_atoms; ++l) {
        const int fl = std::clamp(f0 - half_atoms + l, 0, num_bins - 1);
        const std::complex<double> m0 = f1[fl];
        const std::complex<double> m1 = 2.0 * f2[fl];
        const std::complex<double> y = -rhs[fl];
        g11 += std::norm(m0);
        g22 += std::norm(m1);
        g12 += std::conj(m0) * m1;
        h1 += std::conj(m0) * y;
        h2 += std::conj(m1) * y;
        yy += std::norm(y);
      }
      const double det = g11 * g22 - std::norm(g12);
      if (!(det > kRankEps * g11 * g22) || !(g11 > 0.0) || !(g22 > 0.0)) {
        continue;
      }
      const std::complex<double> eta1 = (g22 * h1 - g12 * h2) / det;
      const std::complex<double> eta2 = (g11 * h2 - std::conj(g12) * h1) / det;
      const double eta1_im = eta1.imag();
      const double eta2_im = eta2.imag();
      if (!std::isfinite(eta1_im) || !std::isfinite(eta2_im)) {
        continue;
      }
      field.eta1_im(f0, t) = eta1_im;
      field.eta1_re(f0, t) = eta1.real();
      field.eta2_im(f0, t) = eta2_im;
      if (yy > 0.0) {
        // ||y - A eta||^2 expanded through the normal-equation terms; tiny
        // negative values are roundoff.
        const double fit = 2.0 * (std::conj(eta1) * h1 + std::conj(eta2) * h2).real() -
                           (std::norm(eta1) * g11 + std::norm(eta2) * g22 +
                            2.0 * (std::conj(eta1) * g12 * eta2).real());
        const double res2 = std::max(yy - fit, 0.0);
        field.residual(f0, t) = std::sqrt(std::min(res2 / yy, 1.0));
      }
      if (std::abs(eta1_im) < ddm_config.min_freq_eps) {
        continue;
      }
      const double ratio = 2.0 * eta2_im / eta1_im;
      if (!std::isfinite(ratio)) {
        continue;
      }
      field.fsfr(f0, t) = ratio;
      field.valid(f0, t) = true;
    }
  }
  return field;
}

FsfrField postprocess_fsfr(const FsfrField& field, const ProbGrid& energy,
                           const PostprocessConfig& config, int sample_rate) {
  config.validate();
  if (sample_rate <= 0) {
    throw InputError("postprocess_fsfr: sample rate must be positive");
  }
  const int num_bins = field.bins();
  const int num_frames = field.hops();
  if (num_bins <= 0 || num_frames <= 0) {
    throw DegenerateInputError("postprocess_fsfr: empty field");
  }
  if (energy.values.rows() != num_bins || energy.values.cols() != num_frames) {
    std::ostringstream os;
    os << "postprocess_fsfr: energy grid is " << energy.values.rows() << "x"
       << energy.values.cols() << ", field is " << num_bins << "x" << num_frames;
    throw ShapeError(os.str());
  }

  // Nearest-rank energy quantile over the whole grid.
  const std::size_t count = static_cast<std::size_t>(num_bins) * num_frames;
  std::vector<double> sorted_energy(energy.values.data(), energy.values.data() + count);
  std::size_t rank = static_cast<std::size_t>(
      std::ceil(config.energy_percentile * static_cast<double>(count)));
  if (rank > 0) {
    --rank;
  }
  std::nth_element(sorted_energy.begin(), sorted_energy.begin() + rank, sorted_energy.end());
  const double energy_floor = sorted_energy[rank];
  const double ratio_limit =
      std::min(config.clip_mult * static_cast<double>(sample_rate), config.clip_abs);

  // Fields built by hand (tests, external data) may lack the diagnostic
  // grids; treat a missing grid as passing its gate everywhere.
  const bool have_residual =
      field.residual.rows() == num_bins && field.residual.cols() == num_frames;
  const bool have_amp_mod =
      field.eta1_re.rows() == num_bins && field.eta1_re.cols() == num_frames;

  std::vector<std::pair<double, double>> candidates;  // (ratio, energy)
  candidates.reserve(count);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> keep(num_bins, num_frames);
  for (int t = 0; t < num_frames; ++t) {
    for (int f = 0; f < num_bins; ++f) {
      const bool ok = field.valid(f, t) && energy.values(f, t) >= energy_floor &&
                      std::abs(field.fsfr(f, t)) <= ratio_limit &&
                      (!have_amp_mod ||
                       std::abs(field.eta1_re(f, t)) <= config.max_amp_mod) &&
                      (!have_residual ||
                       field.residual(f, t) <= config.max_residual);
      keep(f, t) = ok;
      if (ok) {
        candidates.emplace_back(field.fsfr(f, t), energy.values(f, t));
      }
    }
  }
  if (candidates.empty()) {
    throw DegenerateInputError("postprocess_fsfr: no reliable ratio estimates");
  }

  // Trim stragglers that pass the absolute gates but carry negligible mass:
  // keep only ratios inside the energy-weighted [eps, 1-eps] quantile range.
  if (config.range_mass_eps > 0.0) {
    std::sort(candidates.begin(), candidates.end());
    double total_mass = 0.0;
    for (const auto& [ratio, mass] : candidates) {
      total_mass += mass;
    }
    if (total_mass > 0.0) {
      double lo = candidates.front().first;
      double hi = candidates.back().first;
      double cum = 0.0;
      bool lo_set = false;
      for (const auto& [ratio, mass] : candidates) {
        cum += mass;
        if (!lo_set && cum >= config.range_mass_eps * total_mass) {
          lo = ratio;
          lo_set = true;
        }
        if (cum >= (1.0 - config.range_mass_eps) * total_mass) {
          hi = ratio;
          break;
        }
      }
      for (int t = 0; t < num_frames; ++t) {
        for (int f = 0; f < num_bins; ++f) {
          if (keep(f, t) &&
              (field.fsfr(f, t) < lo || field.fsfr(f, t) > hi)) {
            keep(f, t) = false;
          }
        }
      }
    }
  }

  std::vector<double> survivors;
  survivors.reserve(candidates.size());
  for (int t = 0; t < num_frames; ++t) {
    for (int f = 0; f < num_bins; ++f) {
      if (keep(f, t)) {
        survivors.push_back(field.fsfr(f, t));
      }
    }
  }
  if (survivors.empty()) {
    throw DegenerateInputError("postprocess_fsfr: no reliable ratio estimates");
  }

  const std::size_t mid = survivors.size() / 2;
  std::nth_element(survivors.begin(), survivors.begin() + mid, survivors.end());
  double median = survivors[mid];
  if (survivors.size() % 2 == 0) {
    const double lower =
        *std::max_element(survivors.begin(), survivors.begin() + mid);
    median = 0.5 * (lower + median);
  }

  FsfrField out = field;
  out.valid.setConstant(true);
  for (int t = 0; t < num_frames; ++t) {
    for (int f = 0; f < num_bins; ++f) {
      if (!keep(f, t)) {
        out.fsfr(f, t) = median;
      }
    }
  }
  return out;
}

QuantizedFsfr quantize_fsfr(const FsfrField& field, int num_bins) {
  if (num_bins < 2) {
    throw InputError("quantize_fsfr: need at least two quantization bins");
  }
  const int rows = field.bins();
  const int cols = field.hops();
  if (rows <= 0 || cols <= 0) {
    throw DegenerateInputError("quantize_fsfr: empty field");
  }
  if (!field.valid.all()) {
    throw InputError("quantize_fsfr: field must be fully valid (post-processed)");
  }

  const double lo = field.fsfr.minCoeff();
  const double hi = field.fsfr.maxCoeff();
  QuantizedFsfr q;
  q.num_bins = num_bins;
  q.r_index.resize(rows, cols);
  q.edges.resize(static_cast<std::size_t>(num_bins) + 1);

  if (!(hi > lo)) {
    // Constant field: park everything in the middle bin and synthesize a
    // unit-span grid around the value so the edges stay strictly increasing.
    for (int r = 0; r <= num_bins; ++r) {
      q.edges[r] = lo - 0.5 + static_cast<double>(r) / num_bins;
    }
    q.r_index.setConstant(num_bins / 2);
    return q;
  }

  for (int r = 0; r <= num_bins; ++r) {
    q.edges[r] = lo + (hi - lo) * static_cast<double>(r) / num_bins;
  }
  for (int t = 0; t < cols; ++t) {
    for (int f = 0; f < rows; ++f) {
      const double u = (field.fsfr(f, t) - lo) / (hi - lo);
      int idx = static_cast<int>(std::floor(u * num_bins));
      idx = std::clamp(idx, 0, num_bins - 1);
      q.r_index(f, t) = idx;
    }
  }
  return q;
}

}  // namespace vibntf
