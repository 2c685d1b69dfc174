// src/factorize.cpp

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

#include "vibntf/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vibntf/errors.hpp"
#include "vibntf/rng.hpp"

namespace vibntf {

namespace {

// Model cells can underflow to exact zero; their log contribution is floored
// here so objectives stay finite and comparable across iterations.
constexpr double kLogFloor = 1e-300;

void check_dims(const ObservationTensor& obs, const FactorSet& fs) {
  if (obs.bins() != fs.bins() || obs.hops() != fs.hops() ||
      obs.num_r != fs.ratio_bins()) {
    std::ostringstream os;
    os << "factor set (" << fs.bins() << "x" << fs.hops() << "x"
       << fs.ratio_bins() << ") does not match observation (" << obs.bins()
       << "x" << obs.hops() << "x" << obs.num_r << ")";
    throw ShapeError(os.str());
  }
}

struct Marginals {
  Eigen::VectorXd mix;
  std::vector<Eigen::MatrixXd> spectra;
  std::vector<Eigen::MatrixXd> activations;
  std::vector<Eigen::MatrixXd> fm;
};

Marginals zero_marginals(int num_bins, int num_hops, int num_r,
                         int num_sources, int num_components) {
  Marginals m;
  m.mix = Eigen::VectorXd::Zero(num_sources);
  m.spectra.assign(num_sources, Eigen::MatrixXd::Zero(num_bins, num_components));
  m.activations.assign(num_sources, Eigen::MatrixXd::Zero(num_components, num_hops));
  m.fm.assign(num_sources, Eigen::MatrixXd::Zero(num_r, num_hops));
  return m;
}

// One E-step: distribute each observed cell's mass over (z,s) according to
// the current factors, then collect the marginals every factor update needs.
// A cell whose model value underflows to zero is spread uniformly.
Marginals accumulate_marginals(const ObservationTensor& obs,
                               const FactorSet& fs) {
  const int num_bins = fs.bins();
  const int num_hops = fs.hops();
  const int num_r = fs.ratio_bins();
  const int num_sources = fs.num_sources();
  const int num_components = fs.components();
  Marginals m =
      zero_marginals(num_bins, num_hops, num_r, num_sources, num_components);
  std::vector<double> w(static_cast<std::size_t>(num_sources) * num_components);

  for (int t = 0; t < num_hops; ++t) {
    for (int f = 0; f < num_bins; ++f) {
      const double p = obs.energy.values(f, t);
      if (p <= 0.0) {
        continue;
      }
      const int r = obs.r_index(f, t);
      double denom = 0.0;
      std::size_t k = 0;
      for (int s = 0; s < num_sources; ++s) {
        const double base = fs.mix(s) * fs.fm[s](r, t);
        for (int z = 0; z < num_components; ++z, ++k) {
          const double v = base * fs.spectra[s](f, z) * fs.activations[s](z, t);
          w[k] = v;
          denom += v;
        }
      }
      double scale;
      if (denom > 0.0) {
        scale = p / denom;
      } else {
        std::fill(w.begin(), w.end(), 1.0);
        scale = p / static_cast<double>(num_sources * num_components);
      }
      k = 0;
      for (int s = 0; s < num_sources; ++s) {
        double source_mass = 0.0;
        for (int z = 0; z < num_components; ++z, ++k) {
          const double rho = w[k] * scale;
          source_mass += rho;
          m.spectra[s](f, z) += rho;
          m.activations[s](z, t) += rho;
        }
        m.mix(s) += source_mass;
        m.fm[s](r, t) += source_mass;
      }
    }
  }
  return m;
}

Eigen::VectorXd normalized_mix(const Eigen::VectorXd& acc) {
  const double total = acc.sum();
  if (total > 0.0) {
    return acc / total;
  }
  return Eigen::VectorXd::Constant(acc.size(),
                                   1.0 / static_cast<double>(acc.size()));
}

// Columns sum to one; an all-zero column resets to uniform.
Eigen::MatrixXd normalized_columns(const Eigen::MatrixXd& acc) {
  Eigen::MatrixXd out = acc;
  const double uniform = 1.0 / static_cast<double>(acc.rows());
  for (int c = 0; c < acc.cols(); ++c) {
    const double total = acc.col(c).sum();
    if (total > 0.0) {
      out.col(c) /= total;
    } else {
      out.col(c).setConstant(uniform);
    }
  }
  return out;
}

// The whole matrix sums to one; all-zero resets to uniform.
Eigen::MatrixXd normalized_joint(const Eigen::MatrixXd& acc) {
  const double total = acc.sum();
  if (total > 0.0) {
    return acc / total;
  }
  return Eigen::MatrixXd::Constant(
      acc.rows(), acc.cols(),
      1.0 / static_cast<double>(acc.rows() * acc.cols()));
}

std::vector<Eigen::MatrixXd> map_per_source(
    const std::vector<Eigen::MatrixXd>& acc,
    Eigen::MatrixXd (*norm)(const Eigen::MatrixXd&)) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(acc.size());
  for (const Eigen::MatrixXd& a : acc) {
    out.push_back(norm(a));
  }
  return out;
}

}  // namespace

void FitOptions::validate() const {
  if (iterations < 1) {
    throw InputError("fit iterations must be >= 1");
  }
  if (num_inits < 1) {
    throw InputError("fit num_inits must be >= 1");
  }
  if (select_iters < 1) {
    throw InputError("fit select_iters must be >= 1");
  }
}

FactorSet init_factors(int num_bins, int num_hops, int num_r, int num_sources,
                       int num_components, std::uint64_t seed) {
  if (num_bins < 1 || num_hops < 1 || num_r < 1 || num_sources < 1 ||
      num_components < 1) {
    throw InputError("init_factors: all dimensions must be >= 1");
  }
  Rng rng(seed);
  FactorSet fs;

  fs.mix.resize(num_sources);
  for (int s = 0; s < num_sources; ++s) {
    fs.mix(s) = rng.uniform();
  }
  fs.mix /= fs.mix.sum();

  fs.spectra.assign(num_sources, Eigen::MatrixXd(num_bins, num_components));
  for (int s = 0; s < num_sources; ++s) {
    for (int z = 0; z < num_components; ++z) {
      for (int f = 0; f < num_bins; ++f) {
        fs.spectra[s](f, z) = rng.uniform();
      }
    }
    fs.spectra[s] = normalized_columns(fs.spectra[s]);
  }

  fs.activations.assign(num_sources, Eigen::MatrixXd(num_components, num_hops));
  for (int s = 0; s < num_sources; ++s) {
    for (int t = 0; t < num_hops; ++t) {
      for (int z = 0; z < num_components; ++z) {
        fs.activations[s](z, t) = rng.uniform();
      }
    }
    fs.activations[s] = normalized_joint(fs.activations[s]);
  }

  fs.fm.assign(num_sources, Eigen::MatrixXd(num_r, num_hops));
  for (int s = 0; s < num_sources; ++s) {
    for (int t = 0; t < num_hops; ++t) {
      for (int r = 0; r < num_r; ++r) {
        fs.fm[s](r, t) = rng.uniform();
      }
    }
    fs.fm[s] = normalized_columns(fs.fm[s]);
  }
  return fs;
}

NmfFactorSet init_nmf_factors(int num_bins, int num_hops, int num_components,
                              std::uint64_t seed) {
  if (num_bins < 1 || num_hops < 1 || num_components < 1) {
    throw InputError("init_nmf_factors: all dimensions must be >= 1");
  }
  Rng rng(seed);
  NmfFactorSet nmf;
  nmf.spectra.resize(num_bins, num_components);
  for (int z = 0; z < num_components; ++z) {
    for (int f = 0; f < num_bins; ++f) {
      nmf.spectra(f, z) = rng.uniform();
    }
  }
  nmf.spectra = normalized_columns(nmf.spectra);

  nmf.activations.resize(num_components, num_hops);
  for (int t = 0; t < num_hops; ++t) {
    for (int z = 0; z < num_components; ++z) {
      nmf.activations(z, t) = rng.uniform();
    }
  }
  nmf.activations = normalized_joint(nmf.activations);
  return nmf;
}

double vibntf_objective(const ObservationTensor& obs, const FactorSet& fs) {
  check_dims(obs, fs);
  const int num_sources = fs.num_sources();
  // Per-source energy surface sum_z q(f|z,s) q(z,t|s), reused for every r.
  std::vector<Eigen::MatrixXd> surface(num_sources);
  for (int s = 0; s < num_sources; ++s) {
    surface[s] = fs.spectra[s] * fs.activations[s];
  }
  double objective = 0.0;
  for (int t = 0; t < fs.hops(); ++t) {
    for (int f = 0; f < fs.bins(); ++f) {
      const double p = obs.energy.values(f, t);
      if (p <= 0.0) {
        continue;
      }
      const int r = obs.r_index(f, t);
      double q = 0.0;
      for (int s = 0; s < num_sources; ++s) {
        q += fs.mix(s) * fs.fm[s](r, t) * surface[s](f, t);
      }
      objective += p * std::log(std::max(q, kLogFloor));
    }
  }
  return objective;
}

double klnmf_objective(const ProbGrid& p, const NmfFactorSet& nmf) {
  if (p.values.rows() != nmf.bins() || p.values.cols() != nmf.hops()) {
    throw ShapeError("klnmf_objective: grid and factor shapes differ");
  }
  const Eigen::MatrixXd q = nmf.spectra * nmf.activations;
  double objective = 0.0;
  for (int t = 0; t < nmf.hops(); ++t) {
    for (int f = 0; f < nmf.bins(); ++f) {
      const double mass = p.values(f, t);
      if (mass <= 0.0) {
        continue;
      }
      objective += mass * std::log(std::max(q(f, t), kLogFloor));
    }
  }
  return objective;
}

FactorSet vibntf_iterate(const ObservationTensor& obs, const FactorSet& fs,
                         const FitOptions& opts) {
  check_dims(obs, fs);
  FactorSet cur = fs;
  if (!opts.strict_mm) {
    const Marginals m = accumulate_marginals(obs, cur);
    cur.mix = normalized_mix(m.mix);
    cur.spectra = map_per_source(m.spectra, normalized_columns);
    cur.activations = map_per_source(m.activations, normalized_joint);
    cur.fm = map_per_source(m.fm, normalized_columns);
    return cur;
  }
  cur.mix = normalized_mix(accumulate_marginals(obs, cur).mix);
  cur.spectra =
      map_per_source(accumulate_marginals(obs, cur).spectra, normalized_columns);
  cur.activations =
      map_per_source(accumulate_marginals(obs, cur).activations, normalized_joint);
  cur.fm = map_per_source(accumulate_marginals(obs, cur).fm, normalized_columns);
  return cur;
}

NmfFactorSet klnmf_iterate(const ProbGrid& p, const NmfFactorSet& nmf,
                           const FitOptions& opts) {
  if (p.values.rows() != nmf.bins() || p.values.cols() != nmf.hops()) {
    throw ShapeError("klnmf_iterate: grid and factor shapes differ");
  }
  const int num_bins = nmf.bins();
  const int num_hops = nmf.hops();
  const int num_components = nmf.components();
  std::vector<double> w(static_cast<std::size_t>(num_components));

  const auto pass = [&](const NmfFactorSet& cur, Eigen::MatrixXd* spectra_acc,
                        Eigen::MatrixXd* activations_acc) {
    if (spectra_acc != nullptr) {
      spectra_acc->setZero(num_bins, num_components);
    }
    if (activations_acc != nullptr) {
      activations_acc->setZero(num_components, num_hops);
    }
    for (int t = 0; t < num_hops; ++t) {
      for (int f = 0; f < num_bins; ++f) {
        const double mass = p.values(f, t);
        if (mass <= 0.0) {
          continue;
        }
        double denom = 0.0;
        for (int z = 0; z < num_components; ++z) {
          w[z] = cur.spectra(f, z) * cur.activations(z, t);
          denom += w[z];
        }
        double scale;
        if (denom > 0.0) {
          scale = mass / denom;
        } else {
          std::fill(w.begin(), w.end(), 1.0);
          scale = mass / static_cast<double>(num_components);
        }
        for (int z = 0; z < num_components; ++z) {
          const double rho = w[z] * scale;
          if (spectra_acc != nullptr) {
            (*spectra_acc)(f, z) += rho;
          }
          if (activations_acc != nullptr) {
            (*activations_acc)(z, t) += rho;
          }
        }
      }
    }
  };

  NmfFactorSet cur = nmf;
  Eigen::MatrixXd spectra_acc, activations_acc;
  if (!opts.strict_mm) {
    pass(cur, &spectra_acc, &activations_acc);
    cur.spectra = normalized_columns(spectra_acc);
    cur.activations = normalized_joint(activations_acc);
    return cur;
  }
  pass(cur, &spectra_acc, nullptr);
  cur.spectra = normalized_columns(spectra_acc);
  pass(cur, nullptr, &activations_acc);
  cur.activations = normalized_joint(activations_acc);
  return cur;
}

FactorSet vibntf_fit(const ObservationTensor& obs, int num_sources,
                     int num_components, const FitOptions& opts) {
  opts.validate();
  const int burn_in = std::min(opts.select_iters, opts.iterations);
  FactorSet best;
  double best_obj = 0.0;
  for (int k = 0; k < opts.num_inits; ++k) {
    const std::uint64_t seed =
        opts.num_inits == 1 ? opts.seed : child_seed(opts.seed, static_cast<std::uint64_t>(k));
    FactorSet fs = init_factors(obs.bins(), obs.hops(), obs.num_r, num_sources,
                                num_components, seed);
    const int iters = opts.num_inits == 1 ? opts.iterations : burn_in;
    for (int it = 0; it < iters; ++it) {
      fs = vibntf_iterate(obs, fs, opts);
    }
    const double obj = vibntf_objective(obs, fs);
    if (k == 0 || obj > best_obj) {
      best_obj = obj;
      best = std::move(fs);
    }
  }
  if (opts.num_inits > 1) {
    for (int it = burn_in; it < opts.iterations; ++it) {
      best = vibntf_iterate(obs, best, opts);
    }
  }
  return best;
}

NmfFactorSet klnmf_fit(const ProbGrid& p, int num_components,
                       const FitOptions& opts) {
  opts.validate();
  const double total = p.values.sum();
  if (!(std::abs(total - 1.0) <= 1e-6)) {
    throw InputError("klnmf_fit: input grid must be normalized to unit mass");
  }
  const int rows = static_cast<int>(p.values.rows());
  const int cols = static_cast<int>(p.values.cols());
  const int burn_in = std::min(opts.select_iters, opts.iterations);
  NmfFactorSet best;
  double best_obj = 0.0;
  for (int k = 0; k < opts.num_inits; ++k) {
    const std::uint64_t seed =
        opts.num_inits == 1 ? opts.seed : child_seed(opts.seed, static_cast<std::uint64_t>(k));
    NmfFactorSet nmf = init_nmf_factors(rows, cols, num_components, seed);
    const int iters = opts.num_inits == 1 ? opts.iterations : burn_in;
    for (int it = 0; it < iters; ++it) {
      nmf = klnmf_iterate(p, nmf, opts);
    }
    const double obj = klnmf_objective(p, nmf);
    if (k == 0 || obj > best_obj) {
      best_obj = obj;
      best = std::move(nmf);
    }
  }
  if (opts.num_inits > 1) {
    for (int it = burn_in; it < opts.iterations; ++it) {
      best = klnmf_iterate(p, best, opts);
    }
  }
  return best;
}

}  // namespace vibntf
