// tools/main.cpp

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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vibntf/bss_eval.hpp"
#include "vibntf/errors.hpp"
#include "vibntf/experiment.hpp"
#include "vibntf/rng.hpp"
#include "vibntf/synth.hpp"
#include "vibntf/wav.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

// Registers one flag per config key (underscores become dashes) and applies
// exactly the flags the user passed on top of the file-loaded config, so the
// precedence is: defaults, then --config contents, then explicit flags.
class ConfigBinder {
 public:
  void bind(CLI::App* app) {
    app->add_option("--config", config_path_,
                    "flat JSON config file; flags override its keys");

    add(app->add_option("--trials", parsed_.trials, "benchmark trial count"),
        [](const ExpCfg& p, ExpCfg& c) { c.trials = p.trials; });
    add(app->add_option("--seed", parsed_.seed, "master seed"),
        [](const ExpCfg& p, ExpCfg& c) { c.seed = p.seed; });
    add(app->add_option("--duration-s", parsed_.duration_s,
                        "rendered source duration, seconds"),
        [](const ExpCfg& p, ExpCfg& c) { c.duration_s = p.duration_s; });
    add(app->add_option("--sample-rate", parsed_.sample_rate, "sample rate, Hz"),
        [](const ExpCfg& p, ExpCfg& c) { c.sample_rate = p.sample_rate; });
    add(app->add_option("--fft-len", parsed_.stft.fft_len,
                        "STFT frame length (power of two)"),
        [](const ExpCfg& p, ExpCfg& c) { c.stft.fft_len = p.stft.fft_len; });
    add(app->add_option("--hop", parsed_.stft.hop, "STFT hop, samples"),
        [](const ExpCfg& p, ExpCfg& c) { c.stft.hop = p.stft.hop; });
    add(app->add_option("--num-atoms", parsed_.ddm.num_atoms,
                        "DDM least-squares rows (odd)"),
        [](const ExpCfg& p, ExpCfg& c) { c.ddm.num_atoms = p.ddm.num_atoms; });
    add(app->add_option("--min-freq-eps", parsed_.ddm.min_freq_eps,
                        "minimum usable frequency estimate, rad/s"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.ddm.min_freq_eps = p.ddm.min_freq_eps;
        });
    add(app->add_option("--energy-percentile",
                        parsed_.postprocess.energy_percentile,
                        "discard ratio estimates below this energy quantile"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.postprocess.energy_percentile = p.postprocess.energy_percentile;
        });
    add(app->add_option("--clip-mult", parsed_.postprocess.clip_mult,
                        "discard |ratio| above clip_mult * sample_rate"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.postprocess.clip_mult = p.postprocess.clip_mult;
        });
    add(app->add_option("--clip-abs", parsed_.postprocess.clip_abs,
                        "discard |ratio| above this absolute bound (1/s)"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.postprocess.clip_abs = p.postprocess.clip_abs;
        });
    add(app->add_option("--max-amp-mod", parsed_.postprocess.max_amp_mod,
                        "discard ratio estimates whose amplitude "
                        "log-derivative exceeds this (1/s)"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.postprocess.max_amp_mod = p.postprocess.max_amp_mod;
        });
    add(app->add_option("--max-residual", parsed_.postprocess.max_residual,
                        "discard ratio estimates whose relative "
                        "least-squares misfit exceeds this (1 keeps all)"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.postprocess.max_residual = p.postprocess.max_residual;
        });
    add(app->add_option("--range-mass-eps",
                        parsed_.postprocess.range_mass_eps,
                        "trim ratio range to energy-weighted [eps, 1-eps] "
                        "quantiles (0 disables)"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.postprocess.range_mass_eps = p.postprocess.range_mass_eps;
        });
    add(app->add_option("--r-bins", parsed_.r_bins,
                        "modulation-ratio quantization bins"),
        [](const ExpCfg& p, ExpCfg& c) { c.r_bins = p.r_bins; });
    add(app->add_option("--sources", parsed_.sources, "model sources S"),
        [](const ExpCfg& p, ExpCfg& c) { c.sources = p.sources; });
    add(app->add_option("--components", parsed_.components,
                        "components per source Z"),
        [](const ExpCfg& p, ExpCfg& c) { c.components = p.components; });
    add(app->add_option("--iterations", parsed_.iterations,
                        "factorization iterations"),
        [](const ExpCfg& p, ExpCfg& c) { c.iterations = p.iterations; });
    add(app->add_flag("--strict-mm,!--no-strict-mm", parsed_.strict_mm,
                      "recompute the posterior after each factor update"),
        [](const ExpCfg& p, ExpCfg& c) { c.strict_mm = p.strict_mm; });
    add(app->add_option("--num-inits", parsed_.num_inits,
                        "random restarts per fit; the best by objective is kept"),
        [](const ExpCfg& p, ExpCfg& c) { c.num_inits = p.num_inits; });
    add(app->add_option("--select-iters", parsed_.select_iters,
                        "burn-in iterations per restart before selection"),
        [](const ExpCfg& p, ExpCfg& c) { c.select_iters = p.select_iters; });
    add(app->add_option("--klnmf-components", parsed_.klnmf_components,
                        "baseline component count"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.klnmf_components = p.klnmf_components;
        });
    add(app->add_option("--klnmf-iterations", parsed_.klnmf_iterations,
                        "baseline iterations"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.klnmf_iterations = p.klnmf_iterations;
        });
    add(app->add_option("--filter-len", parsed_.filter_len,
                        "evaluation distortion filter taps"),
        [](const ExpCfg& p, ExpCfg& c) { c.filter_len = p.filter_len; });
    add(app->add_option("--jobs", parsed_.jobs,
                        "parallel trial workers (0 = hardware threads)"),
        [](const ExpCfg& p, ExpCfg& c) { c.jobs = p.jobs; });
    add(app->add_option("--base-f0-hz", parsed_.synth.base_f0_hz,
                        "lowest note of the synthesis grid"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.synth.base_f0_hz = p.synth.base_f0_hz;
        });
    add(app->add_option("--num-semitones", parsed_.synth.num_semitones,
                        "width of the synthesis note grid"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.synth.num_semitones = p.synth.num_semitones;
        });
    add(app->add_option("--min-partials", parsed_.synth.min_partials,
                        "minimum drawn partial count"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.synth.min_partials = p.synth.min_partials;
        });
    add(app->add_option("--max-partials", parsed_.synth.max_partials,
                        "maximum drawn partial count"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.synth.max_partials = p.synth.max_partials;
        });
    add(app->add_option("--min-depth", parsed_.synth.min_depth,
                        "minimum vibrato depth"),
        [](const ExpCfg& p, ExpCfg& c) { c.synth.min_depth = p.synth.min_depth; });
    add(app->add_option("--max-depth", parsed_.synth.max_depth,
                        "maximum vibrato depth"),
        [](const ExpCfg& p, ExpCfg& c) { c.synth.max_depth = p.synth.max_depth; });
    add(app->add_option("--min-rate-hz", parsed_.synth.min_rate_hz,
                        "minimum vibrato rate"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.synth.min_rate_hz = p.synth.min_rate_hz;
        });
    add(app->add_option("--max-rate-hz", parsed_.synth.max_rate_hz,
                        "maximum vibrato rate"),
        [](const ExpCfg& p, ExpCfg& c) {
          c.synth.max_rate_hz = p.synth.max_rate_hz;
        });
  }

  vibntf::ExperimentConfig resolve() const {
    vibntf::ExperimentConfig config;
    if (!config_path_.empty()) {
      config = vibntf::load_config_file(config_path_);
    }
    for (const auto& [option, apply] : appliers_) {
      if (option->count() > 0) {
        apply(parsed_, config);
      }
    }
    config.validate();
    return config;
  }

 private:
  using ExpCfg = vibntf::ExperimentConfig;
  using Applier = std::function<void(const ExpCfg&, ExpCfg&)>;

  void add(CLI::Option* option, Applier apply) {
    appliers_.emplace_back(option, std::move(apply));
  }

  ExpCfg parsed_;
  std::string config_path_;
  std::vector<std::pair<CLI::Option*, Applier>> appliers_;
};

int run_experiment_command(const ConfigBinder& binder, const std::string& out_dir) {
  const vibntf::ExperimentConfig config = binder.resolve();
  const vibntf::ExperimentReport report = vibntf::run_experiment_a(config);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  vibntf::write_experiment_json((dir / "report.json").string(), report, config);
  vibntf::write_experiment_csv((dir / "trials.csv").string(), report);

  std::cout << "trials: " << report.trials.size() << " (" << report.trials_failed
            << " failed)\n";
  std::cout << "vibntf  SDR " << report.vibntf.sdr.mean << " +/- "
            << report.vibntf.sdr.ci95 << " dB, SIR " << report.vibntf.sir.mean
            << ", SAR " << report.vibntf.sar.mean << "\n";
  std::cout << "klnmf   SDR " << report.klnmf.sdr.mean << " +/- "
            << report.klnmf.sdr.ci95 << " dB, SIR " << report.klnmf.sir.mean
            << ", SAR " << report.klnmf.sar.mean << "\n";
  std::cout << "report: " << (dir / "report.json").string() << "\n";
  return 0;
}

int run_separate_command(const ConfigBinder& binder, const std::string& input,
                         const std::string& out_dir) {
  const vibntf::ExperimentConfig config = binder.resolve();
  const std::vector<std::string> written =
      vibntf::separate_file(input, out_dir, config);
  for (const std::string& path : written) {
    std::cout << path << "\n";
  }
  return 0;
}

int run_eval_command(const std::vector<std::string>& estimate_paths,
                     const std::vector<std::string>& reference_paths,
                     int filter_len) {
  std::vector<vibntf::AudioBuffer> estimates, references;
  for (const std::string& p : estimate_paths) {
    estimates.push_back(vibntf::read_wav(p));
  }
  for (const std::string& p : reference_paths) {
    references.push_back(vibntf::read_wav(p));
  }
  const vibntf::BssMetrics metrics =
      vibntf::bss_eval_sources(estimates, references, filter_len);
  nlohmann::json j;
  j["sdr_db"] = metrics.sdr_db;
  j["sir_db"] = metrics.sir_db;
  j["sar_db"] = metrics.sar_db;
  j["permutation"] = metrics.permutation;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_synth_command(double f0, int partials, double depth, double rate,
                      double duration_s, int sample_rate, std::uint64_t seed,
                      const std::string& out_path) {
  vibntf::VibratoParams params;
  params.f0_hz = f0;
  params.num_partials = partials;
  params.depth = depth;
  params.rate_hz = rate;
  vibntf::Rng rng(seed);
  params.phase0.resize(partials);
  for (int p = 0; p < partials; ++p) {
    params.phase0[p] = 2.0 * kPi * rng.uniform();
  }
  const vibntf::AudioBuffer buffer =
      vibntf::render_vibrato_square(params, duration_s, sample_rate);
  vibntf::write_wav(out_path, buffer);
  std::cout << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-channel source separation by vibrato tensor factorization"};
  app.require_subcommand(1);

  CLI::App* experiment = app.add_subcommand(
      "experiment-a", "synthetic two-voice separation benchmark");
  ConfigBinder experiment_binder;
  experiment_binder.bind(experiment);
  std::string experiment_out = "experiment_a";
  experiment->add_option("--out", experiment_out, "output directory");

  CLI::App* separate =
      app.add_subcommand("separate", "separate a WAV file into stems");
  ConfigBinder separate_binder;
  separate_binder.bind(separate);
  std::string separate_input;
  std::string separate_out = "separated";
  separate->add_option("input", separate_input, "input WAV file")->required();
  separate->add_option("--out", separate_out, "output directory");

  CLI::App* eval =
      app.add_subcommand("eval", "score estimates against references");
  std::vector<std::string> eval_estimates, eval_references;
  int eval_filter_len = 512;
  eval->add_option("--estimates", eval_estimates, "estimated WAV files")
      ->required();
  eval->add_option("--references", eval_references, "reference WAV files")
      ->required();
  eval->add_option("--filter-len", eval_filter_len,
                   "evaluation distortion filter taps");

  CLI::App* synth =
      app.add_subcommand("synth", "render one vibrato square wave to WAV");
  double synth_f0 = 220.0, synth_depth = 0.1, synth_rate = 5.0;
  double synth_duration = 2.0;
  int synth_partials = 10, synth_sample_rate = 44100;
  std::uint64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--f0", synth_f0, "fundamental, Hz");
  synth->add_option("--partials", synth_partials, "odd-harmonic partial count");
  synth->add_option("--depth", synth_depth, "vibrato depth fraction");
  synth->add_option("--rate", synth_rate, "vibrato rate, Hz");
  synth->add_option("--duration-s", synth_duration, "duration, seconds");
  synth->add_option("--sample-rate", synth_sample_rate, "sample rate, Hz");
  synth->add_option("--seed", synth_seed, "phase seed");
  synth->add_option("--out", synth_out, "output WAV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (experiment->parsed()) {
      return run_experiment_command(experiment_binder, experiment_out);
    }
    if (separate->parsed()) {
      return run_separate_command(separate_binder, separate_input, separate_out);
    }
    if (eval->parsed()) {
      return run_eval_command(eval_estimates, eval_references, eval_filter_len);
    }
    if (synth->parsed()) {
      return run_synth_command(synth_f0, synth_partials, synth_depth,
                               synth_rate, synth_duration, synth_sample_rate,
                               synth_seed, synth_out);
    }
  } catch (const vibntf::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const vibntf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
