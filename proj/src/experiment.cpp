// src/experiment.cpp

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

#include "vibntf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "vibntf/csv.hpp"
#include "vibntf/errors.hpp"
#include "vibntf/rng.hpp"
#include "vibntf/wav.hpp"

namespace vibntf {

namespace {

using nlohmann::json;

double wall_ms_since(std::chrono::steady_clock::time_point start) {
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double, std::milli>(elapsed).count();
}

// Reorders per-estimate metrics so entry j describes the estimate matched to
// reference j.
void assign_by_reference(const BssMetrics& metrics, AlgoTrialResult* out) {
  const int count = static_cast<int>(metrics.permutation.size());
  out->sdr_db.assign(count, 0.0);
  out->sir_db.assign(count, 0.0);
  out->sar_db.assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    const int j = metrics.permutation[i];
    out->sdr_db[j] = metrics.sdr_db[i];
    out->sir_db[j] = metrics.sir_db[i];
    out->sar_db[j] = metrics.sar_db[i];
  }
}

// Mean and half-width of the 95% normal-approximation confidence interval
// over per-trial values.
AggregateStats aggregate(const std::vector<double>& values) {
  AggregateStats stats;
  stats.count = static_cast<int>(values.size());
  if (stats.count == 0) {
    return stats;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  stats.mean = sum / stats.count;
  if (stats.count > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - stats.mean) * (v - stats.mean);
    }
    const double sd = std::sqrt(ss / (stats.count - 1));
    stats.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(stats.count));
  }
  return stats;
}

double source_mean(const std::vector<double>& per_source) {
  double sum = 0.0;
  for (double v : per_source) {
    sum += v;
  }
  return sum / static_cast<double>(per_source.size());
}

AlgoAggregate aggregate_algo(const std::vector<TrialReport>& trials,
                             const AlgoTrialResult TrialReport::*member) {
  std::vector<double> sdr, sir, sar;
  for (const TrialReport& t : trials) {
    if (t.failed) {
      continue;
    }
    const AlgoTrialResult& r = t.*member;
    sdr.push_back(source_mean(r.sdr_db));
    sir.push_back(source_mean(r.sir_db));
    sar.push_back(source_mean(r.sar_db));
  }
  AlgoAggregate agg;
  agg.sdr = aggregate(sdr);
  agg.sir = aggregate(sir);
  agg.sar = aggregate(sar);
  return agg;
}

json params_to_json(const VibratoParams& p) {
  return json{{"f0_hz", p.f0_hz},
              {"num_partials", p.num_partials},
              {"depth", p.depth},
              {"rate_hz", p.rate_hz}};
}

json algo_to_json(const AlgoTrialResult& r) {
  return json{{"sdr_db", r.sdr_db},
              {"sir_db", r.sir_db},
              {"sar_db", r.sar_db},
              {"wall_ms", r.wall_ms}};
}

json stats_to_json(const AggregateStats& s) {
  return json{{"mean", s.mean}, {"ci95", s.ci95}, {"count", s.count}};
}

json algo_aggregate_to_json(const AlgoAggregate& a) {
  return json{{"sdr", stats_to_json(a.sdr)},
              {"sir", stats_to_json(a.sir)},
              {"sar", stats_to_json(a.sar)}};
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["duration_s"] = c.duration_s;
  j["sample_rate"] = c.sample_rate;
  j["fft_len"] = c.stft.fft_len;
  j["hop"] = c.stft.hop;
  j["num_atoms"] = c.ddm.num_atoms;
  j["min_freq_eps"] = c.ddm.min_freq_eps;
  j["energy_percentile"] = c.postprocess.energy_percentile;
  j["clip_mult"] = c.postprocess.clip_mult;
  j["clip_abs"] = c.postprocess.clip_abs;
  j["max_amp_mod"] = c.postprocess.max_amp_mod;
  j["max_residual"] = c.postprocess.max_residual;
  j["range_mass_eps"] = c.postprocess.range_mass_eps;
  j["r_bins"] = c.r_bins;
  j["sources"] = c.sources;
  j["components"] = c.components;
  j["iterations"] = c.iterations;
  j["strict_mm"] = c.strict_mm;
  j["num_inits"] = c.num_inits;
  j["select_iters"] = c.select_iters;
  j["klnmf_components"] = c.klnmf_components;
  j["klnmf_iterations"] = c.klnmf_iterations;
  j["filter_len"] = c.filter_len;
  j["jobs"] = c.jobs;
  j["base_f0_hz"] = c.synth.base_f0_hz;
  j["num_semitones"] = c.synth.num_semitones;
  j["min_partials"] = c.synth.min_partials;
  j["max_partials"] = c.synth.max_partials;
  j["min_depth"] = c.synth.min_depth;
  j["max_depth"] = c.synth.max_depth;
  j["min_rate_hz"] = c.synth.min_rate_hz;
  j["max_rate_hz"] = c.synth.max_rate_hz;
  return j;
}

void apply_config_key(const std::string& key, const json& value,
                      ExperimentConfig* c) {
  try {
    if (key == "trials") {
      c->trials = value.get<int>();
    } else if (key == "seed") {
      c->seed = value.get<std::uint64_t>();
    } else if (key == "duration_s") {
      c->duration_s = value.get<double>();
    } else if (key == "sample_rate") {
      c->sample_rate = value.get<int>();
    } else if (key == "fft_len") {
      c->stft.fft_len = value.get<int>();
    } else if (key == "hop") {
      c->stft.hop = value.get<int>();
    } else if (key == "num_atoms") {
      c->ddm.num_atoms = value.get<int>();
    } else if (key == "min_freq_eps") {
      c->ddm.min_freq_eps = value.get<double>();
    } else if (key == "energy_percentile") {
      c->postprocess.energy_percentile = value.get<double>();
    } else if (key == "clip_mult") {
      c->postprocess.clip_mult = value.get<double>();
    } else if (key == "clip_abs") {
      c->postprocess.clip_abs = value.get<double>();
    } else if (key == "max_amp_mod") {
      c->postprocess.max_amp_mod = value.get<double>();
    } else if (key == "max_residual") {
      c->postprocess.max_residual = value.get<double>();
    } else if (key == "range_mass_eps") {
      c->postprocess.range_mass_eps = value.get<double>();
    } else if (key == "r_bins") {
      c->r_bins = value.get<int>();
    } else if (key == "sources") {
      c->sources = value.get<int>();
    } else if (key == "components") {
      c->components = value.get<int>();
    } else if (key == "iterations") {
      c->iterations = value.get<int>();
    } else if (key == "strict_mm") {
      c->strict_mm = value.get<bool>();
    } else if (key == "num_inits") {
      c->num_inits = value.get<int>();
    } else if (key == "select_iters") {
      c->select_iters = value.get<int>();
    } else if (key == "klnmf_components") {
      c->klnmf_components = value.get<int>();
    } else if (key == "klnmf_iterations") {
      c->klnmf_iterations = value.get<int>();
    } else if (key == "filter_len") {
      c->filter_len = value.get<int>();
    } else if (key == "jobs") {
      c->jobs = value.get<int>();
    } else if (key == "base_f0_hz") {
      c->synth.base_f0_hz = value.get<double>();
    } else if (key == "num_semitones") {
      c->synth.num_semitones = value.get<int>();
    } else if (key == "min_partials") {
      c->synth.min_partials = value.get<int>();
    } else if (key == "max_partials") {
      c->synth.max_partials = value.get<int>();
    } else if (key == "min_depth") {
      c->synth.min_depth = value.get<double>();
    } else if (key == "max_depth") {
      c->synth.max_depth = value.get<double>();
    } else if (key == "min_rate_hz") {
      c->synth.min_rate_hz = value.get<double>();
    } else if (key == "max_rate_hz") {
      c->synth.max_rate_hz = value.get<double>();
    } else {
      throw FormatError("unknown config key: " + key);
    }
  } catch (const json::exception&) {
    throw FormatError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (trials < 0) {
    throw InputError("trials must be >= 0");
  }
  if (!(duration_s > 0.0)) {
    throw InputError("duration_s must be positive");
  }
  if (sample_rate <= 0) {
    throw InputError("sample_rate must be positive");
  }
  stft.validate();
  ddm.validate();
  postprocess.validate();
  synth.validate();
  if (r_bins < 2) {
    throw InputError("r_bins must be >= 2");
  }
  if (sources < 1 || components < 1 || klnmf_components < 1) {
    throw InputError("sources and components must be >= 1");
  }
  if (iterations < 1 || klnmf_iterations < 1) {
    throw InputError("iterations must be >= 1");
  }
  if (num_inits < 1 || select_iters < 1) {
    throw InputError("num_inits and select_iters must be >= 1");
  }
  if (filter_len < 1) {
    throw InputError("filter_len must be >= 1");
  }
  if (jobs < 0) {
    throw InputError("jobs must be >= 0 (0 = auto)");
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) {
    throw IoError("cannot open config file: " + path);
  }
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw FormatError("config must be a flat JSON object");
  }
  ExperimentConfig config;
  for (const auto& [key, value] : j.items()) {
    apply_config_key(key, value, &config);
  }
  return config;
}

std::string config_to_json_string(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

VibntfSeparation run_vibntf_pipeline(const AudioBuffer& mixture,
                                     const ExperimentConfig& config,
                                     std::uint64_t init_seed) {
  VibntfSeparation out;
  out.mix_spec = stft_forward(mixture, config.stft);
  const ProbGrid energy = normalize_spectrogram(out.mix_spec);
  const FsfrField raw = ddm_estimate(mixture, config.stft, config.ddm);
  const FsfrField field =
      postprocess_fsfr(raw, energy, config.postprocess, mixture.sample_rate);
  const QuantizedFsfr quantized = quantize_fsfr(field, config.r_bins);
  out.obs = build_observation(energy, quantized);

  FitOptions opts;
  opts.iterations = config.iterations;
  opts.seed = init_seed;
  opts.strict_mm = config.strict_mm;
  opts.num_inits = config.num_inits;
  opts.select_iters = config.select_iters;
  out.factors = vibntf_fit(out.obs, config.sources, config.components, opts);
  out.masks = wiener_masks_vibntf(out.factors, out.obs);
  out.separation = apply_masks(out.mix_spec, out.masks);
  return out;
}

KlnmfSeparation run_klnmf_pipeline(const AudioBuffer& mixture,
                                   const ExperimentConfig& config,
                                   std::uint64_t init_seed) {
  KlnmfSeparation out;
  out.mix_spec = stft_forward(mixture, config.stft);
  const ProbGrid energy = normalize_spectrogram(out.mix_spec);

  FitOptions opts;
  opts.iterations = config.klnmf_iterations;
  opts.seed = init_seed;
  opts.strict_mm = config.strict_mm;
  opts.num_inits = config.num_inits;
  opts.select_iters = config.select_iters;
  out.factors = klnmf_fit(energy, config.klnmf_components, opts);
  out.masks = wiener_masks_klnmf(out.factors);
  out.separation = apply_masks(out.mix_spec, out.masks);
  return out;
}

TrialReport run_trial(const ExperimentConfig& config, int trial_index) {
  TrialReport report;
  report.trial = trial_index;
  report.seed = child_seed(config.seed, static_cast<std::uint64_t>(trial_index));
  try {
    // Sub-streams of the trial seed: one per source's parameters, then
    // factor initialization for each algorithm.
    std::vector<AudioBuffer> sources;
    for (int s = 0; s < config.sources; ++s) {
      Rng rng(child_seed(report.seed, static_cast<std::uint64_t>(s)));
      const VibratoParams params =
          sample_vibrato_params(rng, config.synth, config.sample_rate);
      report.source_params.push_back(params);
      sources.push_back(
          render_vibrato_square(params, config.duration_s, config.sample_rate));
    }
    const MixResult mix = mix_at_0db(sources);
    const std::uint64_t vibntf_seed =
        child_seed(report.seed, static_cast<std::uint64_t>(config.sources));
    const std::uint64_t klnmf_seed =
        child_seed(report.seed, static_cast<std::uint64_t>(config.sources) + 1);

    auto start = std::chrono::steady_clock::now();
    const VibntfSeparation vib =
        run_vibntf_pipeline(mix.mixture, config, vibntf_seed);
    report.vibntf.wall_ms = wall_ms_since(start);
    assign_by_reference(bss_eval_sources(vib.separation.source_signals,
                                         mix.scaled_sources, config.filter_len),
                        &report.vibntf);

    start = std::chrono::steady_clock::now();
    const KlnmfSeparation nmf =
        run_klnmf_pipeline(mix.mixture, config, klnmf_seed);
    report.klnmf.wall_ms = wall_ms_since(start);
    assign_by_reference(bss_eval_sources(nmf.separation.source_signals,
                                         mix.scaled_sources, config.filter_len),
                        &report.klnmf);
  } catch (const std::exception& e) {
    report.failed = true;
    report.error = e.what();
  }
  return report;
}

ExperimentReport run_experiment_a(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.trials.resize(config.trials);
  if (config.trials > 0) {
    int workers = config.jobs;
    if (workers == 0) {
      workers = static_cast<int>(std::thread::hardware_concurrency());
    }
    workers = std::clamp(workers, 1, config.trials);

    std::atomic<int> next{0};
    const auto run = [&]() {
      for (int i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1)) {
        report.trials[i] = run_trial(config, i);
      }
    };
    if (workers == 1) {
      run();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back(run);
      }
      for (std::thread& th : pool) {
        th.join();
      }
    }
  }
  for (const TrialReport& t : report.trials) {
    if (t.failed) {
      ++report.trials_failed;
    }
  }
  report.vibntf = aggregate_algo(report.trials, &TrialReport::vibntf);
  report.klnmf = aggregate_algo(report.trials, &TrialReport::klnmf);
  return report;
}

void write_experiment_json(const std::string& path,
                           const ExperimentReport& report,
                           const ExperimentConfig& config) {
  json j;
  j["config"] = config_to_json(config);
  j["aggregate"] = json{{"vibntf", algo_aggregate_to_json(report.vibntf)},
                        {"klnmf", algo_aggregate_to_json(report.klnmf)},
                        {"trials_total", report.trials.size()},
                        {"trials_failed", report.trials_failed}};
  json trials = json::array();
  for (const TrialReport& t : report.trials) {
    json jt;
    jt["trial"] = t.trial;
    jt["seed"] = t.seed;
    json sources = json::array();
    for (const VibratoParams& p : t.source_params) {
      sources.push_back(params_to_json(p));
    }
    jt["sources"] = sources;
    jt["failed"] = t.failed;
    if (t.failed) {
      jt["error"] = t.error;
    } else {
      jt["vibntf"] = algo_to_json(t.vibntf);
      jt["klnmf"] = algo_to_json(t.klnmf);
    }
    trials.push_back(jt);
  }
  j["trials"] = trials;

  std::ofstream os(path);
  if (!os) {
    throw IoError("cannot open for writing: " + path);
  }
  os << j.dump(2) << "\n";
  if (!os) {
    throw IoError("write failed: " + path);
  }
}

void write_experiment_csv(const std::string& path,
                          const ExperimentReport& report) {
  std::ofstream os(path);
  if (!os) {
    throw IoError("cannot open for writing: " + path);
  }
  os << "trial,seed,src,f0_hz,partials,depth,rate_hz,algo,sdr_db,sir_db,"
        "sar_db,wall_ms\n";
  os.precision(17);
  for (const TrialReport& t : report.trials) {
    if (t.failed) {
      continue;
    }
    for (int algo = 0; algo < 2; ++algo) {
      const AlgoTrialResult& r = algo == 0 ? t.vibntf : t.klnmf;
      const char* name = algo == 0 ? "vibntf" : "klnmf";
      for (std::size_t s = 0; s < t.source_params.size(); ++s) {
        const VibratoParams& p = t.source_params[s];
        os << t.trial << ',' << t.seed << ',' << s << ',' << p.f0_hz << ','
           << p.num_partials << ',' << p.depth << ',' << p.rate_hz << ','
           << name << ',' << r.sdr_db[s] << ',' << r.sir_db[s] << ','
           << r.sar_db[s] << ',' << r.wall_ms << '\n';
      }
    }
  }
  if (!os) {
    throw IoError("write failed: " + path);
  }
}

std::vector<std::string> separate_file(const std::string& input_path,
                                       const std::string& out_dir,
                                       const ExperimentConfig& config) {
  config.validate();
  const AudioBuffer input = read_wav(input_path);
  const VibntfSeparation result =
      run_vibntf_pipeline(input, config, config.seed);

  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::vector<std::string> written;

  for (std::size_t s = 0; s < result.separation.source_signals.size(); ++s) {
    const auto path = dir / ("source_" + std::to_string(s) + ".wav");
    write_wav(path, result.separation.source_signals[s]);
    written.push_back(path.string());
  }

  const auto spec_path = dir / "spectrogram.csv";
  write_csv(spec_path.string(),
            Eigen::MatrixXd(result.mix_spec.values.cwiseAbs()));
  written.push_back(spec_path.string());

  const auto r_path = dir / "r_index.csv";
  write_csv(r_path.string(), result.obs.r_index);
  written.push_back(r_path.string());

  const auto mix_path = dir / "mix.csv";
  write_csv(mix_path.string(), Eigen::MatrixXd(result.factors.mix));
  written.push_back(mix_path.string());

  for (int s = 0; s < result.factors.num_sources(); ++s) {
    const std::string tag = std::to_string(s);
    const auto spectra_path = dir / ("spectra_" + tag + ".csv");
    write_csv(spectra_path.string(), result.factors.spectra[s]);
    written.push_back(spectra_path.string());
    const auto act_path = dir / ("activations_" + tag + ".csv");
    write_csv(act_path.string(), result.factors.activations[s]);
    written.push_back(act_path.string());
    const auto fm_path = dir / ("fm_" + tag + ".csv");
    write_csv(fm_path.string(), result.factors.fm[s]);
    written.push_back(fm_path.string());
  }
  return written;
}

}  // namespace vibntf
