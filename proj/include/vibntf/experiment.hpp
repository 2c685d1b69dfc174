// include/vibntf/experiment.hpp

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

#ifndef VIBNTF_EXPERIMENT_HPP_
#define VIBNTF_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "vibntf/audio.hpp"
#include "vibntf/bss_eval.hpp"
#include "vibntf/ddm.hpp"
#include "vibntf/factorize.hpp"
#include "vibntf/observation.hpp"
#include "vibntf/separate.hpp"
#include "vibntf/stft.hpp"
#include "vibntf/synth.hpp"

namespace vibntf {

// Every knob of the benchmark and of the standalone separation path.  Field
// names double as the flat JSON config keys; the CLI exposes each key as a
// flag with underscores turned into dashes.
struct ExperimentConfig {
  int trials = 500;
  std::uint64_t seed = 0;
  double duration_s = 2.0;
  int sample_rate = 44100;
  StftConfig stft;
  DdmConfig ddm;
  PostprocessConfig postprocess;
  int r_bins = 50;
  int sources = 2;       // S of the tensor model
  int components = 3;    // Z per source
  int iterations = 100;
  bool strict_mm = false;
  int num_inits = 6;      // random restarts per fit, best kept by objective
  int select_iters = 15;  // burn-in iterations each restart gets before selection
  int klnmf_components = 2;
  int klnmf_iterations = 100;
  int filter_len = 512;  // BSS_EVAL allowed-distortion filter taps
  int jobs = 0;          // trial workers; 0 picks the hardware thread count
  SynthRanges synth;

  void validate() const;
};

// Flat JSON file of the keys above; unknown keys are rejected.
ExperimentConfig load_config_file(const std::string& path);
std::string config_to_json_string(const ExperimentConfig& config);

struct VibntfSeparation {
  Spectrogram mix_spec;
  ObservationTensor obs;
  FactorSet factors;
  MaskSet masks;
  SeparationResult separation;
};

struct KlnmfSeparation {
  Spectrogram mix_spec;
  NmfFactorSet factors;
  MaskSet masks;
  SeparationResult separation;
};

// Full unsupervised chain on one mixture: STFT, per-bin FM estimation,
// ratio quantization, tensor factorization, Wiener masking, resynthesis.
VibntfSeparation run_vibntf_pipeline(const AudioBuffer& mixture,
                                     const ExperimentConfig& config,
                                     std::uint64_t init_seed);

// Baseline chain: STFT, matrix factorization with each component taken as a
// source, Wiener masking, resynthesis.
KlnmfSeparation run_klnmf_pipeline(const AudioBuffer& mixture,
                                   const ExperimentConfig& config,
                                   std::uint64_t init_seed);

struct AlgoTrialResult {
  // Indexed by reference source: entry j holds the metrics of the estimate
  // that the best permutation matched to reference j.
  std::vector<double> sdr_db;
  std::vector<double> sir_db;
  std::vector<double> sar_db;
  double wall_ms = 0.0;
};

struct TrialReport {
  int trial = 0;
  std::uint64_t seed = 0;
  std::vector<VibratoParams> source_params;
  AlgoTrialResult vibntf;
  AlgoTrialResult klnmf;
  bool failed = false;
  std::string error;
};

struct AggregateStats {
  double mean = 0.0;
  double ci95 = 0.0;  // 1.96 * stderr of the per-trial means
  int count = 0;      // trials contributing
};

struct AlgoAggregate {
  AggregateStats sdr;
  AggregateStats sir;
  AggregateStats sar;
};

struct ExperimentReport {
  std::vector<TrialReport> trials;
  AlgoAggregate vibntf;
  AlgoAggregate klnmf;
  int trials_failed = 0;
};

// One benchmark trial: two random vibrato voices, mixed at 0 dB, separated
// by both algorithms and scored against the scaled ground-truth sources.
// Deterministic given the trial seed.
TrialReport run_trial(const ExperimentConfig& config, int trial_index);

// All trials (worker pool; per-trial seeding keeps results independent of
// the worker count), then the aggregate statistics.  Per-trial failures are
// recorded in the report, not rethrown.
ExperimentReport run_experiment_a(const ExperimentConfig& config);

// Aggregate + per-trial JSON, and the flat per-trial CSV whose schema is
// documented in the README.
void write_experiment_json(const std::string& path,
                           const ExperimentReport& report,
                           const ExperimentConfig& config);
void write_experiment_csv(const std::string& path,
                          const ExperimentReport& report);

// Separates a WAV file into `sources` stems under out_dir; writes the stems,
// the mixture magnitude spectrogram, the ratio assignment grid, and every
// factor as CSV.  Returns the paths written, stems first.
std::vector<std::string> separate_file(const std::string& input_path,
                                       const std::string& out_dir,
                                       const ExperimentConfig& config);

}  // namespace vibntf

#endif  // VIBNTF_EXPERIMENT_HPP_
