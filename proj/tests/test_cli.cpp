// tests/test_cli.cpp

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

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "vibntf/audio.hpp"
#include "vibntf/wav.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + VIBNTF_BIN_PATH + "\" " + args +
                          " 2>&1";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> chunk;
  while (std::size_t n = fread(chunk.data(), 1, chunk.size(), pipe)) {
    result.output.append(chunk.data(), n);
  }
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("vibntf_cli_" + name);
}

// Flags that keep a full pipeline run under a second.
const char* kTinyFlags =
    " --duration-s 0.5 --sample-rate 16000 --fft-len 512 --hop 128"
    " --r-bins 12 --iterations 10 --klnmf-iterations 10 --num-inits 2"
    " --select-iters 5 --filter-len 64 --jobs 1 --min-partials 3"
    " --max-partials 6";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth renders a readable wav and prints its path") {
  const fs::path out = temp_path("tone.wav");
  const RunResult r = run_cli("synth --f0 330 --partials 4 --depth 0.1"
                              " --rate 5 --duration-s 0.3 --sample-rate 16000"
                              " --seed 7 --out " + out.string());
  CHECK(r.code == 0);
  CHECK(r.output.find(out.string()) != std::string::npos);
  const vibntf::AudioBuffer buf = vibntf::read_wav(out);
  CHECK(buf.sample_rate == 16000);
  CHECK(buf.samples.size() == 4800);
  CHECK(vibntf::peak_abs(buf.samples) == doctest::Approx(0.9).epsilon(1e-6));
  fs::remove(out);
}

TEST_CASE("eval scores estimates against references as json") {
  // Two tones as references; estimates are fixed mixtures of them, so every
  // metric is finite and the permutation is the identity.
  vibntf::AudioBuffer ref0, ref1;
  ref0.sample_rate = ref1.sample_rate = 16000;
  for (int i = 0; i < 8000; ++i) {
    const double tau = i / 16000.0;
    ref0.samples.push_back(0.5 * std::sin(2.0 * 3.141592653589793 * 440.0 * tau));
    ref1.samples.push_back(0.5 * std::sin(2.0 * 3.141592653589793 * 710.0 * tau));
  }
  vibntf::AudioBuffer est0 = ref0, est1 = ref1;
  for (int i = 0; i < 8000; ++i) {
    est0.samples[i] = 0.8 * ref0.samples[i] + 0.2 * ref1.samples[i];
    est1.samples[i] = 0.2 * ref0.samples[i] + 0.8 * ref1.samples[i];
  }
  const fs::path r0 = temp_path("ref0.wav"), r1 = temp_path("ref1.wav");
  const fs::path e0 = temp_path("est0.wav"), e1 = temp_path("est1.wav");
  vibntf::write_wav(r0, ref0);
  vibntf::write_wav(r1, ref1);
  vibntf::write_wav(e0, est0);
  vibntf::write_wav(e1, est1);

  const RunResult r = run_cli("eval --estimates " + e0.string() + " " +
                              e1.string() + " --references " + r0.string() +
                              " " + r1.string() + " --filter-len 64");
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.output);
  REQUIRE(j["sdr_db"].size() == 2);
  REQUIRE(j["permutation"].size() == 2);
  CHECK(j["permutation"][0] == 0);
  CHECK(j["permutation"][1] == 1);
  // ~12 dB of interference was planted (0.8 vs 0.2 amplitude).
  CHECK(double(j["sir_db"][0]) > 6.0);
  CHECK(double(j["sir_db"][0]) < 20.0);
  CHECK(double(j["sdr_db"][0]) > 6.0);

  for (const fs::path& p : {r0, r1, e0, e1}) {
    fs::remove(p);
  }
}

TEST_CASE("experiment-a writes a report and honors flag precedence") {
  // Config file asks for 5 trials; the explicit flag narrows it to 1.
  const fs::path config_path = temp_path("config.json");
  {
    std::ofstream os(config_path);
    os << R"({"trials": 5, "seed": 99})";
  }
  const fs::path out_dir = temp_path("exp_out");
  const RunResult r =
      run_cli("experiment-a --config " + config_path.string() + " --trials 1" +
              kTinyFlags + " --out " + out_dir.string());
  CHECK(r.code == 0);
  CHECK(r.output.find("vibntf  SDR") != std::string::npos);

  std::ifstream is(out_dir / "report.json");
  REQUIRE(is.good());
  const nlohmann::json j = nlohmann::json::parse(is);
  CHECK(j["config"]["trials"] == 1);   // flag wins
  CHECK(j["config"]["seed"] == 99);    // file value survives
  CHECK(j["config"]["num_inits"] == 2);
  CHECK(j["trials"].size() == 1);
  CHECK(fs::exists(out_dir / "trials.csv"));

  fs::remove(config_path);
  fs::remove_all(out_dir);
}

TEST_CASE("separate writes stems for a wav input") {
  const fs::path tone_path = temp_path("sep_in.wav");
  const RunResult synth = run_cli(
      "synth --f0 220 --partials 5 --depth 0.12 --rate 4 --duration-s 0.5"
      " --sample-rate 16000 --out " + tone_path.string());
  REQUIRE(synth.code == 0);

  const fs::path out_dir = temp_path("sep_out");
  const RunResult r = run_cli("separate " + tone_path.string() + kTinyFlags +
                              " --out " + out_dir.string());
  CHECK(r.code == 0);
  CHECK(fs::exists(out_dir / "source_0.wav"));
  CHECK(fs::exists(out_dir / "source_1.wav"));
  CHECK(fs::exists(out_dir / "spectrogram.csv"));
  CHECK(fs::exists(out_dir / "r_index.csv"));
  CHECK(fs::exists(out_dir / "fm_1.csv"));
  CHECK(r.output.find("source_0.wav") != std::string::npos);

  fs::remove(tone_path);
  fs::remove_all(out_dir);
}

TEST_CASE("bad invocations exit nonzero with a diagnostic") {
  CHECK(run_cli("").code != 0);
  CHECK(run_cli("no-such-command").code != 0);

  const RunResult bad_value = run_cli("experiment-a --trials -3" +
                                      std::string(kTinyFlags));
  CHECK(bad_value.code == 1);
  CHECK(bad_value.output.find("trials") != std::string::npos);

  const RunResult missing = run_cli("separate /nonexistent/in.wav");
  CHECK(missing.code != 0);
  CHECK(missing.output.find("error") != std::string::npos);
}

}  // TEST_SUITE
