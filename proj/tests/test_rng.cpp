// tests/test_rng.cpp

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
#include <set>

#include "doctest.h"
#include "vibntf/rng.hpp"

using vibntf::Rng;

TEST_SUITE("rng") {

TEST_CASE("mt19937_64 reference value pins the raw stream") {
  // The standard fixes the 10000th output of the default-seeded engine, so
  // this anchors bit-reproducibility across standard libraries.
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) {
    x = rng.next_u64();
  }
  CHECK(x == 9981545732273789042ULL);
}

TEST_CASE("same seed, same stream; different seed, different stream") {
  Rng a(42), b(42), c(43);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    all_equal = all_equal && (va == b.next_u64());
    any_diff = any_diff || (va != c.next_u64());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform lies in (0, 1] and never returns zero") {
  Rng rng(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  // The draws actually cover the interval.
  CHECK(lo < 1e-3);
  CHECK(hi > 1.0 - 1e-3);
}

TEST_CASE("ranged draws respect their bounds") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform(-2.0, 3.0);
    CHECK(u > -2.0);
    CHECK(u <= 3.0);
    const double g = rng.log_uniform(0.5, 10.0);
    CHECK(g >= 0.5 * (1.0 - 1e-12));
    CHECK(g <= 10.0 * (1.0 + 1e-12));
  }
}

TEST_CASE("uniform_int is inclusive on both ends") {
  Rng rng(13);
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) {
    const int v = rng.uniform_int(3, 7);
    CHECK(v >= 3);
    CHECK(v <= 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);  // every value of {3..7} shows up
  CHECK(rng.uniform_int(4, 4) == 4);
}

TEST_CASE("child seeds are distinct from each other and the master") {
  const std::uint64_t master = 123456789;
  std::set<std::uint64_t> seeds{master};
  for (std::uint64_t i = 0; i < 1000; ++i) {
    CHECK(seeds.insert(vibntf::child_seed(master, i)).second);
  }
  // The rule is a pure function of (master, index).
  CHECK(vibntf::child_seed(master, 5) == vibntf::child_seed(master, 5));
  CHECK(vibntf::child_seed(master, 5) != vibntf::child_seed(master + 1, 5));
}

}  // TEST_SUITE
