// Copyright 2026 The Pearlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "pearlkit/rng.h"

using namespace pearlkit;

TEST_CASE("splitmix64 reference values") {
  // Reference outputs for seed 1234567 from the published algorithm.
  // Computed once with an independent implementation and frozen here.
  CHECK(splitmix64(0) == 16294208416658607535ULL);
  CHECK(splitmix64(1) == 10451216379200822465ULL);
  CHECK(splitmix64(1234567) == 6457827717110365317ULL);
}

TEST_CASE("below stays in range and covers all values") {
  Rng rng(42);
  for (uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 100ULL}) {
    std::set<uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
      uint64_t v = rng.below(bound);
      CHECK(v < bound);
      seen.insert(v);
    }
    CHECK(seen.size() == bound);
  }
}

TEST_CASE("below with bound zero returns zero") {
  Rng rng(1);
  CHECK(rng.below(0) == 0);
}

TEST_CASE("below is close to uniform") {
  Rng rng(7);
  const uint64_t bound = 5;
  const int n = 100000;
  std::map<uint64_t, int> counts;
  for (int i = 0; i < n; ++i) counts[rng.below(bound)]++;
  for (const auto& [v, c] : counts) {
    CHECK(v < bound);
    // Expected 20000 per bucket; 5 sigma is about 565.
    CHECK(c > 19000);
    CHECK(c < 21000);
  }
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  Rng rng(3);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("shuffle produces a permutation") {
  Rng rng(11);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  std::vector<int> orig = v;
  rng.shuffle(v);
  CHECK(v != orig);  // astronomically unlikely to be identity
  std::sort(v.begin(), v.end());
  CHECK(v == orig);
}

TEST_CASE("shuffle of all permutations of three is unbiased") {
  Rng rng(13);
  std::map<std::vector<int>, int> counts;
  const int n = 60000;
  for (int i = 0; i < n; ++i) {
    std::vector<int> v = {0, 1, 2};
    rng.shuffle(v);
    counts[v]++;
  }
  CHECK(counts.size() == 6);
  for (const auto& [perm, c] : counts) {
    CHECK(c > 9300);   // expected 10000
    CHECK(c < 10700);
  }
}

TEST_CASE("same seed gives the same stream") {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("named substreams are decorrelated") {
  uint64_t master = 2024;
  CHECK(substream_seed(master, "augment") != substream_seed(master, "shuffle"));
  CHECK(substream_seed(master, "augment", 0) !=
        substream_seed(master, "augment", 1));
  CHECK(substream_seed(master, "augment", 1) !=
        substream_seed(master + 1, "augment", 1));

  // First outputs of sibling streams should not collide either.
  std::set<uint64_t> firsts;
  for (uint64_t c = 0; c < 1000; ++c) {
    firsts.insert(substream(master, "negatives", c).next_u64());
  }
  CHECK(firsts.size() == 1000);
}

TEST_CASE("substream seeds are stable across runs") {
  // These values pin the derivation so a refactor cannot silently change
  // every downstream random decision.
  CHECK(substream_seed(0, "augment", 0) == substream_seed(0, "augment"));
  CHECK(substream_seed(1729, "shuffle", 3) ==
        splitmix64(1729ULL ^ fnv1a64("shuffle") ^
                   (3ULL * 0xd1342543de82ef95ULL)));
}

TEST_CASE("pick selects every element eventually") {
  Rng rng(5);
  std::vector<int> v = {10, 20, 30};
  std::set<int> seen;
  for (int i = 0; i < 200; ++i) seen.insert(rng.pick(v));
  CHECK(seen == std::set<int>{10, 20, 30});
}
