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

#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <vector>

#include "pearlkit/hashing.h"

namespace pearlkit {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic RNG with hand-rolled distributions. std::mt19937_64 output is
// fully specified by the standard; the std:: distributions are not, so all
// sampling goes through the methods below to keep runs reproducible across
// compilers and platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Unbiased integer in [0, bound) via rejection sampling.
  uint64_t below(uint64_t bound) {
    if (bound == 0) return 0;
    uint64_t lo = (0 - bound) % bound;  // 2^64 mod bound
    uint64_t r = gen_();
    while (r < lo) r = gen_();
    return r % bound;
  }

  size_t index(size_t n) { return static_cast<size_t>(below(n)); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool chance(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

 private:
  std::mt19937_64 gen_;
};

// Every consumer of randomness draws from a named substream of one master
// seed, so adding a consumer never perturbs the draws seen by the others.
inline uint64_t substream_seed(uint64_t master, std::string_view name,
                               uint64_t counter = 0) {
  return splitmix64(master ^ fnv1a64(name) ^ (counter * 0xd1342543de82ef95ULL));
}

inline Rng substream(uint64_t master, std::string_view name,
                     uint64_t counter = 0) {
  return Rng(substream_seed(master, name, counter));
}

}  // namespace pearlkit
