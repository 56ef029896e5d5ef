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
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pearlkit/encoder.h"

namespace pearlkit {

// Unit-cost Levenshtein distance over Unicode codepoints.
size_t levenshtein(const std::string& a, const std::string& b);

// Banded distance check: true iff levenshtein(a, b) <= d_max. Runs the DP
// inside a diagonal band of half-width d_max and abandons early once every
// band cell exceeds the bound, so long dissimilar strings exit fast.
bool within_edit_distance(const std::vector<uint32_t>& a,
                          const std::vector<uint32_t>& b, size_t d_max);

// All phrases (by index into `phrases`) other than `query` itself whose edit
// distance from phrases[query] is <= d_max, in input order. Applies the
// length prefilter before the banded DP.
std::vector<size_t> edit_candidates(size_t query,
                                    const std::vector<std::string>& phrases,
                                    size_t d_max);

struct HardNegativeEntry {
  std::string negative;
  double score = 0.0;
};

// phrase -> surviving negatives, sorted ascending by score (ties by string).
using HardNegativeIndex = std::map<std::string, std::vector<HardNegativeEntry>>;

struct MiningConfig {
  size_t d_max = 3;
  double theta = 0.5;    // cosine ceiling for a candidate to survive
  size_t k_store = 10;   // kept per phrase
  int threads = 0;       // 0 = all cores

  void validate() const;
};

// Scores candidates with the given model and keeps the k_store lowest-cosine
// survivors under theta. Ties on score break lexicographically.
std::vector<HardNegativeEntry> select_hard_negatives(
    const Vector& query_embedding, const std::vector<std::string>& candidates,
    const std::vector<Vector>& candidate_embeddings, double theta,
    size_t k_store);

// Full offline pass: edit-distance retrieval then cosine filtering for every
// phrase, parallel over queries with a deterministic merge.
HardNegativeIndex mine_hard_negatives(const std::vector<std::string>& phrases,
                                      const ModelState& model,
                                      const MiningConfig& cfg);

// TSV phrase<TAB>negative<TAB>cosine, sorted by phrase then score ascending.
void write_hardneg_index(std::ostream& os, const HardNegativeIndex& index);
void save_hardneg_index(const HardNegativeIndex& index,
                        const std::string& path);
HardNegativeIndex load_hardneg_index(const std::string& path);

}  // namespace pearlkit
