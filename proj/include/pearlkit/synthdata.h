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
#include <string>
#include <utility>
#include <vector>

#include "pearlkit/augment.h"
#include "pearlkit/corpus.h"
#include "pearlkit/evalharness.h"

namespace pearlkit {

// Synthetic alias-group benchmark. Each of the 100 groups carries five
// surfaces: a two-token base name, a typo of it, its token swap, a
// token-disjoint alias, and a typo of the alias. Twenty group pairs are
// deliberately confusable (their name tokens sit within small edit distance
// of each other) so that edit-distance mining has true hard negatives to
// find. Twenty extra frequency-1 decoy records exercise frequency filtering.
struct AliasBenchmark {
  Corpus corpus;  // includes the decoys; filter_by_frequency(2) removes them
  ParaphraseTable paraphrases;  // every group surface -> its group siblings
  SynonymSource synonyms;       // category-word abbreviations
  std::vector<std::string> dictionary;  // the 100 base names
  // Held-out mentions never present in the corpus: unseen typo variants,
  // three quarters derived from the alias surface, one quarter from the
  // base. The second element is the gold base name.
  std::vector<std::pair<std::string, std::string>> queries;
};

AliasBenchmark make_alias_benchmark(uint64_t seed);

// Six entity types, fifty phrases each. A phrase is one type-specific token
// plus two fillers drawn from a shared pool, so surface overlap alone barely
// separates the types and the type supervision has to do the work.
struct TypedBenchmark {
  Corpus corpus;
  ClusteringTask clustering;  // gold classes are the entity types, k = 6
};

TypedBenchmark make_typed_benchmark(uint64_t seed);

// Writes the full fixture tree used by tests and examples:
//   alias/corpus.jsonl, paraphrases.tsv, lexicon.tsv, dictionary.txt,
//   queries.tsv, pairs_{train,dev,test}.tsv, turney.tsv,
//   fuzzy_left.txt, fuzzy_right.tsv
//   typed/corpus.jsonl, clustering.tsv
void write_fixture_tree(const std::string& root, uint64_t seed);

}  // namespace pearlkit
