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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pearlkit/encoder.h"

namespace pearlkit {

// Sample Pearson correlation; both inputs need nonzero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// Normalized mutual information with arithmetic-mean normalization and
// natural-log entropies. Returns 1.0 when both partitions are single
// clusters (zero entropy on both sides).
double nmi(const std::vector<int>& pred, const std::vector<int>& gold);

// Lloyd's algorithm with k-means++ seeding, best inertia over `restarts`
// seeded attempts. Deterministic given seed.
std::vector<int> kmeans(const std::vector<Vector>& vectors, size_t k,
                        uint64_t seed, size_t restarts = 10);

struct LabeledPair {
  std::string a;
  std::string b;
  double label = 0.0;  // binary {0,1} or a graded score in [0,1]
};

struct RetrievalTask {
  std::vector<std::string> dictionary;
  std::vector<std::pair<std::string, size_t>> queries;  // mention, gold index
};

struct ClusteringTask {
  std::vector<std::string> phrases;
  std::vector<int> classes;
  size_t k = 0;
};

struct TurneyItem {
  std::string bigram;
  std::array<std::string, 5> candidates;
  int gold = 0;
};

struct FuzzyJoinTask {
  std::vector<std::string> left;
  std::vector<std::pair<std::string, size_t>> right;  // name, gold left index
};

struct RetrievalOptions {
  // 0 disables the prefilter (exact search). Otherwise each query is scored
  // only against the top-C dictionary entries by shared char-n-gram count;
  // C >= dictionary size reduces to exact search.
  size_t prefilter_c = 0;
  int threads = 0;
};

struct RetrievalResult {
  double accuracy = 0.0;
  std::vector<size_t> predictions;
};

RetrievalResult eval_retrieval(const RetrievalTask& task,
                               const ModelState& model,
                               const RetrievalOptions& opts = {});

// Trains a small MLP (hidden 64, ReLU, sigmoid output, Adam 1e-3, up to 100
// epochs, early stop after 10 epochs without dev improvement) on frozen
// concatenated pair embeddings; returns test accuracy.
double eval_paraphrase(const std::vector<LabeledPair>& train,
                       const std::vector<LabeledPair>& dev,
                       const std::vector<LabeledPair>& test,
                       const ModelState& model, uint64_t seed);

// Pearson between cosine(h_a, h_b) and the graded labels.
double eval_similarity(const std::vector<LabeledPair>& pairs,
                       const ModelState& model);

// Fraction of items whose highest-cosine candidate is the gold one; ties go
// to the lowest candidate index.
double eval_turney(const std::vector<TurneyItem>& items,
                   const ModelState& model);

// Each right-table name is matched to its nearest left-table name.
double eval_fuzzyjoin(const FuzzyJoinTask& task, const ModelState& model,
                      int threads = 0);

// Embeds the task phrases, clusters with kmeans, scores NMI against gold.
double eval_clustering(const ClusteringTask& task, const ModelState& model,
                       uint64_t seed);

// File loaders for the documented task formats.
std::vector<LabeledPair> load_pairs_tsv(const std::string& path);
RetrievalTask load_retrieval_task(const std::string& dictionary_path,
                                  const std::string& queries_path);
ClusteringTask load_clustering_task(const std::string& path);
std::vector<TurneyItem> load_turney_tsv(const std::string& path);
FuzzyJoinTask load_fuzzyjoin_task(const std::string& left_path,
                                  const std::string& right_path);

}  // namespace pearlkit
