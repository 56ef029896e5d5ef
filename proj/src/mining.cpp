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

#include "pearlkit/mining.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "pearlkit/errors.h"
#include "pearlkit/parallel.h"
#include "pearlkit/utf8.h"

namespace pearlkit {

size_t levenshtein(const std::string& a, const std::string& b) {
  std::vector<uint32_t> ca = utf8_decode(a);
  std::vector<uint32_t> cb = utf8_decode(b);
  // Two-row DP over codepoints, unit costs.
  size_t la = ca.size(), lb = cb.size();
  if (la == 0) return lb;
  if (lb == 0) return la;
  std::vector<size_t> prev(lb + 1), curr(lb + 1);
  for (size_t j = 0; j <= lb; ++j) prev[j] = j;
  for (size_t i = 1; i <= la; ++i) {
    curr[0] = i;
    for (size_t j = 1; j <= lb; ++j) {
      size_t sub = prev[j - 1] + (ca[i - 1] == cb[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[lb];
}

bool within_edit_distance(const std::vector<uint32_t>& a,
                          const std::vector<uint32_t>& b, size_t d_max) {
  size_t la = a.size(), lb = b.size();
  size_t diff = la > lb ? la - lb : lb - la;
  if (diff > d_max) return false;
  if (la == 0 || lb == 0) return true;  // diff <= d_max already

  constexpr size_t kInf = std::numeric_limits<size_t>::max() / 2;
  // Row i holds cells j in [i - d_max, i + d_max] clamped to [0, lb].
  std::vector<size_t> prev(lb + 1, kInf), curr(lb + 1, kInf);
  size_t lo0 = 0, hi0 = std::min(lb, d_max);
  for (size_t j = lo0; j <= hi0; ++j) prev[j] = j;
  size_t prev_lo = lo0, prev_hi = hi0;

  for (size_t i = 1; i <= la; ++i) {
    size_t lo = i > d_max ? i - d_max : 0;
    size_t hi = std::min(lb, i + d_max);
    if (lo > hi) return false;
    size_t row_min = kInf;
    for (size_t j = lo; j <= hi; ++j) {
      size_t best = kInf;
      if (j == 0) {
        best = i;
      } else {
        size_t sub = (j - 1 >= prev_lo && j - 1 <= prev_hi) ? prev[j - 1]
                                                            : kInf;
        if (sub < kInf) sub += (a[i - 1] == b[j - 1] ? 0 : 1);
        size_t del = (j >= prev_lo && j <= prev_hi) ? prev[j] + 1 : kInf;
        size_t ins = j - 1 >= lo ? curr[j - 1] + 1 : kInf;
        best = std::min({sub, del, ins});
      }
      curr[j] = best;
      row_min = std::min(row_min, best);
    }
    if (row_min > d_max) return false;
    std::swap(prev, curr);
    prev_lo = lo;
    prev_hi = hi;
  }
  return prev_hi >= lb && prev[lb] <= d_max;
}

std::vector<size_t> edit_candidates(size_t query,
                                    const std::vector<std::string>& phrases,
                                    size_t d_max) {
  if (query >= phrases.size()) {
    throw ValidationError("edit_candidates: query index out of range");
  }
  std::vector<uint32_t> q = utf8_decode(phrases[query]);
  std::vector<size_t> out;
  for (size_t i = 0; i < phrases.size(); ++i) {
    if (i == query || phrases[i] == phrases[query]) continue;
    std::vector<uint32_t> p = utf8_decode(phrases[i]);
    size_t diff = q.size() > p.size() ? q.size() - p.size()
                                      : p.size() - q.size();
    if (diff > d_max) continue;
    if (within_edit_distance(q, p, d_max)) out.push_back(i);
  }
  return out;
}

void MiningConfig::validate() const {
  if (d_max < 1) throw ValidationError("d_max must be >= 1");
  if (!(theta > 0.0 && theta < 1.0)) {
    throw ValidationError("theta must be in (0, 1)");
  }
  if (k_store == 0) throw ValidationError("k_store must be positive");
}

std::vector<HardNegativeEntry> select_hard_negatives(
    const Vector& query_embedding, const std::vector<std::string>& candidates,
    const std::vector<Vector>& candidate_embeddings, double theta,
    size_t k_store) {
  if (candidates.size() != candidate_embeddings.size()) {
    throw ValidationError("candidates and embeddings differ in length");
  }
  std::vector<HardNegativeEntry> kept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double score = dot(query_embedding, candidate_embeddings[i]);
    if (score <= theta) kept.push_back({candidates[i], score});
  }
  std::sort(kept.begin(), kept.end(),
            [](const HardNegativeEntry& x, const HardNegativeEntry& y) {
              if (x.score != y.score) return x.score < y.score;
              return x.negative < y.negative;
            });
  if (kept.size() > k_store) kept.resize(k_store);
  return kept;
}

HardNegativeIndex mine_hard_negatives(const std::vector<std::string>& phrases,
                                      const ModelState& model,
                                      const MiningConfig& cfg) {
  cfg.validate();
  // Embed every phrase once; the same vectors serve as query and candidate
  // embeddings.
  std::vector<Vector> embeddings(phrases.size());
  parallel_for(phrases.size(), cfg.threads, [&](size_t i) {
    embeddings[i] = encode(phrases[i], model);
  });

  std::vector<std::vector<HardNegativeEntry>> results(phrases.size());
  parallel_for(phrases.size(), cfg.threads, [&](size_t i) {
    std::vector<size_t> cand_idx = edit_candidates(i, phrases, cfg.d_max);
    std::vector<std::string> cand;
    std::vector<Vector> cand_emb;
    cand.reserve(cand_idx.size());
    cand_emb.reserve(cand_idx.size());
    for (size_t c : cand_idx) {
      cand.push_back(phrases[c]);
      cand_emb.push_back(embeddings[c]);
    }
    results[i] = select_hard_negatives(embeddings[i], cand, cand_emb,
                                       cfg.theta, cfg.k_store);
  });

  HardNegativeIndex index;
  for (size_t i = 0; i < phrases.size(); ++i) {
    if (!results[i].empty()) index[phrases[i]] = std::move(results[i]);
  }
  return index;
}

void write_hardneg_index(std::ostream& os, const HardNegativeIndex& index) {
  os.precision(9);
  os << std::fixed;
  for (const auto& [phrase, entries] : index) {
    for (const HardNegativeEntry& e : entries) {
      os << phrase << '\t' << e.negative << '\t' << e.score << '\n';
    }
  }
}

void save_hardneg_index(const HardNegativeIndex& index,
                        const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot open hard-negative index for writing: " +
                          path);
  }
  write_hardneg_index(os, index);
}

HardNegativeIndex load_hardneg_index(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open hard-negative index: " + path);
  }
  HardNegativeIndex index;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t t1 = line.find('\t');
    size_t t2 = t1 == std::string::npos ? std::string::npos
                                        : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw FormatError("hard-negative index line " + std::to_string(line_no) +
                        ": expected three TAB fields");
    }
    HardNegativeEntry entry;
    std::string phrase = line.substr(0, t1);
    entry.negative = line.substr(t1 + 1, t2 - t1 - 1);
    std::string score_str = line.substr(t2 + 1);
    try {
      entry.score = std::stod(score_str);
    } catch (const std::exception&) {
      throw FormatError("hard-negative index line " + std::to_string(line_no) +
                        ": bad score \"" + score_str + "\"");
    }
    index[phrase].push_back(std::move(entry));
  }
  return index;
}

}  // namespace pearlkit
