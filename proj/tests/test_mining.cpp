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
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "pearlkit/errors.h"
#include "pearlkit/mining.h"
#include "pearlkit/rng.h"
#include "pearlkit/utf8.h"

using namespace pearlkit;

namespace {

// Quadratic reference implementation, kept independent of the banded
// production code.
size_t naive_levenshtein(const std::vector<uint32_t>& a,
                         const std::vector<uint32_t>& b) {
  std::vector<std::vector<size_t>> d(a.size() + 1,
                                     std::vector<size_t>(b.size() + 1));
  for (size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t sub = d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, sub});
    }
  }
  return d[a.size()][b.size()];
}

std::string random_string(Rng& rng, size_t max_len, uint32_t alphabet) {
  size_t len = rng.index(max_len + 1);
  std::string s;
  for (size_t i = 0; i < len; ++i) {
    s.push_back(static_cast<char>('a' + rng.index(alphabet)));
  }
  return s;
}

}  // namespace

TEST_CASE("levenshtein on hand cases") {
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("abc", "abd") == 1);
  CHECK(levenshtein("abc", "ab") == 1);
  CHECK(levenshtein("abc", "abcd") == 1);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("", "xyz") == 3);
}

TEST_CASE("levenshtein counts code points not bytes") {
  // Two-byte characters: swapping one accent is one edit.
  CHECK(levenshtein("caf\xc3\xa9", "caf\xc3\xa8") == 1);
  CHECK(levenshtein("\xf0\x9f\x98\x80", "") == 1);
}

TEST_CASE("levenshtein agrees with the quadratic reference") {
  Rng rng(71);
  for (int it = 0; it < 300; ++it) {
    // A small alphabet forces frequent partial matches.
    std::string a = random_string(rng, 12, 4);
    std::string b = random_string(rng, 12, 4);
    CHECK(levenshtein(a, b) ==
          naive_levenshtein(utf8_decode(a), utf8_decode(b)));
  }
}

TEST_CASE("banded check agrees with the reference on every budget") {
  Rng rng(72);
  for (int it = 0; it < 300; ++it) {
    std::vector<uint32_t> a = utf8_decode(random_string(rng, 10, 3));
    std::vector<uint32_t> b = utf8_decode(random_string(rng, 10, 3));
    size_t truth = naive_levenshtein(a, b);
    for (size_t d_max = 0; d_max <= 5; ++d_max) {
      CHECK(within_edit_distance(a, b, d_max) == (truth <= d_max));
    }
  }
}

TEST_CASE("edit candidates exclude self and equal strings") {
  std::vector<std::string> phrases = {"acme corp", "acme corp", "acme co",
                                      "totally different", "acme form"};
  std::vector<size_t> cands = edit_candidates(0, phrases, 3);
  // Index 1 is string-equal, so it is out; 2 and 4 are close; 3 is far.
  CHECK(cands == std::vector<size_t>{2, 4});
}

TEST_CASE("edit candidates apply the length prefilter consistently") {
  Rng rng(73);
  std::vector<std::string> phrases;
  for (int i = 0; i < 40; ++i) phrases.push_back(random_string(rng, 14, 3));
  phrases.push_back("q");  // guard against empty-string corner cases
  phrases.push_back("");
  for (size_t q = 0; q < phrases.size(); ++q) {
    for (size_t d_max : {1, 2, 3}) {
      std::vector<size_t> got = edit_candidates(q, phrases, d_max);
      std::vector<size_t> expect;
      auto qcp = utf8_decode(phrases[q]);
      for (size_t i = 0; i < phrases.size(); ++i) {
        if (i == q || phrases[i] == phrases[q]) continue;
        if (naive_levenshtein(qcp, utf8_decode(phrases[i])) <= d_max) {
          expect.push_back(i);
        }
      }
      CHECK(got == expect);
    }
  }
}

TEST_CASE("hard negative selection keeps low scores in sorted order") {
  Vector query = {1.0, 0.0};
  std::vector<std::string> names = {"keep_b", "keep_a", "drop_high",
                                    "keep_c", "tie"};
  std::vector<Vector> embs = {
      {0.30, std::sqrt(1 - 0.09)},   // keep_b, score 0.30
      {0.10, std::sqrt(1 - 0.01)},   // keep_a, score 0.10
      {0.90, std::sqrt(1 - 0.81)},   // drop_high, above theta
      {0.30, std::sqrt(1 - 0.09)},   // keep_c, score 0.30 (tie with keep_b)
      {-0.50, std::sqrt(1 - 0.25)},  // tie, score -0.50
  };
  auto out = select_hard_negatives(query, names, embs, 0.5, 10);
  REQUIRE(out.size() == 4);
  CHECK(out[0].negative == "tie");
  CHECK(out[1].negative == "keep_a");
  // Equal scores fall back to lexicographic order.
  CHECK(out[2].negative == "keep_b");
  CHECK(out[3].negative == "keep_c");
  CHECK(out[0].score == doctest::Approx(-0.5));

  auto top2 = select_hard_negatives(query, names, embs, 0.5, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].negative == "tie");
  CHECK(top2[1].negative == "keep_a");
}

TEST_CASE("mining config validation") {
  MiningConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.theta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.theta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = MiningConfig{};
  cfg.k_store = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("mining produces symmetric-looking entries on a toy corpus") {
  EncoderConfig ecfg;
  ecfg.token_dim = 8;
  ecfg.char_dim = 6;
  ecfg.char_hidden_dim = 8;
  ecfg.num_token_buckets = 101;
  ecfg.num_char_buckets = 211;
  ecfg.char_ngram_sizes = {3};
  ModelState model = ModelState::init(ecfg, 55);

  // Random init: nearby strings share n-gram buckets, so their embeddings
  // correlate; far strings mostly do not. The distance gate is what matters.
  std::vector<std::string> phrases = {"acme corp", "acne corp", "acme corps",
                                      "zebra stripes", "zebra stripe"};
  MiningConfig cfg;
  cfg.d_max = 2;
  cfg.theta = 0.99;
  cfg.k_store = 10;
  cfg.threads = 2;
  HardNegativeIndex index = mine_hard_negatives(phrases, model, cfg);

  // Every stored negative must be within the edit budget of its query.
  for (const auto& [query, entries] : index) {
    for (const auto& e : entries) {
      CHECK(levenshtein(query, e.negative) <= cfg.d_max);
      CHECK(e.negative != query);
    }
  }
  // "acme corp" and "acne corp" are distance 1 apart; with a permissive
  // theta both directions appear.
  REQUIRE(index.count("acme corp"));
  bool found = false;
  for (const auto& e : index.at("acme corp")) {
    if (e.negative == "acne corp") found = true;
  }
  CHECK(found);
}

TEST_CASE("mining respects theta") {
  EncoderConfig ecfg;
  ecfg.token_dim = 6;
  ecfg.char_dim = 4;
  ecfg.char_hidden_dim = 6;
  ecfg.num_token_buckets = 97;
  ecfg.num_char_buckets = 89;
  ecfg.char_ngram_sizes = {3};
  ModelState model = ModelState::init(ecfg, 56);
  std::vector<std::string> phrases = {"aaa bbb", "aaa bbc", "aaa bbd"};
  MiningConfig strict;
  strict.d_max = 3;
  strict.theta = 1e-6;  // nothing real survives a near-zero ceiling
  strict.k_store = 10;
  HardNegativeIndex none = mine_hard_negatives(phrases, model, strict);
  for (const auto& [query, entries] : none) {
    for (const auto& e : entries) {
      CHECK(e.score <= strict.theta);
    }
  }
}

TEST_CASE("index file round trips") {
  HardNegativeIndex index;
  index["alpha beta"] = {{"alpha bet", -0.125}, {"alpha betz", 0.25}};
  index["zed"] = {{"zeds", 0.0}};
  std::ostringstream os;
  write_hardneg_index(os, index);
  std::string text = os.str();
  // Sorted by phrase, then ascending score.
  CHECK(text.find("alpha beta\talpha bet\t") < text.find("alpha beta\talpha betz\t"));
  CHECK(text.find("zed\t") > text.find("alpha"));

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pearlkit_mining_test";
  fs::create_directories(dir);
  std::string path = (dir / "index.tsv").string();
  save_hardneg_index(index, path);
  HardNegativeIndex back = load_hardneg_index(path);
  REQUIRE(back.size() == 2);
  REQUIRE(back.count("alpha beta"));
  REQUIRE(back.at("alpha beta").size() == 2);
  CHECK(back.at("alpha beta")[0].negative == "alpha bet");
  CHECK(back.at("alpha beta")[0].score == doctest::Approx(-0.125).epsilon(1e-9));
  CHECK(back.at("zed")[0].negative == "zeds");
  fs::remove_all(dir);
}

TEST_CASE("malformed index lines are rejected") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pearlkit_mining_bad";
  fs::create_directories(dir);
  std::string path = (dir / "bad.tsv").string();
  {
    std::ofstream out(path);
    out << "only two\tfields\n";
  }
  CHECK_THROWS_AS(load_hardneg_index(path), FormatError);
  {
    std::ofstream out(path);
    out << "a\tb\tnot_a_number\n";
  }
  CHECK_THROWS_AS(load_hardneg_index(path), FormatError);
  fs::remove_all(dir);
}
