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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "pearlkit/encoder.h"
#include "pearlkit/errors.h"
#include "pearlkit/hashing.h"
#include "pearlkit/rng.h"
#include "pearlkit/utf8.h"

using namespace pearlkit;

namespace {

EncoderConfig tiny_config() {
  EncoderConfig cfg;
  cfg.token_dim = 6;
  cfg.char_dim = 4;
  cfg.char_hidden_dim = 5;
  cfg.num_token_buckets = 37;
  cfg.num_char_buckets = 53;
  cfg.char_ngram_sizes = {3, 4};
  return cfg;
}

}  // namespace

TEST_CASE("char_ngrams slides a window over the wrapped word") {
  auto grams = char_ngrams("cat", {3});
  CHECK(grams == std::vector<std::string>{"<ca", "cat", "at>"});

  auto both = char_ngrams("cat", {3, 4});
  CHECK(both == std::vector<std::string>{"<ca", "cat", "at>", "<cat", "cat>"});
}

TEST_CASE("char_ngrams falls back to the whole wrapped word when short") {
  // "<a>" has length 3, so the 4-gram pass emits the whole form once.
  auto grams = char_ngrams("a", {3, 4});
  CHECK(grams == std::vector<std::string>{"<a>", "<a>"});
}

TEST_CASE("char_ngrams works on multibyte words") {
  // Two code points wrap to four; one 4-gram window.
  auto grams = char_ngrams("\xc3\xa9\xc3\xa9", {4});
  REQUIRE(grams.size() == 1);
  CHECK(utf8_length(grams[0]) == 4);
  CHECK_THROWS_AS(char_ngrams("", {3}), ValidationError);
}

TEST_CASE("hash_bucket is stable and in range") {
  CHECK(hash_bucket("anything", 64) == fnv1a64("anything") % 64);
  for (const char* s : {"a", "b", "token", "<ca"}) {
    CHECK(hash_bucket(s, 17) < 17);
  }
  CHECK_THROWS_AS(hash_bucket("x", 0), ValidationError);
}

TEST_CASE("config validation") {
  EncoderConfig cfg = tiny_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.char_ngram_sizes = {4, 3};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.char_ngram_sizes = {1};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.char_ngram_sizes = {};
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = tiny_config();
  cfg.token_dim = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("init is deterministic and shaped by the config") {
  EncoderConfig cfg = tiny_config();
  ModelState a = ModelState::init(cfg, 123);
  ModelState b = ModelState::init(cfg, 123);
  ModelState c = ModelState::init(cfg, 124);
  CHECK(a.same_weights(b));
  CHECK(!a.same_weights(c));
  CHECK(a.token_table.rows() == cfg.num_token_buckets);
  CHECK(a.token_table.cols() == cfg.token_dim);
  CHECK(a.char_table.rows() == cfg.num_char_buckets);
  CHECK(a.char_table.cols() == cfg.char_hidden_dim);
  CHECK(a.char_projection.rows() == cfg.char_hidden_dim);
  CHECK(a.char_projection.cols() == cfg.char_dim);
  CHECK(a.char_bias.rows() == 1);
  CHECK(a.char_bias.cols() == cfg.char_dim);
  CHECK(a.type_head.rows() == cfg.embed_dim());
  CHECK(a.type_head.cols() == 95);
  for (size_t c2 = 0; c2 < a.char_bias.cols(); ++c2) {
    CHECK(a.char_bias.at(0, c2) == 0.0f);
  }
  CHECK(!a.has_optimizer);
}

TEST_CASE("token branch is the mean of hashed rows") {
  EncoderConfig cfg = tiny_config();
  ModelState state = ModelState::init(cfg, 9);
  EncodeTrace trace;
  Vector u = encode_phrase_tokens("red fox", state, &trace);
  REQUIRE(trace.token_buckets.size() == 2);
  CHECK(trace.token_buckets[0] == hash_bucket("red", cfg.num_token_buckets));
  CHECK(trace.token_buckets[1] == hash_bucket("fox", cfg.num_token_buckets));
  for (size_t d = 0; d < cfg.token_dim; ++d) {
    double expect = 0.5 * (double(state.token_table.at(trace.token_buckets[0], d)) +
                           double(state.token_table.at(trace.token_buckets[1], d)));
    CHECK(u[d] == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("char branch shape and squashing") {
  EncoderConfig cfg = tiny_config();
  ModelState state = ModelState::init(cfg, 10);
  Vector v = encode_chars("red fox", state);
  REQUIRE(v.size() == cfg.char_dim);
  for (double x : v) {
    CHECK(x > -1.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("char branch equals an independently computed forward pass") {
  EncoderConfig cfg = tiny_config();
  ModelState state = ModelState::init(cfg, 11);
  const std::string phrase = "ab cde";

  // Reference: per word, mean the hashed n-gram rows; mean over words;
  // affine map; tanh.
  auto words = split_whitespace(phrase);
  Vector mean(cfg.char_hidden_dim, 0.0);
  for (const auto& w : words) {
    auto grams = char_ngrams(w, cfg.char_ngram_sizes);
    Vector wm(cfg.char_hidden_dim, 0.0);
    for (const auto& g : grams) {
      size_t bucket = hash_bucket(g, cfg.num_char_buckets);
      for (size_t d = 0; d < cfg.char_hidden_dim; ++d) {
        wm[d] += double(state.char_table.at(bucket, d));
      }
    }
    for (double& x : wm) x /= double(grams.size());
    for (size_t d = 0; d < cfg.char_hidden_dim; ++d) mean[d] += wm[d];
  }
  for (double& x : mean) x /= double(words.size());
  Vector expect(cfg.char_dim, 0.0);
  for (size_t c = 0; c < cfg.char_dim; ++c) {
    double acc = double(state.char_bias.at(0, c));
    for (size_t r = 0; r < cfg.char_hidden_dim; ++r) {
      acc += mean[r] * double(state.char_projection.at(r, c));
    }
    expect[c] = std::tanh(acc);
  }

  Vector v = encode_chars(phrase, state);
  REQUIRE(v.size() == expect.size());
  for (size_t c = 0; c < v.size(); ++c) {
    CHECK(v[c] == doctest::Approx(expect[c]).epsilon(1e-12));
  }
}

TEST_CASE("full embedding is unit length and concatenated in order") {
  EncoderConfig cfg = tiny_config();
  ModelState state = ModelState::init(cfg, 12);
  EncodeTrace trace;
  Vector h = encode("quick brown fox", state, &trace);
  REQUIRE(h.size() == cfg.embed_dim());
  double n = 0.0;
  for (double x : h) n += x * x;
  CHECK(std::sqrt(n) == doctest::Approx(1.0).epsilon(1e-12));
  // h is the normalized concat; direction must match (u, v).
  REQUIRE(trace.concat.size() == cfg.embed_dim());
  double scale = 0.0;
  for (double x : trace.concat) scale += x * x;
  scale = std::sqrt(scale);
  for (size_t d = 0; d < h.size(); ++d) {
    CHECK(trace.concat[d] == doctest::Approx(h[d] * scale).epsilon(1e-9));
  }
  for (size_t d = 0; d < cfg.token_dim; ++d) {
    CHECK(trace.concat[d] == doctest::Approx(trace.u[d]));
  }
  for (size_t d = 0; d < cfg.char_dim; ++d) {
    CHECK(trace.concat[cfg.token_dim + d] == doctest::Approx(trace.v[d]));
  }
}

TEST_CASE("encoding rejects blank input") {
  ModelState state = ModelState::init(tiny_config(), 13);
  CHECK_THROWS_AS(encode("", state), ValidationError);
  CHECK_THROWS_AS(encode("   ", state), ValidationError);
}

TEST_CASE("identical words share buckets so ordering matters only via mean") {
  ModelState state = ModelState::init(tiny_config(), 14);
  Vector a = encode("alpha beta", state);
  Vector b = encode("beta alpha", state);
  // The encoder is a bag of tokens and a bag of words: order insensitive.
  REQUIRE(a.size() == b.size());
  for (size_t d = 0; d < a.size(); ++d) {
    CHECK(a[d] == doctest::Approx(b[d]).epsilon(1e-12));
  }
}

TEST_CASE("encode_backward matches finite differences on all tables") {
  EncoderConfig cfg;
  cfg.token_dim = 4;
  cfg.char_dim = 3;
  cfg.char_hidden_dim = 4;
  cfg.num_token_buckets = 11;
  cfg.num_char_buckets = 13;
  cfg.char_ngram_sizes = {3};
  ModelState state = ModelState::init(cfg, 15);
  const std::string phrase = "ab ba ab";

  Rng rng(99);
  Vector dh(cfg.embed_dim());
  for (double& x : dh) x = rng.uniform(-1.0, 1.0);

  EncodeTrace trace;
  encode(phrase, state, &trace);
  ModelGrads grads(state);
  encode_backward(trace, state, dh, nullptr, &grads);

  auto loss = [&](const ModelState& s) {
    Vector h = encode(phrase, s);
    double l = 0.0;
    for (size_t i = 0; i < h.size(); ++i) l += h[i] * dh[i];
    return l;
  };

  auto check_table = [&](Matrix ModelState::* member,
                         const GradMatrix& analytic) {
    const Matrix& table = state.*member;
    for (size_t r = 0; r < table.rows(); ++r) {
      for (size_t c = 0; c < table.cols(); ++c) {
        ModelState plus = state, minus = state;
        float orig = table.at(r, c);
        (plus.*member).at(r, c) = orig + 1e-3f;
        (minus.*member).at(r, c) = orig - 1e-3f;
        double delta = double((plus.*member).at(r, c)) -
                       double((minus.*member).at(r, c));
        double fd = (loss(plus) - loss(minus)) / delta;
        double got = analytic.at(r, c);
        if (std::abs(fd) < 1e-9 && std::abs(got) < 1e-9) continue;
        CHECK(got == doctest::Approx(fd).epsilon(2e-3));
      }
    }
  };
  check_table(&ModelState::token_table, grads.token_table);
  check_table(&ModelState::char_table, grads.char_table);
  check_table(&ModelState::char_projection, grads.char_projection);
  check_table(&ModelState::char_bias, grads.char_bias);
}

TEST_CASE("checkpoint round trip preserves every bit") {
  EncoderConfig cfg = tiny_config();
  ModelState state = ModelState::init(cfg, 16);
  state.init_optimizer();
  // Give the optimizer some history so nonzero moments round trip too.
  state.opt_token_table.t = 7;
  state.opt_token_table.m.at(0, 0) = 0.25f;
  state.opt_type_head.v.at(3, 3) = 1.5e-4f;

  std::ostringstream os(std::ios::binary);
  write_model(os, state);
  std::istringstream is(os.str(), std::ios::binary);
  ModelState back = read_model(is);

  CHECK(back.config == cfg);
  CHECK(back.same_weights(state));
  CHECK(back.has_optimizer);
  CHECK(back.opt_token_table.t == 7);
  CHECK(back.opt_token_table.m == state.opt_token_table.m);
  CHECK(back.opt_type_head.v == state.opt_type_head.v);

  std::ostringstream os2(std::ios::binary);
  write_model(os2, back);
  CHECK(os.str() == os2.str());
}

TEST_CASE("checkpoint without optimizer stays lean") {
  ModelState state = ModelState::init(tiny_config(), 17);
  std::ostringstream with_os(std::ios::binary), without_os(std::ios::binary);
  write_model(without_os, state);
  state.init_optimizer();
  write_model(with_os, state);
  CHECK(with_os.str().size() > without_os.str().size());
  std::istringstream is(without_os.str(), std::ios::binary);
  CHECK(!read_model(is).has_optimizer);
}

TEST_CASE("corrupt checkpoints are rejected") {
  ModelState state = ModelState::init(tiny_config(), 18);
  std::ostringstream os(std::ios::binary);
  write_model(os, state);
  std::string bytes = os.str();

  {
    std::string bad = bytes;
    bad[0] = 'X';  // wrong magic
    std::istringstream is(bad, std::ios::binary);
    CHECK_THROWS_AS(read_model(is), FormatError);
  }
  {
    std::string bad = bytes;
    bad[8] = 2;  // unsupported version
    std::istringstream is(bad, std::ios::binary);
    CHECK_THROWS_AS(read_model(is), FormatError);
  }
  {
    std::string bad = bytes.substr(0, bytes.size() - 3);  // truncated
    std::istringstream is(bad, std::ios::binary);
    CHECK_THROWS_AS(read_model(is), FormatError);
  }
  {
    std::string bad = bytes + "junk";  // trailing bytes
    std::istringstream is(bad, std::ios::binary);
    CHECK_THROWS_AS(read_model(is), FormatError);
  }
}

TEST_CASE("save and load through the filesystem") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "pearlkit_encoder_test";
  fs::create_directories(dir);
  std::string path = (dir / "model.ckpt").string();
  ModelState state = ModelState::init(tiny_config(), 19);
  save_model(state, path);
  ModelState back = load_model(path);
  CHECK(back.same_weights(state));
  CHECK_THROWS_AS(load_model((dir / "missing.ckpt").string()),
                  ValidationError);
  fs::remove_all(dir);
}
