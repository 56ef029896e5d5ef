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
#include <string>
#include <string_view>
#include <vector>

#include "pearlkit/corpus.h"
#include "pearlkit/numkernel.h"

namespace pearlkit {

struct EncoderConfig {
  size_t token_dim = 64;                       // m
  size_t char_dim = 32;                        // n
  std::vector<uint32_t> char_ngram_sizes = {3, 4};
  size_t num_token_buckets = 1u << 16;
  size_t num_char_buckets = 1u << 16;
  size_t char_hidden_dim = 64;

  size_t embed_dim() const { return token_dim + char_dim; }
  void validate() const;
  bool operator==(const EncoderConfig&) const = default;
};

// N-grams of the marker-wrapped word "<word>", as a multiset. A word whose
// wrapped form is shorter than a size contributes the whole wrapped form
// once for that size.
std::vector<std::string> char_ngrams(const std::string& word,
                                     const std::vector<uint32_t>& sizes);

size_t hash_bucket(std::string_view s, size_t num_buckets);

// All trainable parameters plus optional optimizer state. Two encoders feed
// the embedding: a hashed bag-of-tokens table (u) and a hashed char-n-gram
// pipeline (v), concatenated and normalized into h. The type head maps the
// raw (un-normalized) concatenation to 95 phrase-type logits.
struct ModelState {
  EncoderConfig config;
  Matrix token_table;       // num_token_buckets x m
  Matrix char_table;        // num_char_buckets x char_hidden_dim
  Matrix char_projection;   // char_hidden_dim x n
  Matrix char_bias;         // 1 x n
  Matrix type_head;         // (m+n) x 95

  bool has_optimizer = false;
  AdamState opt_token_table;
  AdamState opt_char_table;
  AdamState opt_char_projection;
  AdamState opt_char_bias;
  AdamState opt_type_head;

  static ModelState init(const EncoderConfig& config, uint64_t seed);
  void init_optimizer();
  void validate_shapes() const;
  bool same_weights(const ModelState& other) const;
};

// Everything the backward pass needs from a forward pass.
struct EncodeTrace {
  std::vector<size_t> token_buckets;                 // one per token
  std::vector<std::vector<size_t>> word_ngram_buckets;  // one list per word
  Vector char_mean;    // mean over words of per-word n-gram means
  Vector u;            // token branch output (dim m)
  Vector v;            // char branch output (dim n)
  Vector concat;       // (u, v) before normalization
  Vector h;            // normalized embedding
};

// Token branch: mean of hashed whole-token rows.
Vector encode_phrase_tokens(const std::string& phrase, const ModelState& state,
                            EncodeTrace* trace = nullptr);

// Char branch: per-word mean of hashed n-gram rows, mean over words, affine
// projection, tanh.
Vector encode_chars(const std::string& phrase, const ModelState& state,
                    EncodeTrace* trace = nullptr);

// h = l2_normalize(concat(u, v)). Unit norm, pure in (phrase, state).
Vector encode(const std::string& phrase, const ModelState& state,
              EncodeTrace* trace = nullptr);

// Gradient accumulator spanning every parameter matrix.
struct ModelGrads {
  explicit ModelGrads(const ModelState& state);
  GradMatrix token_table;
  GradMatrix char_table;
  GradMatrix char_projection;
  GradMatrix char_bias;
  GradMatrix type_head;

  void add(const ModelGrads& other);
  void scale(double s);
};

// Backpropagates dL/dh through normalization, both branches, and the hash
// tables. d_concat, when given, is an extra gradient applied to the raw
// concatenation (the type head consumes (u, v) before normalization).
void encode_backward(const EncodeTrace& trace, const ModelState& state,
                     const Vector& dh, const Vector* d_concat,
                     ModelGrads* grads);

// Checkpoint layout, all little-endian:
//   magic "PEARLKIT" | version u32 (=1)
//   config: token_dim, char_dim, char_hidden_dim, num_token_buckets,
//           num_char_buckets, ngram_count, then each ngram size ascending
//           (all u32)
//   matrices in order: token_table, char_table, char_projection, char_bias,
//           type_head, each as rows u32, cols u32, f32 row-major data
//   optimizer presence byte (0|1); if 1, per matrix in the same order:
//           t u64, m matrix, v matrix (rows/cols headers included)
inline constexpr std::string_view kCheckpointMagic = "PEARLKIT";
inline constexpr uint32_t kCheckpointVersion = 1;

void write_model(std::ostream& os, const ModelState& state);
ModelState read_model(std::istream& is);
void save_model(const ModelState& state, const std::string& path);
ModelState load_model(const std::string& path);

}  // namespace pearlkit
