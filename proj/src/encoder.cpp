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

#include "pearlkit/encoder.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pearlkit/errors.h"
#include "pearlkit/hashing.h"
#include "pearlkit/rng.h"
#include "pearlkit/utf8.h"

namespace pearlkit {

void EncoderConfig::validate() const {
  if (token_dim == 0 || char_dim == 0 || char_hidden_dim == 0) {
    throw ValidationError("encoder dimensions must be positive");
  }
  if (num_token_buckets == 0 || num_char_buckets == 0) {
    throw ValidationError("bucket counts must be positive");
  }
  if (char_ngram_sizes.empty()) {
    throw ValidationError("at least one n-gram size required");
  }
  for (uint32_t s : char_ngram_sizes) {
    if (s < 2) throw ValidationError("n-gram sizes must be >= 2");
  }
  if (!std::is_sorted(char_ngram_sizes.begin(), char_ngram_sizes.end())) {
    throw ValidationError("n-gram sizes must be sorted ascending");
  }
}

std::vector<std::string> char_ngrams(const std::string& word,
                                     const std::vector<uint32_t>& sizes) {
  if (word.empty()) {
    throw ValidationError("cannot extract n-grams from an empty word");
  }
  std::vector<uint32_t> cps = utf8_decode(word);
  std::vector<uint32_t> wrapped;
  wrapped.reserve(cps.size() + 2);
  wrapped.push_back('<');
  wrapped.insert(wrapped.end(), cps.begin(), cps.end());
  wrapped.push_back('>');

  std::vector<std::string> grams;
  for (uint32_t k : sizes) {
    if (wrapped.size() < k) {
      grams.push_back(utf8_encode(wrapped));
      continue;
    }
    for (size_t i = 0; i + k <= wrapped.size(); ++i) {
      std::vector<uint32_t> window(wrapped.begin() + i,
                                   wrapped.begin() + i + k);
      grams.push_back(utf8_encode(window));
    }
  }
  return grams;
}

size_t hash_bucket(std::string_view s, size_t num_buckets) {
  if (num_buckets == 0) {
    throw ValidationError("num_buckets must be positive");
  }
  return static_cast<size_t>(fnv1a64(s) % num_buckets);
}

ModelState ModelState::init(const EncoderConfig& config, uint64_t seed) {
  config.validate();
  ModelState state;
  state.config = config;
  state.token_table = Matrix(config.num_token_buckets, config.token_dim);
  state.char_table = Matrix(config.num_char_buckets, config.char_hidden_dim);
  state.char_projection = Matrix(config.char_hidden_dim, config.char_dim);
  state.char_bias = Matrix(1, config.char_dim);
  state.type_head = Matrix(config.embed_dim(), kNumPhraseTypes);

  Rng r0 = substream(seed, "init.token_table");
  xavier_uniform_init(&state.token_table, &r0);
  Rng r1 = substream(seed, "init.char_table");
  xavier_uniform_init(&state.char_table, &r1);
  Rng r2 = substream(seed, "init.char_projection");
  xavier_uniform_init(&state.char_projection, &r2);
  Rng r3 = substream(seed, "init.type_head");
  xavier_uniform_init(&state.type_head, &r3);
  // char_bias stays zero.
  return state;
}

void ModelState::init_optimizer() {
  opt_token_table = AdamState(token_table);
  opt_char_table = AdamState(char_table);
  opt_char_projection = AdamState(char_projection);
  opt_char_bias = AdamState(char_bias);
  opt_type_head = AdamState(type_head);
  has_optimizer = true;
}

void ModelState::validate_shapes() const {
  config.validate();
  auto check = [](bool ok, const char* what) {
    if (!ok) {
      throw FormatError(std::string("model shape mismatch: ") + what);
    }
  };
  check(token_table.rows() == config.num_token_buckets &&
            token_table.cols() == config.token_dim,
        "token_table");
  check(char_table.rows() == config.num_char_buckets &&
            char_table.cols() == config.char_hidden_dim,
        "char_table");
  check(char_projection.rows() == config.char_hidden_dim &&
            char_projection.cols() == config.char_dim,
        "char_projection");
  check(char_bias.rows() == 1 && char_bias.cols() == config.char_dim,
        "char_bias");
  check(type_head.rows() == config.embed_dim() &&
            type_head.cols() == static_cast<size_t>(kNumPhraseTypes),
        "type_head");
}

bool ModelState::same_weights(const ModelState& other) const {
  return config == other.config && token_table == other.token_table &&
         char_table == other.char_table &&
         char_projection == other.char_projection &&
         char_bias == other.char_bias && type_head == other.type_head;
}

namespace {

std::vector<std::string> phrase_tokens(const std::string& phrase) {
  std::vector<std::string> tokens = split_whitespace(phrase);
  if (tokens.empty()) {
    throw ValidationError("cannot encode an empty phrase");
  }
  return tokens;
}

}  // namespace

Vector encode_phrase_tokens(const std::string& phrase, const ModelState& state,
                            EncodeTrace* trace) {
  std::vector<std::string> tokens = phrase_tokens(phrase);
  const Matrix& table = state.token_table;
  Vector u(state.config.token_dim, 0.0);
  std::vector<size_t> buckets;
  buckets.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    size_t b = hash_bucket(tok, state.config.num_token_buckets);
    buckets.push_back(b);
    const float* row = table.data() + b * table.cols();
    for (size_t c = 0; c < table.cols(); ++c) {
      u[c] += static_cast<double>(row[c]);
    }
  }
  double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& x : u) x *= inv;
  if (trace != nullptr) {
    trace->token_buckets = std::move(buckets);
    trace->u = u;
  }
  return u;
}

Vector encode_chars(const std::string& phrase, const ModelState& state,
                    EncodeTrace* trace) {
  std::vector<std::string> tokens = phrase_tokens(phrase);
  const Matrix& table = state.char_table;
  size_t hidden = state.config.char_hidden_dim;

  Vector mean(hidden, 0.0);
  std::vector<std::vector<size_t>> all_buckets;
  all_buckets.reserve(tokens.size());
  for (const std::string& word : tokens) {
    std::vector<std::string> grams =
        char_ngrams(word, state.config.char_ngram_sizes);
    std::vector<size_t> buckets;
    buckets.reserve(grams.size());
    Vector word_mean(hidden, 0.0);
    for (const std::string& g : grams) {
      size_t b = hash_bucket(g, state.config.num_char_buckets);
      buckets.push_back(b);
      const float* row = table.data() + b * table.cols();
      for (size_t c = 0; c < hidden; ++c) {
        word_mean[c] += static_cast<double>(row[c]);
      }
    }
    double inv_g = 1.0 / static_cast<double>(grams.size());
    for (size_t c = 0; c < hidden; ++c) mean[c] += word_mean[c] * inv_g;
    all_buckets.push_back(std::move(buckets));
  }
  double inv_w = 1.0 / static_cast<double>(tokens.size());
  for (double& x : mean) x *= inv_w;

  Vector z = matvec(mean, state.char_projection);
  for (size_t c = 0; c < z.size(); ++c) {
    z[c] += static_cast<double>(state.char_bias.at(0, c));
  }
  Vector v(z.size());
  for (size_t c = 0; c < z.size(); ++c) v[c] = std::tanh(z[c]);

  if (trace != nullptr) {
    trace->word_ngram_buckets = std::move(all_buckets);
    trace->char_mean = std::move(mean);
    trace->v = v;
  }
  return v;
}

Vector encode(const std::string& phrase, const ModelState& state,
              EncodeTrace* trace) {
  EncodeTrace local;
  EncodeTrace* t = trace != nullptr ? trace : &local;
  Vector u = encode_phrase_tokens(phrase, state, t);
  Vector v = encode_chars(phrase, state, t);
  Vector concat;
  concat.reserve(u.size() + v.size());
  concat.insert(concat.end(), u.begin(), u.end());
  concat.insert(concat.end(), v.begin(), v.end());
  Vector h = l2_normalize(concat);
  t->concat = std::move(concat);
  t->h = h;
  return h;
}

ModelGrads::ModelGrads(const ModelState& state)
    : token_table(state.token_table),
      char_table(state.char_table),
      char_projection(state.char_projection),
      char_bias(state.char_bias),
      type_head(state.type_head) {}

void ModelGrads::add(const ModelGrads& other) {
  token_table.add(other.token_table);
  char_table.add(other.char_table);
  char_projection.add(other.char_projection);
  char_bias.add(other.char_bias);
  type_head.add(other.type_head);
}

void ModelGrads::scale(double s) {
  token_table.scale(s);
  char_table.scale(s);
  char_projection.scale(s);
  char_bias.scale(s);
  type_head.scale(s);
}

void encode_backward(const EncodeTrace& trace, const ModelState& state,
                     const Vector& dh, const Vector* d_concat,
                     ModelGrads* grads) {
  size_t m = state.config.token_dim;
  size_t n = state.config.char_dim;
  if (trace.concat.size() != m + n) {
    throw DimensionError("encode_backward: trace missing or wrong dims");
  }

  Vector dc(m + n, 0.0);
  if (!dh.empty()) {
    if (dh.size() != m + n) {
      throw DimensionError("encode_backward: dh has wrong length");
    }
    dc = l2_normalize_backward(trace.concat, dh);
  }
  if (d_concat != nullptr) {
    if (d_concat->size() != m + n) {
      throw DimensionError("encode_backward: d_concat has wrong length");
    }
    for (size_t i = 0; i < m + n; ++i) dc[i] += (*d_concat)[i];
  }

  // Token branch: u was a mean over token rows.
  double inv_t = 1.0 / static_cast<double>(trace.token_buckets.size());
  for (size_t b : trace.token_buckets) {
    double* row = grads->token_table.data.data() + b * m;
    for (size_t c = 0; c < m; ++c) row[c] += dc[c] * inv_t;
  }

  // Char branch: tanh, affine, then the two nested means.
  Vector dv(n);
  for (size_t c = 0; c < n; ++c) {
    double vi = trace.v[c];
    dv[c] = dc[m + c] * (1.0 - vi * vi);
  }
  Vector d_mean;
  matvec_backward(trace.char_mean, state.char_projection, dv, &d_mean,
                  &grads->char_projection);
  for (size_t c = 0; c < n; ++c) grads->char_bias.at(0, c) += dv[c];

  size_t hidden = state.config.char_hidden_dim;
  double inv_w = 1.0 / static_cast<double>(trace.word_ngram_buckets.size());
  for (const std::vector<size_t>& buckets : trace.word_ngram_buckets) {
    double scale = inv_w / static_cast<double>(buckets.size());
    for (size_t b : buckets) {
      double* row = grads->char_table.data.data() + b * hidden;
      for (size_t c = 0; c < hidden; ++c) row[c] += d_mean[c] * scale;
    }
  }
}

namespace {

void write_config(std::ostream& os, const EncoderConfig& cfg) {
  write_u32(os, static_cast<uint32_t>(cfg.token_dim));
  write_u32(os, static_cast<uint32_t>(cfg.char_dim));
  write_u32(os, static_cast<uint32_t>(cfg.char_hidden_dim));
  write_u32(os, static_cast<uint32_t>(cfg.num_token_buckets));
  write_u32(os, static_cast<uint32_t>(cfg.num_char_buckets));
  write_u32(os, static_cast<uint32_t>(cfg.char_ngram_sizes.size()));
  for (uint32_t s : cfg.char_ngram_sizes) write_u32(os, s);
}

EncoderConfig read_config(std::istream& is) {
  EncoderConfig cfg;
  cfg.token_dim = read_u32(is);
  cfg.char_dim = read_u32(is);
  cfg.char_hidden_dim = read_u32(is);
  cfg.num_token_buckets = read_u32(is);
  cfg.num_char_buckets = read_u32(is);
  uint32_t count = read_u32(is);
  if (count == 0 || count > 16) {
    throw FormatError("checkpoint n-gram size count out of range");
  }
  cfg.char_ngram_sizes.clear();
  for (uint32_t i = 0; i < count; ++i) {
    cfg.char_ngram_sizes.push_back(read_u32(is));
  }
  cfg.validate();
  return cfg;
}

void write_adam(std::ostream& os, const AdamState& s) {
  write_u64(os, s.t);
  write_matrix(os, s.m);
  write_matrix(os, s.v);
}

AdamState read_adam(std::istream& is, const Matrix& like) {
  AdamState s;
  s.t = read_u64(is);
  s.m = read_matrix(is);
  s.v = read_matrix(is);
  if (!s.m.same_shape(like) || !s.v.same_shape(like)) {
    throw FormatError("optimizer state shape does not match its parameter");
  }
  return s;
}

}  // namespace

void write_model(std::ostream& os, const ModelState& state) {
  state.validate_shapes();
  os.write(kCheckpointMagic.data(),
           static_cast<std::streamsize>(kCheckpointMagic.size()));
  write_u32(os, kCheckpointVersion);
  write_config(os, state.config);
  write_matrix(os, state.token_table);
  write_matrix(os, state.char_table);
  write_matrix(os, state.char_projection);
  write_matrix(os, state.char_bias);
  write_matrix(os, state.type_head);
  os.put(state.has_optimizer ? '\1' : '\0');
  if (state.has_optimizer) {
    write_adam(os, state.opt_token_table);
    write_adam(os, state.opt_char_table);
    write_adam(os, state.opt_char_projection);
    write_adam(os, state.opt_char_bias);
    write_adam(os, state.opt_type_head);
  }
  if (!os) {
    throw FormatError("failed to write checkpoint stream");
  }
}

ModelState read_model(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string_view(magic, 8) != kCheckpointMagic) {
    throw FormatError("not a model checkpoint (bad magic)");
  }
  uint32_t version = read_u32(is);
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " +
                      std::to_string(version));
  }
  ModelState state;
  state.config = read_config(is);
  state.token_table = read_matrix(is);
  state.char_table = read_matrix(is);
  state.char_projection = read_matrix(is);
  state.char_bias = read_matrix(is);
  state.type_head = read_matrix(is);
  state.validate_shapes();

  int presence = is.get();
  if (presence == std::char_traits<char>::eof()) {
    throw FormatError("checkpoint truncated before optimizer section");
  }
  if (presence == 1) {
    state.has_optimizer = true;
    state.opt_token_table = read_adam(is, state.token_table);
    state.opt_char_table = read_adam(is, state.char_table);
    state.opt_char_projection = read_adam(is, state.char_projection);
    state.opt_char_bias = read_adam(is, state.char_bias);
    state.opt_type_head = read_adam(is, state.type_head);
  } else if (presence != 0) {
    throw FormatError("invalid optimizer presence byte");
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after checkpoint data");
  }
  return state;
}

void save_model(const ModelState& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot open checkpoint for writing: " + path);
  }
  write_model(os, state);
}

ModelState load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open checkpoint: " + path);
  }
  return read_model(is);
}

}  // namespace pearlkit
