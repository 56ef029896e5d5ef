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

#include "pearlkit/augment.h"

#include <fstream>
#include <utility>

#include <json.hpp>

#include "pearlkit/errors.h"
#include "pearlkit/utf8.h"

namespace pearlkit {

namespace {

// Rows of a US QWERTY board. A key's neighbors are the horizontally adjacent
// keys plus the two nearest keys on each vertically adjacent row (the rows
// are offset by roughly half a key, so columns c-1 and c of the row above and
// c and c+1 of the row below line up physically).
constexpr const char* kQwertyRows[3] = {"qwertyuiop", "asdfghjkl", "zxcvbnm"};

void add_neighbor(KeyboardLayout& layout, char key, char neighbor) {
  layout[static_cast<uint32_t>(key)].push_back(
      static_cast<uint32_t>(neighbor));
}

}  // namespace

KeyboardLayout default_qwerty_layout() {
  KeyboardLayout layout;
  for (int r = 0; r < 3; ++r) {
    std::string row = kQwertyRows[r];
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) add_neighbor(layout, row[c], row[c - 1]);
      if (c + 1 < row.size()) add_neighbor(layout, row[c], row[c + 1]);
      if (r > 0) {
        std::string above = kQwertyRows[r - 1];
        for (size_t ac : {c, c + 1}) {
          if (ac < above.size()) add_neighbor(layout, row[c], above[ac]);
        }
      }
      if (r < 2) {
        std::string below = kQwertyRows[r + 1];
        if (c > 0 && c - 1 < below.size()) {
          add_neighbor(layout, row[c], below[c - 1]);
        }
        if (c < below.size()) add_neighbor(layout, row[c], below[c]);
      }
    }
  }
  return layout;
}

KeyboardLayout load_keyboard_layout(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open keyboard layout file: " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("keyboard layout is not valid JSON: ") +
                      e.what());
  }
  if (!j.is_object()) {
    throw FormatError("keyboard layout must be a JSON object");
  }
  KeyboardLayout layout;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<uint32_t> key_cps = utf8_decode(it.key());
    if (key_cps.size() != 1) {
      throw FormatError("keyboard layout key is not a single character: \"" +
                        it.key() + "\"");
    }
    if (!it.value().is_array()) {
      throw FormatError("keyboard layout values must be arrays");
    }
    std::vector<uint32_t> neighbors;
    for (const auto& n : it.value()) {
      if (!n.is_string()) {
        throw FormatError("keyboard layout neighbors must be strings");
      }
      std::vector<uint32_t> cps = utf8_decode(n.get<std::string>());
      if (cps.size() != 1) {
        throw FormatError("keyboard layout neighbor is not a single char");
      }
      neighbors.push_back(cps[0]);
    }
    layout[key_cps[0]] = std::move(neighbors);
  }
  return layout;
}

namespace {

std::map<std::string, std::vector<std::string>> load_tsv_multimap(
    const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError(std::string("cannot open ") + what + " file: " +
                          path);
  }
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(std::string(what) + " line " +
                        std::to_string(line_no) + ": expected two TAB fields");
    }
    std::string key = canonicalize_whitespace(line.substr(0, tab));
    std::string value = canonicalize_whitespace(line.substr(tab + 1));
    if (key.empty() || value.empty()) {
      throw FormatError(std::string(what) + " line " +
                        std::to_string(line_no) + ": empty field");
    }
    out[key].push_back(value);
  }
  return out;
}

}  // namespace

SynonymSource load_synonym_lexicon(const std::string& path) {
  SynonymSource src;
  src.lexicon = load_tsv_multimap(path, "synonym lexicon");
  return src;
}

ParaphraseTable load_paraphrase_table(const std::string& path) {
  return load_tsv_multimap(path, "paraphrase table");
}

void AugmentConfig::validate() const {
  if (enabled_levels.empty()) {
    throw ValidationError("at least one augmentation level must be enabled");
  }
  if (!(synonym_threshold > 0.0 && synonym_threshold <= 1.0)) {
    throw ValidationError("synonym_threshold must be in (0, 1]");
  }
}

std::string char_swap(const std::string& word, Rng& rng) {
  std::vector<uint32_t> cps = utf8_decode(word);
  if (cps.size() < 2) return word;
  size_t i = rng.index(cps.size() - 1);
  std::swap(cps[i], cps[i + 1]);
  return utf8_encode(cps);
}

std::string char_drop(const std::string& word, Rng& rng) {
  std::vector<uint32_t> cps = utf8_decode(word);
  if (cps.size() < 2) return word;
  size_t i = rng.index(cps.size());
  cps.erase(cps.begin() + static_cast<ptrdiff_t>(i));
  return utf8_encode(cps);
}

std::string char_insert(const std::string& word, Rng& rng) {
  std::vector<uint32_t> cps = utf8_decode(word);
  if (cps.empty()) return word;
  size_t i = rng.index(cps.size() + 1);
  uint32_t c = 'a' + static_cast<uint32_t>(rng.index(26));
  cps.insert(cps.begin() + static_cast<ptrdiff_t>(i), c);
  return utf8_encode(cps);
}

std::string char_keyboard_replace(const std::string& word,
                                  const KeyboardLayout& layout, Rng& rng) {
  std::vector<uint32_t> cps = utf8_decode(word);
  std::vector<size_t> replaceable;
  for (size_t i = 0; i < cps.size(); ++i) {
    auto it = layout.find(cps[i]);
    if (it != layout.end() && !it->second.empty()) replaceable.push_back(i);
  }
  if (replaceable.empty()) return word;
  size_t i = replaceable[rng.index(replaceable.size())];
  const std::vector<uint32_t>& neighbors = layout.at(cps[i]);
  cps[i] = neighbors[rng.index(neighbors.size())];
  return utf8_encode(cps);
}

std::string token_swap(const std::string& phrase, Rng& rng) {
  std::vector<std::string> tokens = split_whitespace(phrase);
  if (tokens.size() < 2) return phrase;
  size_t i = rng.index(tokens.size() - 1);
  std::swap(tokens[i], tokens[i + 1]);
  return join_tokens(tokens);
}

std::string synonym_replace(const std::string& phrase,
                            const SynonymSource& src, double threshold,
                            Rng& rng) {
  std::vector<std::string> tokens = split_whitespace(phrase);
  if (tokens.empty()) return phrase;

  // Lexicon route first. Keys may span several tokens, so every contiguous
  // token window is probed.
  struct SpanMatch {
    size_t start;
    size_t len;
    const std::vector<std::string>* options;
  };
  std::vector<SpanMatch> matches;
  for (size_t start = 0; start < tokens.size(); ++start) {
    std::string joined;
    for (size_t len = 1; start + len <= tokens.size(); ++len) {
      if (len > 1) joined.push_back(' ');
      joined += tokens[start + len - 1];
      auto it = src.lexicon.find(joined);
      if (it != src.lexicon.end() && !it->second.empty()) {
        matches.push_back({start, len, &it->second});
      }
    }
  }
  if (!matches.empty()) {
    const SpanMatch& m = matches[rng.index(matches.size())];
    const std::string& replacement =
        (*m.options)[rng.index(m.options->size())];
    std::vector<std::string> out;
    out.insert(out.end(), tokens.begin(),
               tokens.begin() + static_cast<ptrdiff_t>(m.start));
    for (const std::string& t : split_whitespace(replacement)) {
      out.push_back(t);
    }
    out.insert(out.end(),
               tokens.begin() + static_cast<ptrdiff_t>(m.start + m.len),
               tokens.end());
    return join_tokens(out);
  }

  // Embedding route: any table word whose vector is close enough to a token
  // of the phrase can stand in for it.
  struct EmbedMatch {
    size_t token_index;
    const std::string* replacement;
  };
  std::vector<EmbedMatch> candidates;
  for (size_t t = 0; t < tokens.size(); ++t) {
    auto self = src.embedding_table.find(tokens[t]);
    if (self == src.embedding_table.end()) continue;
    for (const auto& [word, vec] : src.embedding_table) {
      if (word == tokens[t]) continue;
      if (cosine(self->second, vec) >= threshold) {
        candidates.push_back({t, &word});
      }
    }
  }
  if (candidates.empty()) return phrase;
  const EmbedMatch& c = candidates[rng.index(candidates.size())];
  tokens[c.token_index] = *c.replacement;
  return join_tokens(tokens);
}

std::string phrase_paraphrase(const std::string& phrase,
                              const ParaphraseTable& table, Rng& rng) {
  auto it = table.find(phrase);
  if (it == table.end() || it->second.empty()) return phrase;
  return it->second[rng.index(it->second.size())];
}

Augmenter::Augmenter(AugmentConfig cfg, SynonymSource synonyms,
                     ParaphraseTable table)
    : cfg_(std::move(cfg)),
      synonyms_(std::move(synonyms)),
      paraphrases_(std::move(table)) {
  cfg_.validate();
}

std::string Augmenter::augment(const std::string& phrase,
                               uint64_t call_index) const {
  if (split_whitespace(phrase).empty()) {
    throw ValidationError("cannot augment an empty phrase");
  }
  Rng rng = substream(cfg_.seed, "augment", call_index);
  AugmentLevel level = cfg_.enabled_levels[rng.index(
      cfg_.enabled_levels.size())];
  switch (level) {
    case AugmentLevel::kCharacter: {
      // Character edits target one token with at least two codepoints.
      std::vector<std::string> tokens = split_whitespace(phrase);
      std::vector<size_t> eligible;
      for (size_t i = 0; i < tokens.size(); ++i) {
        if (utf8_length(tokens[i]) >= 2) eligible.push_back(i);
      }
      if (eligible.empty()) return phrase;
      size_t which = eligible[rng.index(eligible.size())];
      size_t method = rng.index(4);
      std::string& w = tokens[which];
      switch (method) {
        case 0:
          w = char_swap(w, rng);
          break;
        case 1:
          w = char_drop(w, rng);
          break;
        case 2:
          w = char_insert(w, rng);
          break;
        default:
          w = char_keyboard_replace(w, cfg_.keyboard, rng);
          break;
      }
      return join_tokens(tokens);
    }
    case AugmentLevel::kToken: {
      size_t method = rng.index(2);
      if (method == 0) return token_swap(phrase, rng);
      return synonym_replace(phrase, synonyms_, cfg_.synonym_threshold, rng);
    }
    case AugmentLevel::kPhrase:
      return phrase_paraphrase(phrase, paraphrases_, rng);
  }
  return phrase;
}

std::string Augmenter::augment_next(const std::string& phrase) {
  return augment(phrase, counter_++);
}

}  // namespace pearlkit
