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
#include <map>
#include <string>
#include <vector>

#include "pearlkit/numkernel.h"
#include "pearlkit/rng.h"

namespace pearlkit {

// Adjacency map from codepoint to physically neighboring keys. Only keys
// present in the map are eligible for replacement.
using KeyboardLayout = std::map<uint32_t, std::vector<uint32_t>>;

KeyboardLayout default_qwerty_layout();
KeyboardLayout load_keyboard_layout(const std::string& path);

// Ordered maps throughout: candidate enumeration iterates these containers,
// and the iteration order must be identical on every platform.
struct SynonymSource {
  // Key may be a multi-token span ("New York" -> "NYC").
  std::map<std::string, std::vector<std::string>> lexicon;
  std::map<std::string, Vector> embedding_table;
};

using ParaphraseTable = std::map<std::string, std::vector<std::string>>;

SynonymSource load_synonym_lexicon(const std::string& path);
ParaphraseTable load_paraphrase_table(const std::string& path);

enum class AugmentLevel : uint8_t { kCharacter = 0, kToken = 1, kPhrase = 2 };

struct AugmentConfig {
  uint64_t seed = 0;
  double synonym_threshold = 0.7;
  std::vector<AugmentLevel> enabled_levels = {
      AugmentLevel::kCharacter, AugmentLevel::kToken, AugmentLevel::kPhrase};
  KeyboardLayout keyboard = default_qwerty_layout();

  void validate() const;
};

// Character-level edits. Words shorter than the stated minimum are returned
// unchanged as a no-op signal.
std::string char_swap(const std::string& word, Rng& rng);
std::string char_drop(const std::string& word, Rng& rng);
std::string char_insert(const std::string& word, Rng& rng);
std::string char_keyboard_replace(const std::string& word,
                                  const KeyboardLayout& layout, Rng& rng);

// Token-level edits over whitespace tokens.
std::string token_swap(const std::string& phrase, Rng& rng);
std::string synonym_replace(const std::string& phrase,
                            const SynonymSource& src, double threshold,
                            Rng& rng);

// Whole-phrase paraphrase lookup; absent keys are a no-op.
std::string phrase_paraphrase(const std::string& phrase,
                              const ParaphraseTable& table, Rng& rng);

// Applies exactly one augmentation: a level is drawn uniformly from the
// enabled set, then a method uniformly within the level. Deterministic given
// (phrase, cfg.seed, call_index); each call reseeds from that triple so the
// result does not depend on call history.
class Augmenter {
 public:
  Augmenter(AugmentConfig cfg, SynonymSource synonyms, ParaphraseTable table);

  std::string augment(const std::string& phrase, uint64_t call_index) const;

  // Convenience wrapper that advances an internal call counter.
  std::string augment_next(const std::string& phrase);

  const AugmentConfig& config() const { return cfg_; }

 private:
  AugmentConfig cfg_;
  SynonymSource synonyms_;
  ParaphraseTable paraphrases_;
  uint64_t counter_ = 0;
};

}  // namespace pearlkit
