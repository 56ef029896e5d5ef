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
#include <utility>
#include <vector>

namespace pearlkit {

// Lexical phrase categories, in the order that fixes the label bijection.
enum class LexicalTag : uint8_t { kNP = 0, kVP, kPP, kADVP, kADJP };

// OntoNotes entity labels plus OTHER, again in bijection-fixing order.
enum class EntityType : uint8_t {
  kCardinal = 0,
  kDate,
  kPerson,
  kNorp,
  kGpe,
  kLaw,
  kPercent,
  kOrdinal,
  kMoney,
  kWorkOfArt,
  kFac,
  kTime,
  kQuantity,
  kProduct,
  kLanguage,
  kOrg,
  kLoc,
  kEvent,
  kOther
};

inline constexpr int kNumLexicalTags = 5;
inline constexpr int kNumEntityTypes = 19;
inline constexpr int kNumPhraseTypes = kNumLexicalTags * kNumEntityTypes;
inline constexpr size_t kMaxSurfaceTokens = 64;

LexicalTag parse_lexical_tag(std::string_view s);
EntityType parse_entity_type(std::string_view s);
std::string_view to_string(LexicalTag tag);
std::string_view to_string(EntityType type);

// Row-major index over (lexical tag, entity type): a bijection onto [0, 95).
int label_index(LexicalTag tag, EntityType type);
std::pair<LexicalTag, EntityType> label_components(int index);

struct PhraseRecord {
  std::string surface;
  LexicalTag lexical_tag = LexicalTag::kNP;
  EntityType entity_type = EntityType::kOther;
  uint64_t frequency = 0;

  int label() const { return label_index(lexical_tag, entity_type); }
};

struct Corpus {
  std::vector<PhraseRecord> records;

  size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Parses one JSONL line. The surface is whitespace-canonicalized and must be
// non-empty with at most 64 tokens. Unknown entity strings map to OTHER only
// when coerce_unknown is set; unknown lexical tags always fail.
PhraseRecord parse_phrase_record(std::string_view line,
                                 bool coerce_unknown = false);

std::string serialize_phrase_record(const PhraseRecord& record);

// Reads a JSONL stream. Lines starting with '#' and blank lines are skipped.
// Duplicate surfaces are collapsed to the highest-frequency record (first
// occurrence wins ties and keeps its position).
Corpus read_corpus(std::istream& in, bool coerce_unknown = false);
Corpus load_corpus(const std::string& path, bool coerce_unknown = false);

// Keeps exactly the records with frequency >= min_freq, preserving order.
Corpus filter_by_frequency(const Corpus& corpus, uint64_t min_freq = 2);

}  // namespace pearlkit
