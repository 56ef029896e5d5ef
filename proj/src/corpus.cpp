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

#include "pearlkit/corpus.h"

#include <array>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "pearlkit/errors.h"
#include "pearlkit/utf8.h"

namespace pearlkit {

namespace {

constexpr std::array<std::string_view, kNumLexicalTags> kLexicalNames = {
    "NP", "VP", "PP", "ADVP", "ADJP"};

constexpr std::array<std::string_view, kNumEntityTypes> kEntityNames = {
    "CARDINAL", "DATE",     "PERSON",  "NORP",        "GPE",
    "LAW",      "PERCENT",  "ORDINAL", "MONEY",       "WORK_OF_ART",
    "FAC",      "TIME",     "QUANTITY", "PRODUCT",    "LANGUAGE",
    "ORG",      "LOC",      "EVENT",   "OTHER"};

}  // namespace

LexicalTag parse_lexical_tag(std::string_view s) {
  for (int i = 0; i < kNumLexicalTags; ++i) {
    if (s == kLexicalNames[i]) return static_cast<LexicalTag>(i);
  }
  throw ValidationError("unknown lexical_tag: \"" + std::string(s) + "\"");
}

EntityType parse_entity_type(std::string_view s) {
  for (int i = 0; i < kNumEntityTypes; ++i) {
    if (s == kEntityNames[i]) return static_cast<EntityType>(i);
  }
  throw ValidationError("unknown entity_type: \"" + std::string(s) + "\"");
}

std::string_view to_string(LexicalTag tag) {
  return kLexicalNames[static_cast<size_t>(tag)];
}

std::string_view to_string(EntityType type) {
  return kEntityNames[static_cast<size_t>(type)];
}

int label_index(LexicalTag tag, EntityType type) {
  return kNumEntityTypes * static_cast<int>(tag) + static_cast<int>(type);
}

std::pair<LexicalTag, EntityType> label_components(int index) {
  if (index < 0 || index >= kNumPhraseTypes) {
    throw ValidationError("label index out of range: " +
                          std::to_string(index));
  }
  return {static_cast<LexicalTag>(index / kNumEntityTypes),
          static_cast<EntityType>(index % kNumEntityTypes)};
}

PhraseRecord parse_phrase_record(std::string_view line, bool coerce_unknown) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ParseError("record line is not a JSON object");
  }
  for (const char* key : {"surface", "lexical_tag", "entity_type",
                          "frequency"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("missing field: ") + key);
    }
  }
  if (!j["surface"].is_string() || !j["lexical_tag"].is_string() ||
      !j["entity_type"].is_string()) {
    throw ValidationError("surface, lexical_tag, entity_type must be strings");
  }
  if (!j["frequency"].is_number_integer() ||
      j["frequency"].get<int64_t>() <= 0) {
    throw ValidationError("frequency must be a positive integer");
  }

  PhraseRecord rec;
  rec.surface = canonicalize_whitespace(j["surface"].get<std::string>());
  if (rec.surface.empty()) {
    throw ValidationError("surface is empty after trimming whitespace");
  }
  size_t tokens = split_whitespace(rec.surface).size();
  if (tokens > kMaxSurfaceTokens) {
    throw ValidationError("surface has " + std::to_string(tokens) +
                          " tokens, limit is " +
                          std::to_string(kMaxSurfaceTokens));
  }
  utf8_decode(rec.surface);  // reject invalid byte sequences early

  rec.lexical_tag = parse_lexical_tag(j["lexical_tag"].get<std::string>());
  std::string ent = j["entity_type"].get<std::string>();
  if (coerce_unknown) {
    try {
      rec.entity_type = parse_entity_type(ent);
    } catch (const ValidationError&) {
      rec.entity_type = EntityType::kOther;
    }
  } else {
    rec.entity_type = parse_entity_type(ent);
  }
  rec.frequency = j["frequency"].get<uint64_t>();
  return rec;
}

std::string serialize_phrase_record(const PhraseRecord& record) {
  nlohmann::json j;
  j["surface"] = record.surface;
  j["lexical_tag"] = std::string(to_string(record.lexical_tag));
  j["entity_type"] = std::string(to_string(record.entity_type));
  j["frequency"] = record.frequency;
  return j.dump();
}

Corpus read_corpus(std::istream& in, bool coerce_unknown) {
  Corpus corpus;
  std::unordered_map<std::string, size_t> by_surface;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    // Tolerate CRLF corpora.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    PhraseRecord rec;
    try {
      rec = parse_phrase_record(line, coerce_unknown);
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    auto it = by_surface.find(rec.surface);
    if (it == by_surface.end()) {
      by_surface.emplace(rec.surface, corpus.records.size());
      corpus.records.push_back(std::move(rec));
    } else if (rec.frequency > corpus.records[it->second].frequency) {
      corpus.records[it->second] = std::move(rec);
    }
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, bool coerce_unknown) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ValidationError("cannot open corpus file: " + path);
  }
  return read_corpus(in, coerce_unknown);
}

Corpus filter_by_frequency(const Corpus& corpus, uint64_t min_freq) {
  if (min_freq < 1) {
    throw ValidationError("min_freq must be >= 1");
  }
  Corpus out;
  out.records.reserve(corpus.records.size());
  for (const PhraseRecord& rec : corpus.records) {
    if (rec.frequency >= min_freq) out.records.push_back(rec);
  }
  return out;
}

}  // namespace pearlkit
