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

#include "pearlkit/synthdata.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "pearlkit/errors.h"
#include "pearlkit/rng.h"
#include "pearlkit/utf8.h"

namespace pearlkit {

namespace {

constexpr size_t kGroups = 100;
constexpr size_t kConfusablePairs = 20;
constexpr size_t kDecoys = 20;
constexpr size_t kQueries = 200;

const char* kBaseCategories[6] = {"systems",  "group",    "labs",
                                  "industries", "partners", "holdings"};
const char* kAliasCategories[6] = {"co",  "corp",  "inc",
                                   "ltd", "union", "alliance"};

std::string random_word(Rng& rng, size_t min_len, size_t max_len) {
  size_t len = min_len + rng.index(max_len - min_len + 1);
  std::string w;
  for (size_t i = 0; i < len; ++i) {
    w.push_back(static_cast<char>('a' + rng.index(26)));
  }
  return w;
}

std::string fresh_word(Rng& rng, std::set<std::string>& used, size_t min_len,
                       size_t max_len) {
  for (int tries = 0; tries < 1000; ++tries) {
    std::string w = random_word(rng, min_len, max_len);
    if (used.insert(w).second) return w;
  }
  throw Error("word space exhausted while generating synthetic data");
}

// One character-level corruption guaranteed to change the string.
std::string corrupt_word(const std::string& word, Rng& rng) {
  for (int tries = 0; tries < 100; ++tries) {
    std::string out = word;
    switch (rng.index(4)) {
      case 0: {  // transpose
        if (out.size() < 2) break;
        size_t i = rng.index(out.size() - 1);
        std::swap(out[i], out[i + 1]);
        break;
      }
      case 1: {  // drop
        if (out.size() < 3) break;
        out.erase(rng.index(out.size()), 1);
        break;
      }
      case 2: {  // insert
        size_t i = rng.index(out.size() + 1);
        out.insert(i, 1, static_cast<char>('a' + rng.index(26)));
        break;
      }
      default: {  // replace
        size_t i = rng.index(out.size());
        out[i] = static_cast<char>('a' + rng.index(26));
        break;
      }
    }
    if (out != word) return out;
  }
  return word + "x";
}

PhraseRecord make_record(std::string surface, EntityType type,
                         uint64_t frequency) {
  PhraseRecord rec;
  rec.surface = std::move(surface);
  rec.lexical_tag = LexicalTag::kNP;
  rec.entity_type = type;
  rec.frequency = frequency;
  return rec;
}

const EntityType kGroupEntityRotation[5] = {
    EntityType::kOrg, EntityType::kGpe, EntityType::kFac,
    EntityType::kProduct, EntityType::kEvent};

}  // namespace

AliasBenchmark make_alias_benchmark(uint64_t seed) {
  Rng rng = substream(seed, "synth.alias");
  AliasBenchmark bench;
  std::set<std::string> used_words;
  for (const char* c : kBaseCategories) used_words.insert(c);
  for (const char* c : kAliasCategories) used_words.insert(c);

  std::vector<std::string> name_tokens(kGroups);
  std::vector<std::string> alias_tokens(kGroups);
  for (size_t g = 0; g < kGroups; ++g) {
    if (g < 2 * kConfusablePairs && g % 2 == 1) {
      // Odd member of a confusable pair: one edit away from its partner's
      // name token, so the two bases collide under edit-distance retrieval.
      std::string twin;
      do {
        twin = corrupt_word(name_tokens[g - 1], rng);
      } while (!used_words.insert(twin).second);
      name_tokens[g] = twin;
    } else {
      name_tokens[g] = fresh_word(rng, used_words, 5, 7);
    }
    alias_tokens[g] = fresh_word(rng, used_words, 5, 7);
  }

  std::set<std::string> surfaces;
  std::vector<std::vector<std::string>> group_surfaces(kGroups);
  auto add_surface = [&](size_t g, const std::string& s) {
    if (!surfaces.insert(s).second) {
      throw Error("surface collision in synthetic benchmark: " + s);
    }
    group_surfaces[g].push_back(s);
  };

  for (size_t g = 0; g < kGroups; ++g) {
    // Confusable pairs share their base category so that the whole base
    // phrases stay within edit distance of each other.
    size_t cat_idx = (g < 2 * kConfusablePairs) ? (g / 2) % 6 : g % 6;
    std::string cat = kBaseCategories[cat_idx];
    std::string alias_cat = kAliasCategories[g % 6];
    // Typo tokens are reserved in the global word set: a typo of one name
    // may otherwise coincide with a confusable twin (itself one edit away)
    // or with a later group's typo of the same neighborhood.
    auto fresh_typo = [&](const std::string& word) {
      for (int tries = 0; tries < 1000; ++tries) {
        std::string t = corrupt_word(word, rng);
        if (used_words.insert(t).second) return t;
      }
      throw Error("typo space exhausted while generating synthetic data");
    };
    std::string base = name_tokens[g] + " " + cat;
    std::string base_typo = fresh_typo(name_tokens[g]) + " " + cat;
    std::string base_swap = cat + " " + name_tokens[g];
    std::string alias = alias_tokens[g] + " " + alias_cat;
    std::string alias_typo = fresh_typo(alias_tokens[g]) + " " + alias_cat;

    add_surface(g, base);
    add_surface(g, base_typo);
    add_surface(g, base_swap);
    add_surface(g, alias);
    add_surface(g, alias_typo);
    bench.dictionary.push_back(base);

    EntityType type = kGroupEntityRotation[g % 5];
    for (const std::string& s : group_surfaces[g]) {
      bench.corpus.records.push_back(make_record(s, type, 2 + g % 7));
    }
    for (const std::string& s : group_surfaces[g]) {
      std::vector<std::string> siblings;
      for (const std::string& t : group_surfaces[g]) {
        if (t != s) siblings.push_back(t);
      }
      bench.paraphrases[s] = std::move(siblings);
    }
  }

  // Frequency-1 decoys: parseable records that the default filter removes.
  for (size_t d = 0; d < kDecoys; ++d) {
    std::string s = fresh_word(rng, used_words, 6, 8) + " " +
                    fresh_word(rng, used_words, 6, 8);
    if (!surfaces.insert(s).second) continue;
    bench.corpus.records.push_back(
        make_record(s, EntityType::kOther, 1));
  }

  bench.synonyms.lexicon = {
      {"systems", {"sys"}},        {"group", {"grp"}},
      {"labs", {"laboratories"}},  {"industries", {"ind"}},
      {"partners", {"prtn"}},      {"holdings", {"hldg"}},
      {"co", {"company"}},         {"corp", {"corporation"}},
      {"inc", {"incorporated"}},   {"ltd", {"limited"}},
      {"union", {"assoc"}},        {"alliance", {"coalition"}},
  };

  // Held-out mentions: unseen one-edit corruptions, three quarters built
  // from the alias surface (no token shared with the base), the rest from
  // the base itself.
  std::set<std::string> mentions;
  for (size_t q = 0; q < kQueries; ++q) {
    size_t g = q % kGroups;
    bool from_alias = q % 4 != 3;
    const std::string& source_token =
        from_alias ? alias_tokens[g] : name_tokens[g];
    size_t cat_idx = (g < 2 * kConfusablePairs) ? (g / 2) % 6 : g % 6;
    std::string cat =
        from_alias ? kAliasCategories[g % 6] : kBaseCategories[cat_idx];
    std::string mention;
    int guard = 0;
    do {
      mention = corrupt_word(source_token, rng) + " " + cat;
      if (++guard > 1000) {
        throw Error("could not generate a fresh held-out mention");
      }
    } while (surfaces.count(mention) || mentions.count(mention));
    mentions.insert(mention);
    bench.queries.emplace_back(mention, bench.dictionary[g]);
  }
  return bench;
}

TypedBenchmark make_typed_benchmark(uint64_t seed) {
  Rng rng = substream(seed, "synth.typed");
  constexpr size_t kTypes = 6;
  constexpr size_t kPerType = 50;
  constexpr size_t kTypeTokens = 8;
  constexpr size_t kFillers = 30;
  const EntityType kTypes6[kTypes] = {
      EntityType::kCardinal, EntityType::kDate, EntityType::kPerson,
      EntityType::kNorp,     EntityType::kGpe,  EntityType::kLaw};

  TypedBenchmark bench;
  std::set<std::string> used_words;
  std::vector<std::vector<std::string>> type_tokens(kTypes);
  for (size_t t = 0; t < kTypes; ++t) {
    for (size_t i = 0; i < kTypeTokens; ++i) {
      type_tokens[t].push_back(fresh_word(rng, used_words, 5, 7));
    }
  }
  std::vector<std::string> fillers;
  for (size_t i = 0; i < kFillers; ++i) {
    fillers.push_back(fresh_word(rng, used_words, 4, 6));
  }

  std::set<std::string> surfaces;
  for (size_t t = 0; t < kTypes; ++t) {
    for (size_t i = 0; i < kPerType; ++i) {
      std::string surface;
      int guard = 0;
      do {
        std::vector<std::string> tokens = {
            type_tokens[t][rng.index(kTypeTokens)],
            fillers[rng.index(kFillers)], fillers[rng.index(kFillers)]};
        rng.shuffle(tokens);
        surface = join_tokens(tokens);
        if (++guard > 1000) {
          throw Error("could not generate a fresh typed phrase");
        }
      } while (surfaces.count(surface));
      surfaces.insert(surface);
      bench.corpus.records.push_back(
          make_record(surface, kTypes6[t], 2 + i % 5));
      bench.clustering.phrases.push_back(
          bench.corpus.records.back().surface);
      bench.clustering.classes.push_back(static_cast<int>(t));
    }
  }
  bench.clustering.k = kTypes;
  return bench;
}

namespace {

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot write fixture file: " + path.string());
  }
  for (const std::string& l : lines) os << l << '\n';
}

}  // namespace

void write_fixture_tree(const std::string& root, uint64_t seed) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(root) / "alias");
  fs::create_directories(fs::path(root) / "typed");

  AliasBenchmark alias = make_alias_benchmark(seed);
  Rng rng = substream(seed, "synth.fixtures");

  std::vector<std::string> lines;
  for (const PhraseRecord& rec : alias.corpus.records) {
    lines.push_back(serialize_phrase_record(rec));
  }
  write_lines(fs::path(root) / "alias" / "corpus.jsonl", lines);

  lines.clear();
  for (const auto& [phrase, options] : alias.paraphrases) {
    for (const std::string& o : options) lines.push_back(phrase + "\t" + o);
  }
  write_lines(fs::path(root) / "alias" / "paraphrases.tsv", lines);

  lines.clear();
  for (const auto& [word, synonyms] : alias.synonyms.lexicon) {
    for (const std::string& s : synonyms) lines.push_back(word + "\t" + s);
  }
  write_lines(fs::path(root) / "alias" / "lexicon.tsv", lines);

  write_lines(fs::path(root) / "alias" / "dictionary.txt", alias.dictionary);

  lines.clear();
  for (const auto& [mention, gold] : alias.queries) {
    lines.push_back(mention + "\t" + gold);
  }
  write_lines(fs::path(root) / "alias" / "queries.tsv", lines);

  // Pair classification fixtures: same-group pairs vs cross-group pairs.
  // Groups occupy 5 consecutive corpus slots; decoys sit past 5 * kGroups.
  auto group_surface = [&](size_t g, size_t member) -> const std::string& {
    return alias.corpus.records[g * 5 + member].surface;
  };
  auto make_pairs = [&](size_t count) {
    std::vector<std::string> out;
    for (size_t i = 0; i < count; ++i) {
      size_t g = rng.index(kGroups);
      if (i % 2 == 0) {
        size_t a = rng.index(5);
        size_t b = (a + 1 + rng.index(4)) % 5;
        out.push_back(group_surface(g, a) + "\t" + group_surface(g, b) +
                      "\t1");
      } else {
        size_t h = (g + 1 + rng.index(kGroups - 1)) % kGroups;
        out.push_back(group_surface(g, rng.index(5)) + "\t" +
                      group_surface(h, rng.index(5)) + "\t0");
      }
    }
    return out;
  };
  write_lines(fs::path(root) / "alias" / "pairs_train.tsv", make_pairs(240));
  write_lines(fs::path(root) / "alias" / "pairs_dev.tsv", make_pairs(80));
  write_lines(fs::path(root) / "alias" / "pairs_test.tsv", make_pairs(80));

  // Bigram-to-unigram fixtures: the gold unigram is the base's name token,
  // the distractors are name tokens of other groups.
  lines.clear();
  for (size_t i = 0; i < 60; ++i) {
    size_t g = rng.index(kGroups);
    std::vector<std::string> cands;
    std::string name = split_whitespace(alias.dictionary[g])[0];
    cands.push_back(name);
    while (cands.size() < 5) {
      size_t h = rng.index(kGroups);
      if (h == g) continue;
      std::string other = split_whitespace(alias.dictionary[h])[0];
      if (std::find(cands.begin(), cands.end(), other) == cands.end()) {
        cands.push_back(other);
      }
    }
    rng.shuffle(cands);
    size_t gold = static_cast<size_t>(
        std::find(cands.begin(), cands.end(), name) - cands.begin());
    lines.push_back(alias.dictionary[g] + "\t" + cands[0] + "\t" + cands[1] +
                    "\t" + cands[2] + "\t" + cands[3] + "\t" + cands[4] +
                    "\t" + std::to_string(gold));
  }
  write_lines(fs::path(root) / "alias" / "turney.tsv", lines);

  write_lines(fs::path(root) / "alias" / "fuzzy_left.txt", alias.dictionary);
  lines.clear();
  for (size_t g = 0; g < kGroups; ++g) {
    // The alias surface is the right-table record for its group's base.
    lines.push_back(group_surface(g, 3) + "\t" + alias.dictionary[g]);
  }
  write_lines(fs::path(root) / "alias" / "fuzzy_right.tsv", lines);

  TypedBenchmark typed = make_typed_benchmark(seed);
  lines.clear();
  for (const PhraseRecord& rec : typed.corpus.records) {
    lines.push_back(serialize_phrase_record(rec));
  }
  write_lines(fs::path(root) / "typed" / "corpus.jsonl", lines);

  lines.clear();
  for (size_t i = 0; i < typed.clustering.phrases.size(); ++i) {
    lines.push_back(typed.clustering.phrases[i] + "\t" +
                    std::string(to_string(
                        typed.corpus.records[i].entity_type)));
  }
  write_lines(fs::path(root) / "typed" / "clustering.tsv", lines);
}

}  // namespace pearlkit
