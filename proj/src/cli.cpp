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

#include "pearlkit/cli.h"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pearlkit/augment.h"
#include "pearlkit/corpus.h"
#include "pearlkit/encoder.h"
#include "pearlkit/errors.h"
#include "pearlkit/evalharness.h"
#include "pearlkit/hashing.h"
#include "pearlkit/log.h"
#include "pearlkit/mining.h"
#include "pearlkit/trainer.h"
#include "pearlkit/utf8.h"
#include "pearlkit/version.h"

namespace pearlkit {

namespace {

std::string now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open input for digest: " + path);
  }
  std::ostringstream ss;
  ss << is.rdbuf();
  std::string bytes = ss.str();
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

// Provenance sidecar written next to each produced artifact.
class Manifest {
 public:
  Manifest(std::string command, uint64_t seed)
      : command_(std::move(command)), seed_(seed), started_(now_iso8601()) {}

  void add_input(const std::string& path) {
    inputs_[path] = file_digest(path);
  }
  void set_config(nlohmann::json config) { config_ = std::move(config); }

  void write(const std::string& artifact_path) const {
    nlohmann::json j;
    j["command"] = command_;
    j["toolkit_version"] = kVersion;
    j["seed"] = seed_;
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["started"] = started_;
    j["finished"] = now_iso8601();
    std::ofstream os(artifact_path + ".manifest.json", std::ios::binary);
    if (!os) {
      throw ValidationError("cannot write manifest next to " + artifact_path);
    }
    os << j.dump(2) << '\n';
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command_;
    j["toolkit_version"] = kVersion;
    j["seed"] = seed_;
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["started"] = started_;
    j["finished"] = now_iso8601();
    return j;
  }

 private:
  std::string command_;
  uint64_t seed_;
  std::string started_;
  nlohmann::json config_;
  std::map<std::string, std::string> inputs_;
};

std::vector<AugmentLevel> parse_levels(const std::string& spec) {
  std::vector<AugmentLevel> levels;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "char") {
      levels.push_back(AugmentLevel::kCharacter);
    } else if (part == "token") {
      levels.push_back(AugmentLevel::kToken);
    } else if (part == "phrase") {
      levels.push_back(AugmentLevel::kPhrase);
    } else {
      throw ValidationError("unknown augmentation level: \"" + part +
                            "\" (expected char, token, phrase)");
    }
  }
  if (levels.empty()) {
    throw ValidationError("no augmentation levels given");
  }
  return levels;
}

struct TrainSettings {
  TrainConfig train;
  EncoderConfig encoder;
  uint64_t min_freq = 2;
};

void apply_json_config(const nlohmann::json& j, TrainSettings* s) {
  auto get = [&](const char* key, auto* dst) {
    if (j.contains(key)) {
      *dst = j.at(key)
                 .template get<std::remove_reference_t<decltype(*dst)>>();
    }
  };
  get("batch_size", &s->train.batch_size);
  get("epochs", &s->train.epochs);
  get("lr0", &s->train.lr0);
  get("decay_rate", &s->train.decay_rate);
  get("decay_every", &s->train.decay_every);
  get("temperature", &s->train.temperature);
  get("hard_negatives", &s->train.hard_negatives_per_batch);
  get("seed", &s->train.seed);
  get("weight_average_alpha", &s->train.weight_average_alpha);
  get("ce_weight", &s->train.ce_weight);
  get("checkpoint_every", &s->train.checkpoint_every);
  get("min_freq", &s->min_freq);
  if (j.contains("encoder")) {
    const nlohmann::json& e = j.at("encoder");
    auto gete = [&](const char* key, auto* dst) {
      if (e.contains(key)) {
        *dst = e.at(key)
                   .template get<std::remove_reference_t<decltype(*dst)>>();
      }
    };
    gete("token_dim", &s->encoder.token_dim);
    gete("char_dim", &s->encoder.char_dim);
    gete("char_hidden_dim", &s->encoder.char_hidden_dim);
    gete("token_buckets", &s->encoder.num_token_buckets);
    gete("char_buckets", &s->encoder.num_char_buckets);
    if (e.contains("ngram_sizes")) {
      s->encoder.char_ngram_sizes =
          e.at("ngram_sizes").get<std::vector<uint32_t>>();
    }
  }
}

TrainSettings load_train_settings(const std::string& config_path) {
  TrainSettings s;
  if (config_path.empty()) return s;
  std::ifstream is(config_path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open config file: " + config_path);
  }
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config file is not valid JSON: " + std::string(e.what()));
  }
  try {
    apply_json_config(j, &s);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config file has a bad value: " + std::string(e.what()));
  }
  return s;
}

nlohmann::json settings_to_json(const TrainSettings& s) {
  nlohmann::json j;
  j["batch_size"] = s.train.batch_size;
  j["epochs"] = s.train.epochs;
  j["lr0"] = s.train.lr0;
  j["decay_rate"] = s.train.decay_rate;
  j["decay_every"] = s.train.decay_every;
  j["temperature"] = s.train.temperature;
  j["hard_negatives"] = s.train.hard_negatives_per_batch;
  j["seed"] = s.train.seed;
  j["weight_average_alpha"] = s.train.weight_average_alpha;
  j["ce_weight"] = s.train.ce_weight;
  j["checkpoint_every"] = s.train.checkpoint_every;
  j["min_freq"] = s.min_freq;
  j["encoder"] = {{"token_dim", s.encoder.token_dim},
                  {"char_dim", s.encoder.char_dim},
                  {"char_hidden_dim", s.encoder.char_hidden_dim},
                  {"token_buckets", s.encoder.num_token_buckets},
                  {"char_buckets", s.encoder.num_char_buckets},
                  {"ngram_sizes", s.encoder.char_ngram_sizes}};
  return j;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  std::string in, out, levels = "char,token,phrase";
  std::string lexicon, paraphrases, keyboard;
  uint64_t seed = 0;
  double threshold = 0.7;
  bool coerce_unknown = false;
};

int cmd_augment(const AugmentArgs& a) {
  Manifest manifest("augment", a.seed);
  manifest.add_input(a.in);

  AugmentConfig cfg;
  cfg.seed = a.seed;
  cfg.synonym_threshold = a.threshold;
  cfg.enabled_levels = parse_levels(a.levels);
  if (!a.keyboard.empty()) {
    cfg.keyboard = load_keyboard_layout(a.keyboard);
    manifest.add_input(a.keyboard);
  }
  SynonymSource synonyms;
  if (!a.lexicon.empty()) {
    synonyms = load_synonym_lexicon(a.lexicon);
    manifest.add_input(a.lexicon);
  }
  ParaphraseTable table;
  if (!a.paraphrases.empty()) {
    table = load_paraphrase_table(a.paraphrases);
    manifest.add_input(a.paraphrases);
  }
  manifest.set_config({{"levels", a.levels},
                       {"synonym_threshold", a.threshold},
                       {"coerce_unknown", a.coerce_unknown}});

  Corpus corpus = load_corpus(a.in, a.coerce_unknown);
  Augmenter augmenter(cfg, synonyms, table);
  std::ofstream os(a.out, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot open output file: " + a.out);
  }
  for (size_t i = 0; i < corpus.records.size(); ++i) {
    const std::string& phrase = corpus.records[i].surface;
    os << phrase << '\t' << augmenter.augment(phrase, i) << '\n';
  }
  manifest.write(a.out);
  log_info("wrote ", corpus.size(), " pairs to ", a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// mine

struct MineArgs {
  std::string in, model, out;
  size_t dmax = 3;
  double theta = 0.5;
  size_t kstore = 10;
  uint64_t min_freq = 2;
  int threads = 0;
  bool coerce_unknown = false;
};

int cmd_mine(const MineArgs& a) {
  Manifest manifest("mine", 0);
  manifest.add_input(a.in);
  manifest.add_input(a.model);
  manifest.set_config({{"dmax", a.dmax},
                       {"theta", a.theta},
                       {"kstore", a.kstore},
                       {"min_freq", a.min_freq},
                       {"threads", a.threads}});

  ModelState model = load_model(a.model);
  Corpus corpus =
      filter_by_frequency(load_corpus(a.in, a.coerce_unknown), a.min_freq);
  std::vector<std::string> phrases;
  phrases.reserve(corpus.size());
  for (const PhraseRecord& rec : corpus.records) {
    phrases.push_back(rec.surface);
  }
  MiningConfig cfg;
  cfg.d_max = a.dmax;
  cfg.theta = a.theta;
  cfg.k_store = a.kstore;
  cfg.threads = a.threads;
  HardNegativeIndex index = mine_hard_negatives(phrases, model, cfg);
  save_hardneg_index(index, a.out);
  manifest.write(a.out);
  size_t rows = 0;
  for (const auto& [_, v] : index) rows += v.size();
  log_info("mined ", rows, " hard negatives for ", index.size(), " phrases");
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string corpus, hardneg, lexicon, paraphrases, keyboard, config, out;
  bool coerce_unknown = false;
  // Flag-level overrides; only applied when the user passed them.
  CLI::App* sub = nullptr;
  TrainSettings settings;
};

int cmd_train(TrainArgs& a) {
  // Precedence: flag > config file > default. The flag targets were
  // initialized from the defaults, then overwritten by parsing, so settings
  // from the file are applied only where the flag is absent.
  TrainSettings file_settings = load_train_settings(a.config);
  auto keep_flag = [&](const char* name) {
    return a.sub->count(name) > 0;
  };
  TrainSettings s = file_settings;
  if (keep_flag("--batch-size")) s.train.batch_size = a.settings.train.batch_size;
  if (keep_flag("--epochs")) s.train.epochs = a.settings.train.epochs;
  if (keep_flag("--lr")) s.train.lr0 = a.settings.train.lr0;
  if (keep_flag("--decay-rate")) s.train.decay_rate = a.settings.train.decay_rate;
  if (keep_flag("--decay-every")) s.train.decay_every = a.settings.train.decay_every;
  if (keep_flag("--tau")) s.train.temperature = a.settings.train.temperature;
  if (keep_flag("--hard-negatives")) {
    s.train.hard_negatives_per_batch =
        a.settings.train.hard_negatives_per_batch;
  }
  if (keep_flag("--seed")) s.train.seed = a.settings.train.seed;
  if (keep_flag("--alpha")) {
    s.train.weight_average_alpha = a.settings.train.weight_average_alpha;
  }
  if (keep_flag("--ce-weight")) s.train.ce_weight = a.settings.train.ce_weight;
  if (keep_flag("--checkpoint-every")) {
    s.train.checkpoint_every = a.settings.train.checkpoint_every;
  }
  if (keep_flag("--min-freq")) s.min_freq = a.settings.min_freq;
  if (keep_flag("--token-dim")) s.encoder.token_dim = a.settings.encoder.token_dim;
  if (keep_flag("--char-dim")) s.encoder.char_dim = a.settings.encoder.char_dim;
  if (keep_flag("--char-hidden")) {
    s.encoder.char_hidden_dim = a.settings.encoder.char_hidden_dim;
  }
  if (keep_flag("--token-buckets")) {
    s.encoder.num_token_buckets = a.settings.encoder.num_token_buckets;
  }
  if (keep_flag("--char-buckets")) {
    s.encoder.num_char_buckets = a.settings.encoder.num_char_buckets;
  }

  Manifest manifest("train", s.train.seed);
  manifest.add_input(a.corpus);
  if (!a.config.empty()) manifest.add_input(a.config);

  Corpus corpus =
      filter_by_frequency(load_corpus(a.corpus, a.coerce_unknown), s.min_freq);
  HardNegativeIndex hardneg;
  if (!a.hardneg.empty()) {
    hardneg = load_hardneg_index(a.hardneg);
    manifest.add_input(a.hardneg);
  }
  SynonymSource synonyms;
  if (!a.lexicon.empty()) {
    synonyms = load_synonym_lexicon(a.lexicon);
    manifest.add_input(a.lexicon);
  }
  ParaphraseTable paraphrases;
  if (!a.paraphrases.empty()) {
    paraphrases = load_paraphrase_table(a.paraphrases);
    manifest.add_input(a.paraphrases);
  }
  manifest.set_config(settings_to_json(s));

  std::ofstream log_stream(a.out + ".log.jsonl", std::ios::binary);
  if (!log_stream) {
    throw ValidationError("cannot open training log next to " + a.out);
  }
  TrainIO io;
  io.log_out = &log_stream;
  io.checkpoint_prefix = a.out;
  io.abort_dump_path = a.out + ".nan_batch.json";

  TrainResult result = train(corpus, s.encoder, s.train, hardneg, synonyms,
                             paraphrases, io);
  save_model(result.model, a.out);
  manifest.write(a.out);
  log_info("trained ", result.log.size(), " steps; checkpoint at ", a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// embed

struct EmbedArgs {
  std::string model, in, out;
};

int cmd_embed(const EmbedArgs& a) {
  Manifest manifest("embed", 0);
  manifest.add_input(a.model);
  manifest.add_input(a.in);
  manifest.set_config({});

  ModelState model = load_model(a.model);
  std::ifstream is(a.in, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open phrase list: " + a.in);
  }
  std::ofstream os(a.out, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot open output file: " + a.out);
  }
  std::string line;
  size_t line_no = 0, written = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string phrase = canonicalize_whitespace(line);
    if (phrase.empty()) {
      log_warn("skipping empty line ", line_no, " in ", a.in);
      continue;
    }
    Vector h = encode(phrase, model);
    os << phrase;
    for (double x : h) os << '\t' << format_value(x);
    os << '\n';
    ++written;
  }
  manifest.write(a.out);
  log_info("embedded ", written, " phrases");
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model, task, data, out;
  uint64_t seed = 0;
  int threads = 0;
  size_t prefilter = 0;
};

bool file_exists(const std::string& path) {
  std::ifstream f(path);
  return f.good();
}

std::string data_file(const EvalArgs& a, const char* name) {
  return a.data + "/" + name;
}

void require_files(const EvalArgs& a, const std::vector<const char*>& names) {
  std::vector<std::string> missing;
  for (const char* n : names) {
    if (!file_exists(data_file(a, n))) missing.push_back(n);
  }
  if (!missing.empty()) {
    std::string msg = "missing task data in " + a.data + ":";
    for (const std::string& m : missing) msg += " " + m;
    throw ValidationError(msg);
  }
}

int cmd_eval(const EvalArgs& a) {
  Manifest manifest("eval", a.seed);
  manifest.add_input(a.model);
  manifest.set_config({{"task", a.task},
                       {"data", a.data},
                       {"threads", a.threads},
                       {"prefilter", a.prefilter}});
  ModelState model = load_model(a.model);

  std::string metric;
  double value = 0.0;
  size_t n = 0;
  if (a.task == "paraphrase") {
    require_files(a, {"pairs_train.tsv", "pairs_dev.tsv", "pairs_test.tsv"});
    auto train = load_pairs_tsv(data_file(a, "pairs_train.tsv"));
    auto dev = load_pairs_tsv(data_file(a, "pairs_dev.tsv"));
    auto test = load_pairs_tsv(data_file(a, "pairs_test.tsv"));
    manifest.add_input(data_file(a, "pairs_train.tsv"));
    manifest.add_input(data_file(a, "pairs_dev.tsv"));
    manifest.add_input(data_file(a, "pairs_test.tsv"));
    metric = "accuracy";
    value = eval_paraphrase(train, dev, test, model, a.seed);
    n = test.size();
  } else if (a.task == "similarity") {
    bool has_pairs = file_exists(data_file(a, "pairs.tsv"));
    bool has_turney = file_exists(data_file(a, "turney.tsv"));
    if (has_pairs == has_turney) {
      throw ValidationError(
          "similarity task needs exactly one of pairs.tsv (graded scores, "
          "Pearson) or turney.tsv (1-of-5 choice, accuracy) in " +
          a.data);
    }
    if (has_pairs) {
      auto pairs = load_pairs_tsv(data_file(a, "pairs.tsv"));
      manifest.add_input(data_file(a, "pairs.tsv"));
      metric = "pearson";
      value = eval_similarity(pairs, model);
      n = pairs.size();
    } else {
      auto items = load_turney_tsv(data_file(a, "turney.tsv"));
      manifest.add_input(data_file(a, "turney.tsv"));
      metric = "accuracy";
      value = eval_turney(items, model);
      n = items.size();
    }
  } else if (a.task == "retrieval") {
    require_files(a, {"dictionary.txt", "queries.tsv"});
    RetrievalTask task = load_retrieval_task(data_file(a, "dictionary.txt"),
                                             data_file(a, "queries.tsv"));
    manifest.add_input(data_file(a, "dictionary.txt"));
    manifest.add_input(data_file(a, "queries.tsv"));
    RetrievalOptions opts;
    opts.prefilter_c = a.prefilter;
    opts.threads = a.threads;
    metric = "top1_accuracy";
    value = eval_retrieval(task, model, opts).accuracy;
    n = task.queries.size();
  } else if (a.task == "clustering") {
    require_files(a, {"clustering.tsv"});
    ClusteringTask task = load_clustering_task(data_file(a, "clustering.tsv"));
    manifest.add_input(data_file(a, "clustering.tsv"));
    metric = "nmi";
    value = eval_clustering(task, model, a.seed);
    n = task.phrases.size();
  } else if (a.task == "fuzzyjoin") {
    require_files(a, {"fuzzy_left.txt", "fuzzy_right.tsv"});
    FuzzyJoinTask task = load_fuzzyjoin_task(data_file(a, "fuzzy_left.txt"),
                                             data_file(a, "fuzzy_right.tsv"));
    manifest.add_input(data_file(a, "fuzzy_left.txt"));
    manifest.add_input(data_file(a, "fuzzy_right.tsv"));
    metric = "accuracy";
    value = eval_fuzzyjoin(task, model, a.threads);
    n = task.right.size();
  } else {
    throw ValidationError("unknown task: " + a.task);
  }

  nlohmann::json report;
  report["task"] = a.task;
  report["metric"] = metric;
  report["value"] = value;
  report["n"] = n;
  report["seed"] = a.seed;
  report["manifest"] = manifest.to_json();
  std::ofstream os(a.out, std::ios::binary);
  if (!os) {
    throw ValidationError("cannot open report file: " + a.out);
  }
  os << report.dump(2) << '\n';
  manifest.write(a.out);
  log_info(a.task, " ", metric, " = ", format_value(value), " (n=", n, ")");
  return 0;
}

// ---------------------------------------------------------------------------
// avg

struct AvgArgs {
  std::string a, b, out;
  double alpha = 0.5;
};

int cmd_avg(const AvgArgs& args) {
  Manifest manifest("avg", 0);
  manifest.add_input(args.a);
  manifest.add_input(args.b);
  manifest.set_config({{"alpha", args.alpha}});
  ModelState original = load_model(args.a);
  ModelState finetuned = load_model(args.b);
  ModelState averaged = average_weights(original, finetuned, args.alpha);
  save_model(averaged, args.out);
  manifest.write(args.out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"phrase embedding toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  AugmentArgs aug;
  CLI::App* s_aug =
      app.add_subcommand("augment", "preview augmented positive pairs");
  s_aug->add_option("--in", aug.in, "corpus JSONL")->required();
  s_aug->add_option("--out", aug.out, "output TSV of (phrase, positive)")
      ->required();
  s_aug->add_option("--seed", aug.seed, "random seed");
  s_aug->add_option("--levels", aug.levels,
                    "comma list from {char,token,phrase}");
  s_aug->add_option("--lexicon", aug.lexicon, "synonym lexicon TSV");
  s_aug->add_option("--paraphrases", aug.paraphrases, "paraphrase table TSV");
  s_aug->add_option("--keyboard", aug.keyboard, "keyboard adjacency JSON");
  s_aug->add_option("--synonym-threshold", aug.threshold,
                    "embedding-route cosine threshold");
  s_aug->add_flag("--coerce-unknown", aug.coerce_unknown,
                  "map unknown entity types to OTHER");

  MineArgs mine;
  CLI::App* s_mine = app.add_subcommand("mine", "mine hard negatives");
  s_mine->add_option("--in", mine.in, "corpus JSONL")->required();
  s_mine->add_option("--model", mine.model, "scoring checkpoint")->required();
  s_mine->add_option("--out", mine.out, "output TSV index")->required();
  s_mine->add_option("--dmax", mine.dmax, "edit distance ceiling");
  s_mine->add_option("--theta", mine.theta, "cosine ceiling");
  s_mine->add_option("--kstore", mine.kstore, "negatives kept per phrase");
  s_mine->add_option("--min-freq", mine.min_freq, "frequency filter");
  s_mine->add_option("--threads", mine.threads, "worker threads (0 = cores)");
  s_mine->add_flag("--coerce-unknown", mine.coerce_unknown,
                   "map unknown entity types to OTHER");

  TrainArgs tr;
  CLI::App* s_train = app.add_subcommand("train", "contrastive fine-tuning");
  tr.sub = s_train;
  s_train->add_option("--corpus", tr.corpus, "corpus JSONL")->required();
  s_train->add_option("--out", tr.out, "final checkpoint path")->required();
  s_train->add_option("--hardneg", tr.hardneg, "hard-negative index TSV");
  s_train->add_option("--lexicon", tr.lexicon, "synonym lexicon TSV");
  s_train->add_option("--paraphrases", tr.paraphrases,
                      "paraphrase table TSV");
  s_train->add_option("--config", tr.config, "JSON config file");
  s_train->add_option("--batch-size", tr.settings.train.batch_size, "");
  s_train->add_option("--epochs", tr.settings.train.epochs, "");
  s_train->add_option("--lr", tr.settings.train.lr0, "");
  s_train->add_option("--decay-rate", tr.settings.train.decay_rate, "");
  s_train->add_option("--decay-every", tr.settings.train.decay_every, "");
  s_train->add_option("--tau", tr.settings.train.temperature, "");
  s_train->add_option("--hard-negatives",
                      tr.settings.train.hard_negatives_per_batch,
                      "hard negatives per batch (K)");
  s_train->add_option("--seed", tr.settings.train.seed, "");
  s_train->add_option("--alpha", tr.settings.train.weight_average_alpha,
                      "final weight-average coefficient");
  s_train->add_option("--ce-weight", tr.settings.train.ce_weight,
                      "type-loss weight (debug knob; reference value 1)");
  s_train->add_option("--checkpoint-every",
                      tr.settings.train.checkpoint_every, "");
  s_train->add_option("--min-freq", tr.settings.min_freq, "");
  s_train->add_option("--token-dim", tr.settings.encoder.token_dim, "");
  s_train->add_option("--char-dim", tr.settings.encoder.char_dim, "");
  s_train->add_option("--char-hidden", tr.settings.encoder.char_hidden_dim,
                      "");
  s_train->add_option("--token-buckets",
                      tr.settings.encoder.num_token_buckets, "");
  s_train->add_option("--char-buckets", tr.settings.encoder.num_char_buckets,
                      "");
  s_train->add_flag("--coerce-unknown", tr.coerce_unknown,
                    "map unknown entity types to OTHER");

  EmbedArgs emb;
  CLI::App* s_embed = app.add_subcommand("embed", "embed a phrase list");
  s_embed->add_option("--model", emb.model, "checkpoint")->required();
  s_embed->add_option("--in", emb.in, "one phrase per line")->required();
  s_embed->add_option("--out", emb.out, "output TSV")->required();

  EvalArgs ev;
  CLI::App* s_eval = app.add_subcommand("eval", "run an evaluation task");
  s_eval->add_option("--model", ev.model, "checkpoint")->required();
  s_eval
      ->add_option("--task", ev.task,
                   "paraphrase|similarity|retrieval|clustering|fuzzyjoin")
      ->required();
  s_eval->add_option("--data", ev.data, "task data directory")->required();
  s_eval->add_option("--out", ev.out, "JSON report path")->required();
  s_eval->add_option("--seed", ev.seed, "");
  s_eval->add_option("--threads", ev.threads, "");
  s_eval->add_option("--prefilter", ev.prefilter,
                     "retrieval candidate count C (0 = exact search)");

  AvgArgs avg;
  CLI::App* s_avg = app.add_subcommand("avg", "average two checkpoints");
  s_avg->add_option("--a", avg.a, "original checkpoint")->required();
  s_avg->add_option("--b", avg.b, "fine-tuned checkpoint")->required();
  s_avg->add_option("--out", avg.out, "output checkpoint")->required();
  s_avg->add_option("--alpha", avg.alpha, "weight on the original");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (s_aug->parsed()) return cmd_augment(aug);
    if (s_mine->parsed()) return cmd_mine(mine);
    if (s_train->parsed()) return cmd_train(tr);
    if (s_embed->parsed()) return cmd_embed(emb);
    if (s_eval->parsed()) return cmd_eval(ev);
    if (s_avg->parsed()) return cmd_avg(avg);
  } catch (const NumericError& e) {
    log_error(e.what());
    return 4;
  } catch (const FormatError& e) {
    log_error(e.what());
    return 3;
  } catch (const DimensionError& e) {
    log_error(e.what());
    return 3;
  } catch (const Error& e) {
    log_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log_error("unexpected error: ", e.what());
    return 2;
  }
  return 0;
}

}  // namespace pearlkit
