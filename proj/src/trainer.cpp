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

#include "pearlkit/trainer.h"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "pearlkit/errors.h"
#include "pearlkit/log.h"

namespace pearlkit {

void TrainConfig::validate() const {
  if (batch_size < 2) {
    throw ValidationError("batch_size must be >= 2");
  }
  if (!(decay_rate > 0.0 && decay_rate <= 1.0)) {
    throw ValidationError("decay_rate must be in (0, 1]");
  }
  if (decay_every == 0) {
    throw ValidationError("decay_every must be positive");
  }
  if (lr0 <= 0.0) {
    throw ValidationError("learning rate must be positive");
  }
  if (temperature <= 0.0) {
    throw ValidationError("temperature must be positive");
  }
  if (weight_average_alpha < 0.0 || weight_average_alpha > 1.0) {
    throw ValidationError("weight_average_alpha must be in [0, 1]");
  }
  if (ce_weight < 0.0) {
    throw ValidationError("ce_weight must be non-negative");
  }
}

double lr_at(size_t step, const TrainConfig& cfg) {
  return cfg.lr0 *
         std::pow(cfg.decay_rate,
                  static_cast<double>(step / cfg.decay_every));
}

PhraseBatch make_batch(const std::vector<const PhraseRecord*>& records,
                       const Corpus& corpus, const HardNegativeIndex& index,
                       const Augmenter& augmenter, const TrainConfig& cfg,
                       Rng& rng, uint64_t* augment_counter) {
  if (records.empty()) {
    throw ValidationError("cannot build an empty batch");
  }
  PhraseBatch batch;
  batch.temperature = cfg.temperature;
  batch.anchors.reserve(records.size());
  batch.positives.reserve(records.size());
  batch.labels.reserve(records.size());
  for (const PhraseRecord* rec : records) {
    batch.anchors.push_back(rec->surface);
    batch.positives.push_back(
        augmenter.augment(rec->surface, (*augment_counter)++));
    batch.labels.push_back(rec->label());
  }

  size_t k = cfg.hard_negatives_per_batch;
  if (k > 0) {
    // Union of the batch phrases' stored negatives, first occurrence kept.
    std::vector<std::string> pool;
    std::set<std::string> seen;
    for (const PhraseRecord* rec : records) {
      auto it = index.find(rec->surface);
      if (it == index.end()) continue;
      for (const HardNegativeEntry& e : it->second) {
        if (seen.insert(e.negative).second) pool.push_back(e.negative);
      }
    }
    // Partial Fisher-Yates gives min(k, pool) distinct draws.
    for (size_t i = 0; i < pool.size() && batch.hard_negatives.size() < k;
         ++i) {
      size_t j = i + rng.index(pool.size() - i);
      std::swap(pool[i], pool[j]);
      batch.hard_negatives.push_back(pool[i]);
    }
    while (batch.hard_negatives.size() < k) {
      const PhraseRecord& rec =
          corpus.records[rng.index(corpus.records.size())];
      batch.hard_negatives.push_back(rec.surface);
    }
  }
  return batch;
}

PhraseBatch assemble_batch(const Corpus& corpus,
                           const HardNegativeIndex& index,
                           const Augmenter& augmenter, const TrainConfig& cfg,
                           Rng& rng, uint64_t* augment_counter) {
  cfg.validate();
  if (corpus.size() < cfg.batch_size) {
    throw ValidationError("corpus has " + std::to_string(corpus.size()) +
                          " phrases, batch size is " +
                          std::to_string(cfg.batch_size));
  }
  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<const PhraseRecord*> chosen;
  chosen.reserve(cfg.batch_size);
  for (size_t i = 0; i < cfg.batch_size; ++i) {
    size_t j = i + rng.index(order.size() - i);
    std::swap(order[i], order[j]);
    chosen.push_back(&corpus.records[order[i]]);
  }
  return make_batch(chosen, corpus, index, augmenter, cfg, rng,
                    augment_counter);
}

namespace {

void write_step_log(std::ostream* out, const StepLog& s) {
  if (out == nullptr) return;
  nlohmann::json j;
  j["step"] = s.step;
  j["lr"] = s.lr;
  j["loss_cl"] = s.loss_cl;
  j["loss_ce"] = s.loss_ce;
  j["loss_total"] = s.loss_total;
  (*out) << j.dump() << '\n';
}

void dump_batch(const PhraseBatch& batch, const std::string& path) {
  if (path.empty()) return;
  nlohmann::json j;
  j["anchors"] = batch.anchors;
  j["positives"] = batch.positives;
  j["hard_negatives"] = batch.hard_negatives;
  j["labels"] = batch.labels;
  j["temperature"] = batch.temperature;
  std::ofstream os(path, std::ios::binary);
  if (os) os << j.dump(2) << '\n';
}

}  // namespace

TrainResult train(const Corpus& corpus, const EncoderConfig& encoder_cfg,
                  const TrainConfig& cfg, const HardNegativeIndex& hardneg,
                  const SynonymSource& synonyms,
                  const ParaphraseTable& paraphrases, const TrainIO& io) {
  cfg.validate();
  encoder_cfg.validate();
  if (corpus.empty()) {
    throw ValidationError("cannot train on an empty corpus");
  }

  ModelState model = ModelState::init(encoder_cfg, cfg.seed);
  ModelState initial = model;  // kept for the final weight average
  model.init_optimizer();

  AugmentConfig aug_cfg;
  aug_cfg.seed = cfg.seed;
  Augmenter augmenter(aug_cfg, synonyms, paraphrases);

  TrainResult result;
  uint64_t augment_counter = 0;
  size_t global_step = 0;

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<size_t> order(corpus.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng shuffle_rng = substream(cfg.seed, "shuffle", epoch);
    shuffle_rng.shuffle(order);

    size_t pos = 0;
    while (pos < order.size()) {
      size_t take = std::min(cfg.batch_size, order.size() - pos);
      // A leftover single phrase cannot form a contrastive batch when there
      // are no hard negatives, so it joins the previous chunk instead.
      if (cfg.hard_negatives_per_batch == 0 &&
          order.size() - pos - take == 1) {
        take += 1;
      }
      std::vector<const PhraseRecord*> chosen;
      chosen.reserve(take);
      for (size_t i = 0; i < take; ++i) {
        chosen.push_back(&corpus.records[order[pos + i]]);
      }
      pos += take;
      if (chosen.size() == 1 && cfg.hard_negatives_per_batch == 0) {
        // Whole corpus is a single phrase; nothing to contrast against.
        throw ValidationError(
            "corpus too small to form a contrastive batch without hard "
            "negatives");
      }

      Rng batch_rng = substream(cfg.seed, "negatives", global_step);
      PhraseBatch batch = make_batch(chosen, corpus, hardneg, augmenter, cfg,
                                     batch_rng, &augment_counter);

      double lr = lr_at(global_step, cfg);
      ModelGrads grads(model);
      LossBreakdown loss;
      try {
        loss = total_loss(batch, model, &grads, cfg.ce_weight);
      } catch (const NumericError& e) {
        dump_batch(batch, io.abort_dump_path);
        std::string msg = std::string("aborting at step ") +
                          std::to_string(global_step) + ": " + e.what();
        if (!io.abort_dump_path.empty()) {
          msg += " (batch dumped to " + io.abort_dump_path + ")";
        }
        throw NumericError(msg);
      }

      adam_step(&model.token_table, grads.token_table, &model.opt_token_table,
                lr);
      adam_step(&model.char_table, grads.char_table, &model.opt_char_table,
                lr);
      adam_step(&model.char_projection, grads.char_projection,
                &model.opt_char_projection, lr);
      adam_step(&model.char_bias, grads.char_bias, &model.opt_char_bias, lr);
      adam_step(&model.type_head, grads.type_head, &model.opt_type_head, lr);

      StepLog entry{global_step, lr, loss.contrastive, loss.cross_entropy,
                    loss.total};
      result.log.push_back(entry);
      write_step_log(io.log_out, entry);

      ++global_step;
      if (!io.checkpoint_prefix.empty() && cfg.checkpoint_every > 0 &&
          global_step % cfg.checkpoint_every == 0) {
        save_model(model, io.checkpoint_prefix + ".step-" +
                              std::to_string(global_step) + ".ckpt");
      }
    }
    log_info("epoch ", epoch + 1, "/", cfg.epochs, " done, ", global_step,
             " steps");
  }

  result.model = average_weights(initial, model, cfg.weight_average_alpha);
  return result;
}

namespace {

Matrix blend(const Matrix& a, const Matrix& b, double alpha) {
  Matrix out(a.rows(), a.cols());
  for (size_t i = 0; i < a.size(); ++i) {
    float fa = a.data()[i];
    float fb = b.data()[i];
    // Equal inputs pass through untouched so fixed points hold bit-exactly.
    out.data()[i] =
        fa == fb ? fa
                 : static_cast<float>(alpha * static_cast<double>(fa) +
                                      (1.0 - alpha) * static_cast<double>(fb));
  }
  return out;
}

}  // namespace

ModelState average_weights(const ModelState& original,
                           const ModelState& finetuned, double alpha) {
  if (!(original.config == finetuned.config)) {
    throw FormatError("cannot average models with different configurations");
  }
  if (alpha < 0.0 || alpha > 1.0) {
    throw ValidationError("alpha must be in [0, 1]");
  }
  original.validate_shapes();
  finetuned.validate_shapes();
  ModelState out;
  out.config = original.config;
  if (alpha == 1.0) {
    out.token_table = original.token_table;
    out.char_table = original.char_table;
    out.char_projection = original.char_projection;
    out.char_bias = original.char_bias;
    out.type_head = original.type_head;
  } else if (alpha == 0.0) {
    out.token_table = finetuned.token_table;
    out.char_table = finetuned.char_table;
    out.char_projection = finetuned.char_projection;
    out.char_bias = finetuned.char_bias;
    out.type_head = finetuned.type_head;
  } else {
    out.token_table = blend(original.token_table, finetuned.token_table,
                            alpha);
    out.char_table = blend(original.char_table, finetuned.char_table, alpha);
    out.char_projection = blend(original.char_projection,
                                finetuned.char_projection, alpha);
    out.char_bias = blend(original.char_bias, finetuned.char_bias, alpha);
    out.type_head = blend(original.type_head, finetuned.type_head, alpha);
  }
  out.has_optimizer = false;
  return out;
}

}  // namespace pearlkit
