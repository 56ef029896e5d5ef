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
#include <vector>

#include "pearlkit/augment.h"
#include "pearlkit/corpus.h"
#include "pearlkit/encoder.h"
#include "pearlkit/mining.h"
#include "pearlkit/objective.h"

namespace pearlkit {

struct TrainConfig {
  size_t batch_size = 512;
  size_t epochs = 2;
  double lr0 = 3e-5;
  double decay_rate = 0.98;
  size_t decay_every = 2000;
  double temperature = kDefaultTemperature;
  size_t hard_negatives_per_batch = 2;  // K
  uint64_t seed = 0;
  double weight_average_alpha = 0.5;
  double ce_weight = 1.0;
  size_t checkpoint_every = 500;  // steps between periodic saves; 0 disables

  void validate() const;
};

// lr0 * decay_rate^floor(step / decay_every); non-increasing in step.
double lr_at(size_t step, const TrainConfig& cfg);

// Builds one batch from already-chosen records: positives come from the
// augmenter (advancing *augment_counter once per anchor), hard negatives are
// K uniform draws without replacement from the union of the batch phrases'
// stored negative lists, topped up from random corpus phrases when the lists
// run dry.
PhraseBatch make_batch(const std::vector<const PhraseRecord*>& records,
                       const Corpus& corpus, const HardNegativeIndex& index,
                       const Augmenter& augmenter, const TrainConfig& cfg,
                       Rng& rng, uint64_t* augment_counter);

// Samples batch_size records without replacement and delegates to
// make_batch. The corpus must hold at least batch_size records.
PhraseBatch assemble_batch(const Corpus& corpus,
                           const HardNegativeIndex& index,
                           const Augmenter& augmenter, const TrainConfig& cfg,
                           Rng& rng, uint64_t* augment_counter);

struct StepLog {
  size_t step = 0;
  double lr = 0.0;
  double loss_cl = 0.0;
  double loss_ce = 0.0;
  double loss_total = 0.0;
};

struct TrainIO {
  // Prefix for periodic checkpoints ("<prefix>.step-N.ckpt"); empty disables.
  std::string checkpoint_prefix;
  // JSONL step log destination; null discards.
  std::ostream* log_out = nullptr;
  // Where to dump the offending batch if the loss turns non-finite.
  std::string abort_dump_path;
};

struct TrainResult {
  ModelState model;  // weight-averaged final state, optimizer dropped
  std::vector<StepLog> log;
};

// Epochs of shuffled passes over the corpus (order from (seed, epoch)),
// chunked into batches; each step runs the full objective and one Adam
// update per parameter under the decayed learning rate. The final state is
// blended with the initial one by weight_average_alpha.
TrainResult train(const Corpus& corpus, const EncoderConfig& encoder_cfg,
                  const TrainConfig& cfg, const HardNegativeIndex& hardneg,
                  const SynonymSource& synonyms,
                  const ParaphraseTable& paraphrases, const TrainIO& io = {});

// alpha * original + (1 - alpha) * finetuned per parameter, optimizer states
// dropped. alpha 0 or 1 returns the respective input's weights bit-exactly,
// as does any alpha when both inputs agree on an element.
ModelState average_weights(const ModelState& original,
                           const ModelState& finetuned, double alpha);

}  // namespace pearlkit
