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
#include <string>
#include <vector>

#include "pearlkit/encoder.h"
#include "pearlkit/numkernel.h"

namespace pearlkit {

inline constexpr double kDefaultTemperature = 0.07;

// Softmax over the 95 type logits (u, v) W. Inputs are the raw branch
// outputs, not the normalized embedding.
Vector type_logit_scores(const Vector& concat_uv, const Matrix& type_head);
Vector type_probabilities(const Vector& u, const Vector& v,
                          const Matrix& type_head);

// Contrastive loss over unit-norm embeddings. For anchor i the positive is
// positives[i]; its negatives are the other B-1 positives plus the shared
// hard negatives. Similarity is the dot product. Returns the mean per-anchor
// loss and the gradients w.r.t. every embedding that entered it.
struct InfoNceResult {
  double loss = 0.0;
  std::vector<Vector> d_anchors;
  std::vector<Vector> d_positives;
  std::vector<Vector> d_hard_negatives;
};

InfoNceResult infonce_loss(const std::vector<Vector>& anchors,
                           const std::vector<Vector>& positives,
                           const std::vector<Vector>& hard_negatives,
                           double temperature);

// -log(probs[label]); the returned gradient is w.r.t. the logits,
// probs - one_hot(label). A zero probability at the label is clamped to
// 1e-12 and counted (see cross_entropy_clamp_count).
struct CrossEntropyResult {
  double loss = 0.0;
  Vector d_logits;
};

CrossEntropyResult cross_entropy_loss(const Vector& probs, int label);
uint64_t cross_entropy_clamp_count();

// One training batch at the phrase level. Hard negatives carry no labels and
// enter only the contrastive term.
struct PhraseBatch {
  std::vector<std::string> anchors;
  std::vector<std::string> positives;
  std::vector<std::string> hard_negatives;
  std::vector<int> labels;
  double temperature = kDefaultTemperature;

  void validate() const;
};

struct LossBreakdown {
  double contrastive = 0.0;
  double cross_entropy = 0.0;
  double total = 0.0;
};

// Contrastive term plus ce_weight times the mean type cross-entropy over
// anchors; gradients for every parameter land in *grads when non-null.
// ce_weight is a debug knob (0 silences the type head); the reference
// objective is the plain unweighted sum, ce_weight = 1.
LossBreakdown total_loss(const PhraseBatch& batch, const ModelState& model,
                         ModelGrads* grads, double ce_weight = 1.0);

}  // namespace pearlkit
