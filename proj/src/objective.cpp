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

#include "pearlkit/objective.h"

#include <atomic>
#include <cmath>

#include "pearlkit/errors.h"

namespace pearlkit {

namespace {
std::atomic<uint64_t> g_ce_clamp_count{0};
}

Vector type_logit_scores(const Vector& concat_uv, const Matrix& type_head) {
  return matvec(concat_uv, type_head);
}

Vector type_probabilities(const Vector& u, const Vector& v,
                          const Matrix& type_head) {
  Vector concat;
  concat.reserve(u.size() + v.size());
  concat.insert(concat.end(), u.begin(), u.end());
  concat.insert(concat.end(), v.begin(), v.end());
  return softmax(type_logit_scores(concat, type_head));
}

InfoNceResult infonce_loss(const std::vector<Vector>& anchors,
                           const std::vector<Vector>& positives,
                           const std::vector<Vector>& hard_negatives,
                           double temperature) {
  size_t b = anchors.size();
  size_t k = hard_negatives.size();
  if (b == 0) {
    throw ValidationError("contrastive batch is empty");
  }
  if (positives.size() != b) {
    throw ValidationError("anchors and positives differ in length");
  }
  if (b < 2 && k == 0) {
    throw ValidationError(
        "contrastive loss needs negatives: batch size >= 2 or at least one "
        "hard negative");
  }
  if (temperature <= 0.0) {
    throw ValidationError("temperature must be positive");
  }

  InfoNceResult res;
  res.d_anchors.assign(b, Vector(anchors[0].size(), 0.0));
  res.d_positives.assign(b, Vector(anchors[0].size(), 0.0));
  res.d_hard_negatives.assign(k, Vector(anchors[0].size(), 0.0));

  double inv_b = 1.0 / static_cast<double>(b);
  for (size_t i = 0; i < b; ++i) {
    // Logit 0 is the positive; the rest are the other positives followed by
    // the shared hard negatives.
    std::vector<const Vector*> negs;
    negs.reserve(b - 1 + k);
    for (size_t j = 0; j < b; ++j) {
      if (j != i) negs.push_back(&positives[j]);
    }
    for (size_t j = 0; j < k; ++j) negs.push_back(&hard_negatives[j]);

    Vector logits(1 + negs.size());
    logits[0] = dot(anchors[i], positives[i]) / temperature;
    for (size_t j = 0; j < negs.size(); ++j) {
      logits[1 + j] = dot(anchors[i], *negs[j]) / temperature;
    }
    Vector p = softmax(logits);
    if (p[0] <= 0.0) {
      throw NumericError("contrastive softmax underflow");
    }
    res.loss += -std::log(p[0]) * inv_b;

    // d loss_i / d logit_j = p_j - [j == 0]; chain through sim / temperature
    // and the bilinear dot products, with the 1/B mean folded in.
    double coeff0 = (p[0] - 1.0) / temperature * inv_b;
    for (size_t d = 0; d < anchors[i].size(); ++d) {
      res.d_anchors[i][d] += coeff0 * positives[i][d];
      res.d_positives[i][d] += coeff0 * anchors[i][d];
    }
    for (size_t j = 0; j < negs.size(); ++j) {
      double coeff = p[1 + j] / temperature * inv_b;
      Vector* dneg = j < b - 1 ? &res.d_positives[j < i ? j : j + 1]
                               : &res.d_hard_negatives[j - (b - 1)];
      for (size_t d = 0; d < anchors[i].size(); ++d) {
        res.d_anchors[i][d] += coeff * (*negs[j])[d];
        (*dneg)[d] += coeff * anchors[i][d];
      }
    }
  }
  if (!std::isfinite(res.loss)) {
    throw NumericError("contrastive loss is not finite");
  }
  return res;
}

CrossEntropyResult cross_entropy_loss(const Vector& probs, int label) {
  if (label < 0 || static_cast<size_t>(label) >= probs.size()) {
    throw ValidationError("cross-entropy label out of range");
  }
  double p = probs[static_cast<size_t>(label)];
  if (p <= 0.0) {
    p = 1e-12;
    g_ce_clamp_count.fetch_add(1, std::memory_order_relaxed);
  }
  CrossEntropyResult res;
  res.loss = -std::log(p);
  res.d_logits = probs;
  res.d_logits[static_cast<size_t>(label)] -= 1.0;
  return res;
}

uint64_t cross_entropy_clamp_count() {
  return g_ce_clamp_count.load(std::memory_order_relaxed);
}

void PhraseBatch::validate() const {
  if (anchors.size() != positives.size() || anchors.size() != labels.size()) {
    throw ValidationError("batch anchors, positives, labels differ in length");
  }
  if (anchors.empty()) {
    throw ValidationError("batch is empty");
  }
  if (anchors.size() < 2 && hard_negatives.empty()) {
    throw ValidationError(
        "batch needs at least two pairs or one hard negative");
  }
  if (temperature <= 0.0) {
    throw ValidationError("temperature must be positive");
  }
  for (int label : labels) {
    if (label < 0 || label >= kNumPhraseTypes) {
      throw ValidationError("type label out of range: " +
                            std::to_string(label));
    }
  }
}

LossBreakdown total_loss(const PhraseBatch& batch, const ModelState& model,
                         ModelGrads* grads, double ce_weight) {
  batch.validate();
  size_t b = batch.anchors.size();
  size_t k = batch.hard_negatives.size();

  std::vector<EncodeTrace> anchor_traces(b);
  std::vector<EncodeTrace> positive_traces(b);
  std::vector<EncodeTrace> negative_traces(k);
  std::vector<Vector> anchor_h(b), positive_h(b), negative_h(k);
  for (size_t i = 0; i < b; ++i) {
    anchor_h[i] = encode(batch.anchors[i], model, &anchor_traces[i]);
    positive_h[i] = encode(batch.positives[i], model, &positive_traces[i]);
  }
  for (size_t j = 0; j < k; ++j) {
    negative_h[j] = encode(batch.hard_negatives[j], model,
                           &negative_traces[j]);
  }

  InfoNceResult cl =
      infonce_loss(anchor_h, positive_h, negative_h, batch.temperature);

  // Type head runs on the raw concatenation from each anchor's trace; the
  // cross-entropy mean over anchors produces a per-anchor logit gradient
  // that flows back through the same trace alongside the contrastive one.
  double ce_sum = 0.0;
  double inv_b = 1.0 / static_cast<double>(b);
  std::vector<Vector> anchor_dconcat(b);
  for (size_t i = 0; i < b; ++i) {
    const Vector& concat = anchor_traces[i].concat;
    Vector probs = softmax(type_logit_scores(concat, model.type_head));
    CrossEntropyResult ce = cross_entropy_loss(probs, batch.labels[i]);
    ce_sum += ce.loss;
    if (grads != nullptr && ce_weight != 0.0) {
      for (double& g : ce.d_logits) g *= ce_weight * inv_b;
      matvec_backward(concat, model.type_head, ce.d_logits,
                      &anchor_dconcat[i], &grads->type_head);
    }
  }

  LossBreakdown out;
  out.contrastive = cl.loss;
  out.cross_entropy = ce_sum * inv_b;
  out.total = out.contrastive + ce_weight * out.cross_entropy;
  if (!std::isfinite(out.total)) {
    throw NumericError("total loss is not finite");
  }

  if (grads != nullptr) {
    for (size_t i = 0; i < b; ++i) {
      const Vector* dc =
          anchor_dconcat[i].empty() ? nullptr : &anchor_dconcat[i];
      encode_backward(anchor_traces[i], model, cl.d_anchors[i], dc, grads);
      encode_backward(positive_traces[i], model, cl.d_positives[i], nullptr,
                      grads);
    }
    for (size_t j = 0; j < k; ++j) {
      encode_backward(negative_traces[j], model, cl.d_hard_negatives[j],
                      nullptr, grads);
    }
  }
  return out;
}

}  // namespace pearlkit
