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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "pearlkit/corpus.h"
#include "pearlkit/errors.h"
#include "pearlkit/objective.h"
#include "pearlkit/rng.h"

using namespace pearlkit;

namespace {

Vector unit(std::initializer_list<double> xs) {
  Vector v(xs);
  double n = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
  for (double& x : v) x /= n;
  return v;
}

Vector basis(size_t dim, size_t axis) {
  Vector v(dim, 0.0);
  v[axis] = 1.0;
  return v;
}

std::vector<Vector> random_unit_vectors(size_t count, size_t dim, Rng& rng) {
  std::vector<Vector> out;
  for (size_t i = 0; i < count; ++i) {
    Vector v(dim);
    double n = 0.0;
    do {
      n = 0.0;
      for (double& x : v) {
        x = rng.uniform(-1.0, 1.0);
        n += x * x;
      }
    } while (n < 1e-4);
    n = std::sqrt(n);
    for (double& x : v) x /= n;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

TEST_CASE("one pair against one orthogonal negative at unit temperature") {
  // sim(h, h+) = 1 and sim(h, h-) = 0 give -log(e / (e + 1)).
  Vector h = basis(4, 0);
  Vector neg = basis(4, 1);
  InfoNceResult res = infonce_loss({h}, {h}, {neg}, 1.0);
  CHECK(res.loss == doctest::Approx(0.3132616875182228).epsilon(1e-12));
}

TEST_CASE("all similarities equal gives log of the candidate count") {
  Vector h = basis(3, 0);
  // One negative identical to the positive: probabilities 1/2 each.
  InfoNceResult res = infonce_loss({h}, {h}, {h}, 0.07);
  CHECK(res.loss == doctest::Approx(0.6931471805599453).epsilon(1e-12));
  // Three identical negatives: -log(1/4).
  InfoNceResult res4 = infonce_loss({h}, {h}, {h, h, h}, 0.07);
  CHECK(res4.loss == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("near perfect separation drives the loss to zero") {
  Vector h = basis(4, 0);
  Vector n1 = basis(4, 1);
  Vector n2 = basis(4, 2);
  InfoNceResult res = infonce_loss({h}, {h}, {n1, n2}, 0.07);
  CHECK(res.loss >= 0.0);
  CHECK(res.loss < 1e-5);
}

TEST_CASE("loss is never negative on random batches") {
  Rng rng(41);
  for (int it = 0; it < 50; ++it) {
    size_t b = 2 + rng.index(3);
    size_t k = rng.index(3);
    size_t dim = 3 + rng.index(4);
    auto anchors = random_unit_vectors(b, dim, rng);
    auto positives = random_unit_vectors(b, dim, rng);
    auto negs = random_unit_vectors(k, dim, rng);
    InfoNceResult res = infonce_loss(anchors, positives, negs, 0.07);
    CHECK(res.loss >= 0.0);
  }
}

TEST_CASE("batch needs some negative to push against") {
  Vector h = basis(2, 0);
  CHECK_THROWS_AS(infonce_loss({h}, {h}, {}, 0.07), ValidationError);
  CHECK_THROWS_AS(infonce_loss({}, {}, {}, 0.07), ValidationError);
  CHECK_THROWS_AS(infonce_loss({h}, {h, h}, {}, 0.07), ValidationError);
  CHECK_THROWS_AS(infonce_loss({h}, {h}, {h}, 0.0), ValidationError);
  CHECK_THROWS_AS(infonce_loss({h}, {h}, {h}, -1.0), ValidationError);
  // B = 2 with no hard negatives is the smallest self-sufficient batch.
  CHECK_NOTHROW(infonce_loss({h, h}, {h, h}, {}, 0.07));
}

TEST_CASE("in-batch negatives are the other positives") {
  // B=2, K=0: anchor 0 scores its positive (dot 1) against positive 1
  // (dot 0), and symmetrically. Each anchor reproduces the closed form at
  // temperature 1, so the mean does too.
  Vector a0 = basis(4, 0), a1 = basis(4, 1);
  InfoNceResult res = infonce_loss({a0, a1}, {a0, a1}, {}, 1.0);
  CHECK(res.loss == doctest::Approx(0.3132616875182228).epsilon(1e-12));
}

TEST_CASE("decreasing a negative similarity never raises the loss") {
  // Anchor on the x axis; slide the negative from aligned to anti-aligned.
  Vector h = basis(2, 0);
  Vector pos = unit({0.9, std::sqrt(1.0 - 0.81)});
  double prev = std::numeric_limits<double>::infinity();
  for (double s = 0.95; s >= -0.95; s -= 0.05) {
    Vector neg = unit({s, std::sqrt(1.0 - s * s)});
    double loss = infonce_loss({h}, {pos}, {neg}, 0.07).loss;
    CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
}

TEST_CASE("lower temperature widens the hard-easy gap") {
  // Fixed embeddings: positive similarity 0.92, hard negative at 0.9,
  // easy negative at 0.0. With the positive too close to 1 the property
  // flips, so the pinned embeddings keep a 0.02 margin between positive
  // and hard negative.
  Vector anchor = basis(2, 0);
  Vector pos = unit({0.92, std::sqrt(1.0 - 0.92 * 0.92)});
  Vector hard = unit({0.9, std::sqrt(1.0 - 0.81)});
  Vector easy = basis(2, 1);

  auto gap = [&](double tau) {
    double hard_loss = infonce_loss({anchor}, {pos}, {hard}, tau).loss;
    double easy_loss = infonce_loss({anchor}, {pos}, {easy}, tau).loss;
    return hard_loss - easy_loss;
  };
  CHECK(gap(0.07) > gap(1.0));
}

TEST_CASE("anchor order does not change the mean loss") {
  Rng rng(43);
  auto anchors = random_unit_vectors(4, 5, rng);
  auto positives = random_unit_vectors(4, 5, rng);
  auto negs = random_unit_vectors(2, 5, rng);
  double base = infonce_loss(anchors, positives, negs, 0.07).loss;

  std::vector<size_t> perm = {2, 0, 3, 1};
  std::vector<Vector> pa, pp;
  for (size_t i : perm) {
    pa.push_back(anchors[i]);
    pp.push_back(positives[i]);
  }
  double permuted = infonce_loss(pa, pp, negs, 0.07).loss;
  CHECK(permuted == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("contrastive gradients match finite differences") {
  Rng rng(44);
  for (int it = 0; it < 20; ++it) {
    size_t b = 1 + rng.index(3);
    size_t k = 1 + rng.index(2);
    size_t dim = 2 + rng.index(5);
    auto anchors = random_unit_vectors(b, dim, rng);
    auto positives = random_unit_vectors(b, dim, rng);
    auto negs = random_unit_vectors(k, dim, rng);
    double tau = 0.2 + rng.uniform01() * 0.8;

    InfoNceResult res = infonce_loss(anchors, positives, negs, tau);
    const double eps = 1e-6;
    auto check_grad = [&](std::vector<Vector>& family, size_t vi, size_t d,
                          double analytic) {
      double orig = family[vi][d];
      family[vi][d] = orig + eps;
      double up = infonce_loss(anchors, positives, negs, tau).loss;
      family[vi][d] = orig - eps;
      double down = infonce_loss(anchors, positives, negs, tau).loss;
      family[vi][d] = orig;
      double fd = (up - down) / (2 * eps);
      if (std::abs(fd) < 1e-10 && std::abs(analytic) < 1e-10) return;
      CHECK(analytic == doctest::Approx(fd).epsilon(1e-5));
    };
    for (size_t i = 0; i < b; ++i) {
      for (size_t d = 0; d < dim; ++d) {
        check_grad(anchors, i, d, res.d_anchors[i][d]);
        check_grad(positives, i, d, res.d_positives[i][d]);
      }
    }
    for (size_t j = 0; j < k; ++j) {
      for (size_t d = 0; d < dim; ++d) {
        check_grad(negs, j, d, res.d_hard_negatives[j][d]);
      }
    }
  }
}

TEST_CASE("type probabilities are uniform under zero weights") {
  Matrix w(7, 95);  // all zeros
  Vector probs = type_probabilities(Vector(4, 0.3), Vector(3, -0.2), w);
  REQUIRE(probs.size() == 95);
  double sum = 0.0;
  for (double p : probs) {
    CHECK(p == doctest::Approx(1.0 / 95).epsilon(1e-12));
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("type head rejects a row count that misses the input width") {
  Matrix w(6, 95);
  CHECK_THROWS_AS(type_probabilities(Vector(4, 0.1), Vector(3, 0.1), w),
                  DimensionError);
  Matrix wide(8, 95);
  CHECK_THROWS_AS(type_probabilities(Vector(4, 0.1), Vector(3, 0.1), wide),
                  DimensionError);
  // The column count is free here; the class count is enforced where labels
  // are checked against it.
  Matrix narrow(7, 10);
  CHECK(type_probabilities(Vector(4, 0.1), Vector(3, 0.1), narrow).size() ==
        10);
}

TEST_CASE("scaling the type head input preserves the argmax") {
  Rng rng(45);
  for (int it = 0; it < 30; ++it) {
    Matrix w(9, 95);
    for (size_t r = 0; r < w.rows(); ++r) {
      for (size_t c = 0; c < w.cols(); ++c) {
        w.at(r, c) = static_cast<float>(rng.uniform(-1.0, 1.0));
      }
    }
    Vector u(5), v(4);
    for (double& x : u) x = rng.uniform(-1.0, 1.0);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    Vector p1 = type_probabilities(u, v, w);
    Vector u2 = u, v2 = v;
    for (double& x : u2) x *= 2.0;
    for (double& x : v2) x *= 2.0;
    Vector p2 = type_probabilities(u2, v2, w);
    size_t arg1 = std::max_element(p1.begin(), p1.end()) - p1.begin();
    size_t arg2 = std::max_element(p2.begin(), p2.end()) - p2.begin();
    CHECK(arg1 == arg2);
  }
}

TEST_CASE("cross entropy closed forms") {
  Vector uniform(95, 1.0 / 95);
  CrossEntropyResult res = cross_entropy_loss(uniform, 17);
  CHECK(res.loss == doctest::Approx(4.553876891600541).epsilon(1e-12));

  Vector two = {0.5, 0.5};
  CHECK(cross_entropy_loss(two, 0).loss ==
        doctest::Approx(0.6931471805599453).epsilon(1e-12));

  Vector perfect(95, 0.0);
  perfect[3] = 1.0;
  CHECK(cross_entropy_loss(perfect, 3).loss == doctest::Approx(0.0));
}

TEST_CASE("cross entropy gradient is probs minus one hot") {
  Vector probs = {0.2, 0.5, 0.3};
  CrossEntropyResult res = cross_entropy_loss(probs, 1);
  REQUIRE(res.d_logits.size() == 3);
  CHECK(res.d_logits[0] == doctest::Approx(0.2));
  CHECK(res.d_logits[1] == doctest::Approx(-0.5));
  CHECK(res.d_logits[2] == doctest::Approx(0.3));
}

TEST_CASE("zero probability is clamped and counted") {
  uint64_t before = cross_entropy_clamp_count();
  Vector probs = {1.0, 0.0};
  CrossEntropyResult res = cross_entropy_loss(probs, 1);
  CHECK(res.loss == doctest::Approx(-std::log(1e-12)).epsilon(1e-9));
  CHECK(cross_entropy_clamp_count() == before + 1);
}

TEST_CASE("cross entropy rejects a bad label") {
  Vector probs(95, 1.0 / 95);
  CHECK_THROWS_AS(cross_entropy_loss(probs, -1), ValidationError);
  CHECK_THROWS_AS(cross_entropy_loss(probs, 95), ValidationError);
}

TEST_CASE("total loss adds the two parts and honors the debug weight") {
  EncoderConfig cfg;
  cfg.token_dim = 5;
  cfg.char_dim = 4;
  cfg.char_hidden_dim = 4;
  cfg.num_token_buckets = 31;
  cfg.num_char_buckets = 41;
  cfg.char_ngram_sizes = {3};
  ModelState model = ModelState::init(cfg, 7);

  PhraseBatch batch;
  batch.anchors = {"alpha one", "beta two"};
  batch.positives = {"alpha 1", "beta 2"};
  batch.hard_negatives = {"gamma three"};
  batch.labels = {3, 40};
  batch.temperature = 0.07;

  ModelGrads grads(model);
  LossBreakdown full = total_loss(batch, model, &grads, 1.0);
  CHECK(full.total ==
        doctest::Approx(full.contrastive + full.cross_entropy).epsilon(1e-12));

  ModelGrads grads0(model);
  LossBreakdown cl_only = total_loss(batch, model, &grads0, 0.0);
  CHECK(cl_only.total == cl_only.contrastive);
  CHECK(cl_only.contrastive == doctest::Approx(full.contrastive));

  ModelGrads grads_half(model);
  LossBreakdown half = total_loss(batch, model, &grads_half, 0.5);
  CHECK(half.total ==
        doctest::Approx(half.contrastive + 0.5 * half.cross_entropy));
}

TEST_CASE("total loss batch validation") {
  EncoderConfig cfg;
  cfg.token_dim = 4;
  cfg.char_dim = 3;
  cfg.char_hidden_dim = 4;
  cfg.num_token_buckets = 17;
  cfg.num_char_buckets = 19;
  cfg.char_ngram_sizes = {3};
  ModelState model = ModelState::init(cfg, 8);

  PhraseBatch bad;
  bad.anchors = {"a b"};
  bad.positives = {"a b", "c d"};
  bad.labels = {0};
  ModelGrads grads(model);
  CHECK_THROWS_AS(total_loss(bad, model, &grads), ValidationError);

  PhraseBatch lone;
  lone.anchors = {"a b"};
  lone.positives = {"a c"};
  lone.labels = {0};
  ModelGrads grads2(model);
  CHECK_THROWS_AS(total_loss(lone, model, &grads2), ValidationError);

  PhraseBatch bad_label;
  bad_label.anchors = {"a b", "c d"};
  bad_label.positives = {"a c", "c e"};
  bad_label.labels = {0, 95};
  ModelGrads grads3(model);
  CHECK_THROWS_AS(total_loss(bad_label, model, &grads3), ValidationError);
}

TEST_CASE("total loss gradients match finite differences") {
  // Small dims keep the parameter sweep cheap; f32 storage with double
  // arithmetic needs the finite difference to divide by the realized f32
  // delta rather than the nominal epsilon.
  EncoderConfig cfg;
  cfg.token_dim = 4;
  cfg.char_dim = 3;
  cfg.char_hidden_dim = 4;
  cfg.num_token_buckets = 23;
  cfg.num_char_buckets = 29;
  cfg.char_ngram_sizes = {3};
  ModelState model = ModelState::init(cfg, 9);

  PhraseBatch batch;
  batch.anchors = {"ab cd", "ef gh"};
  batch.positives = {"ab ce", "ef gg"};
  batch.hard_negatives = {"xy zw"};
  batch.labels = {10, 60};
  batch.temperature = 0.2;

  ModelGrads grads(model);
  total_loss(batch, model, &grads, 1.0);

  auto loss_of = [&](const ModelState& s) {
    ModelGrads scratch(s);
    return total_loss(batch, s, &scratch, 1.0).total;
  };

  auto check_table = [&](Matrix ModelState::* member,
                         const GradMatrix& analytic, size_t samples,
                         uint64_t seed) {
    Rng rng(seed);
    const Matrix& table = model.*member;
    for (size_t s = 0; s < samples; ++s) {
      size_t r = rng.index(table.rows());
      size_t c = rng.index(table.cols());
      ModelState plus = model, minus = model;
      float orig = table.at(r, c);
      (plus.*member).at(r, c) = orig + 1e-3f;
      (minus.*member).at(r, c) = orig - 1e-3f;
      double delta = double((plus.*member).at(r, c)) -
                     double((minus.*member).at(r, c));
      double fd = (loss_of(plus) - loss_of(minus)) / delta;
      double got = analytic.at(r, c);
      if (std::abs(fd) < 1e-8 && std::abs(got) < 1e-8) continue;
      CHECK(got == doctest::Approx(fd).epsilon(1e-3));
    }
  };
  check_table(&ModelState::token_table, grads.token_table, 40, 101);
  check_table(&ModelState::char_table, grads.char_table, 40, 102);
  check_table(&ModelState::char_projection, grads.char_projection, 12, 103);
  check_table(&ModelState::char_bias, grads.char_bias, 3, 104);
  check_table(&ModelState::type_head, grads.type_head, 60, 105);
}
