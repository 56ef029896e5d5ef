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

#include "pearlkit/evalharness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "pearlkit/errors.h"
#include "pearlkit/parallel.h"
#include "pearlkit/rng.h"
#include "pearlkit/utf8.h"

namespace pearlkit {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw ValidationError("pearson: input lengths differ");
  }
  if (x.size() < 2) {
    throw ValidationError("pearson: need at least two points");
  }
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("pearson: zero variance input");
  }
  return sxy / std::sqrt(sxx * syy);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& gold) {
  if (pred.size() != gold.size()) {
    throw ValidationError("nmi: input lengths differ");
  }
  if (pred.empty()) {
    throw ValidationError("nmi: empty input");
  }
  double n = static_cast<double>(pred.size());
  std::map<int, double> cp, cg;
  std::map<std::pair<int, int>, double> joint;
  for (size_t i = 0; i < pred.size(); ++i) {
    cp[pred[i]] += 1.0;
    cg[gold[i]] += 1.0;
    joint[{pred[i], gold[i]}] += 1.0;
  }
  double hp = 0.0, hg = 0.0;
  for (const auto& [_, c] : cp) {
    double p = c / n;
    hp -= p * std::log(p);
  }
  for (const auto& [_, c] : cg) {
    double p = c / n;
    hg -= p * std::log(p);
  }
  if (hp == 0.0 && hg == 0.0) return 1.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    double pij = c / n;
    double pi = cp[key.first] / n;
    double pj = cg[key.second] / n;
    mi += pij * std::log(pij / (pi * pj));
  }
  double denom = 0.5 * (hp + hg);
  double value = mi / denom;
  return std::clamp(value, 0.0, 1.0);
}

namespace {

double sq_distance(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

struct KmeansRun {
  std::vector<int> assignment;
  double inertia = 0.0;
};

KmeansRun kmeans_once(const std::vector<Vector>& vectors, size_t k, Rng& rng) {
  size_t n = vectors.size();
  std::vector<Vector> centroids;
  centroids.reserve(k);

  // k-means++: first centroid uniform, the rest proportional to squared
  // distance from the nearest chosen centroid.
  centroids.push_back(vectors[rng.index(n)]);
  std::vector<double> d2(n);
  for (size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double best = sq_distance(vectors[i], centroids[0]);
      for (size_t j = 1; j < centroids.size(); ++j) {
        best = std::min(best, sq_distance(vectors[i], centroids[j]));
      }
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // All points coincide with chosen centroids; any choice is equivalent.
      centroids.push_back(vectors[rng.index(n)]);
      continue;
    }
    double target = rng.uniform01() * total;
    size_t pick = n - 1;
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
      acc += d2[i];
      if (acc >= target) {
        pick = i;
        break;
      }
    }
    centroids.push_back(vectors[pick]);
  }

  std::vector<int> assignment(n, 0);
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double best = sq_distance(vectors[i], centroids[0]);
      int arg = 0;
      for (size_t j = 1; j < k; ++j) {
        double d = sq_distance(vectors[i], centroids[j]);
        if (d < best) {
          best = d;
          arg = static_cast<int>(j);
        }
      }
      if (assignment[i] != arg) {
        assignment[i] = arg;
        changed = true;
      }
      inertia += best;
    }
    if (inertia > prev_inertia + 1e-9) {
      throw NumericError("kmeans inertia increased across iterations");
    }
    prev_inertia = inertia;
    if (!changed && iter > 0) break;

    std::vector<Vector> sums(k, Vector(vectors[0].size(), 0.0));
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      size_t a = static_cast<size_t>(assignment[i]);
      counts[a] += 1;
      for (size_t d = 0; d < vectors[i].size(); ++d) {
        sums[a][d] += vectors[i][d];
      }
    }
    for (size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        size_t far = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
          double d = sq_distance(
              vectors[i], centroids[static_cast<size_t>(assignment[i])]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centroids[j] = vectors[far];
        // Inertia may rise transiently after a re-seed; reset the monotone
        // baseline so the assertion tracks Lloyd steps only.
        prev_inertia = std::numeric_limits<double>::infinity();
      } else {
        for (size_t d = 0; d < sums[j].size(); ++d) {
          centroids[j][d] = sums[j][d] / static_cast<double>(counts[j]);
        }
      }
    }
  }
  return {assignment, prev_inertia};
}

}  // namespace

std::vector<int> kmeans(const std::vector<Vector>& vectors, size_t k,
                        uint64_t seed, size_t restarts) {
  if (k == 0) throw ValidationError("kmeans: k must be positive");
  if (vectors.size() < k) {
    throw ValidationError("kmeans: fewer vectors than clusters");
  }
  if (restarts == 0) throw ValidationError("kmeans: restarts must be >= 1");
  KmeansRun best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < restarts; ++r) {
    Rng rng = substream(seed, "kmeans", r);
    KmeansRun run = kmeans_once(vectors, k, rng);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best.assignment;
}

namespace {

std::vector<Vector> embed_all(const std::vector<std::string>& phrases,
                              const ModelState& model, int threads) {
  std::vector<Vector> out(phrases.size());
  parallel_for(phrases.size(), threads,
               [&](size_t i) { out[i] = encode(phrases[i], model); });
  return out;
}

size_t nearest_index(const Vector& q, const std::vector<Vector>& pool,
                     const std::vector<size_t>* candidates) {
  size_t best_idx = 0;
  double best = -2.0;
  if (candidates != nullptr) {
    best_idx = (*candidates)[0];
    for (size_t c : *candidates) {
      double s = dot(q, pool[c]);
      if (s > best || (s == best && c < best_idx)) {
        best = s;
        best_idx = c;
      }
    }
  } else {
    for (size_t i = 0; i < pool.size(); ++i) {
      double s = dot(q, pool[i]);
      if (s > best) {
        best = s;
        best_idx = i;
      }
    }
  }
  return best_idx;
}

// Distinct char n-grams of every whitespace token, used for the retrieval
// prefilter. Sizes follow the model's configured n-gram sizes.
std::vector<std::string> prefilter_grams(const std::string& phrase,
                                         const EncoderConfig& cfg) {
  std::vector<std::string> grams;
  for (const std::string& tok : split_whitespace(phrase)) {
    std::vector<std::string> g = char_ngrams(tok, cfg.char_ngram_sizes);
    grams.insert(grams.end(), g.begin(), g.end());
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

}  // namespace

RetrievalResult eval_retrieval(const RetrievalTask& task,
                               const ModelState& model,
                               const RetrievalOptions& opts) {
  if (task.dictionary.empty()) {
    throw ValidationError("retrieval: empty dictionary");
  }
  for (const auto& [mention, gold] : task.queries) {
    if (gold >= task.dictionary.size()) {
      throw ValidationError("retrieval: gold index out of range for \"" +
                            mention + "\"");
    }
  }
  std::vector<Vector> dict_emb =
      embed_all(task.dictionary, model, opts.threads);

  // Inverted index from n-gram to dictionary entries, built once.
  std::unordered_map<std::string, std::vector<uint32_t>> inverted;
  bool prefilter = opts.prefilter_c > 0;
  if (prefilter) {
    for (size_t i = 0; i < task.dictionary.size(); ++i) {
      for (const std::string& g :
           prefilter_grams(task.dictionary[i], model.config)) {
        inverted[g].push_back(static_cast<uint32_t>(i));
      }
    }
  }

  RetrievalResult res;
  res.predictions.assign(task.queries.size(), 0);
  std::vector<size_t> correct(task.queries.size(), 0);
  parallel_for(task.queries.size(), opts.threads, [&](size_t q) {
    const auto& [mention, gold] = task.queries[q];
    Vector h = encode(mention, model);
    size_t pred;
    if (prefilter) {
      std::vector<uint32_t> overlap(task.dictionary.size(), 0);
      for (const std::string& g : prefilter_grams(mention, model.config)) {
        auto it = inverted.find(g);
        if (it == inverted.end()) continue;
        for (uint32_t d : it->second) overlap[d] += 1;
      }
      std::vector<size_t> order(task.dictionary.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      size_t c = std::min(opts.prefilter_c, order.size());
      std::partial_sort(order.begin(), order.begin() + c, order.end(),
                        [&](size_t x, size_t y) {
                          if (overlap[x] != overlap[y]) {
                            return overlap[x] > overlap[y];
                          }
                          return x < y;
                        });
      order.resize(c);
      std::sort(order.begin(), order.end());
      pred = nearest_index(h, dict_emb, &order);
    } else {
      pred = nearest_index(h, dict_emb, nullptr);
    }
    res.predictions[q] = pred;
    correct[q] = pred == gold ? 1 : 0;
  });
  size_t hits = 0;
  for (size_t c : correct) hits += c;
  res.accuracy = task.queries.empty()
                     ? 0.0
                     : static_cast<double>(hits) /
                           static_cast<double>(task.queries.size());
  return res;
}

namespace {

// One-hidden-layer probe used for pair classification over frozen
// embeddings.
struct Probe {
  Matrix w1, b1, w2, b2;
  AdamState s_w1, s_b1, s_w2, s_b2;

  Probe(size_t in_dim, size_t hidden, uint64_t seed)
      : w1(in_dim, hidden), b1(1, hidden), w2(hidden, 1), b2(1, 1) {
    Rng r1 = substream(seed, "probe.w1");
    xavier_uniform_init(&w1, &r1);
    Rng r2 = substream(seed, "probe.w2");
    xavier_uniform_init(&w2, &r2);
    s_w1 = AdamState(w1);
    s_b1 = AdamState(b1);
    s_w2 = AdamState(w2);
    s_b2 = AdamState(b2);
  }

  double predict(const Vector& x, Vector* hidden_out = nullptr) const {
    Vector z1 = matvec(x, w1);
    for (size_t i = 0; i < z1.size(); ++i) {
      z1[i] += static_cast<double>(b1.at(0, i));
      if (z1[i] < 0.0) z1[i] = 0.0;
    }
    Vector z2 = matvec(z1, w2);
    double logit = z2[0] + static_cast<double>(b2.at(0, 0));
    if (hidden_out != nullptr) *hidden_out = std::move(z1);
    return 1.0 / (1.0 + std::exp(-logit));
  }
};

Vector pair_features(const LabeledPair& p,
                     const std::unordered_map<std::string, Vector>& cache) {
  const Vector& ha = cache.at(p.a);
  const Vector& hb = cache.at(p.b);
  Vector x;
  x.reserve(ha.size() + hb.size());
  x.insert(x.end(), ha.begin(), ha.end());
  x.insert(x.end(), hb.begin(), hb.end());
  return x;
}

double accuracy_on(const Probe& probe, const std::vector<Vector>& xs,
                   const std::vector<double>& ys) {
  size_t hits = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double p = probe.predict(xs[i]);
    int pred = p >= 0.5 ? 1 : 0;
    if (pred == static_cast<int>(ys[i] >= 0.5)) ++hits;
  }
  return xs.empty() ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(xs.size());
}

}  // namespace

double eval_paraphrase(const std::vector<LabeledPair>& train,
                       const std::vector<LabeledPair>& dev,
                       const std::vector<LabeledPair>& test,
                       const ModelState& model, uint64_t seed) {
  if (train.empty() || dev.empty() || test.empty()) {
    throw ValidationError("paraphrase eval: empty split");
  }
  bool has_pos = false, has_neg = false;
  for (const LabeledPair& p : train) {
    if (p.label >= 0.5) {
      has_pos = true;
    } else {
      has_neg = true;
    }
  }
  if (!has_pos || !has_neg) {
    throw ValidationError("paraphrase eval: training split has one class");
  }

  std::unordered_map<std::string, Vector> cache;
  auto warm = [&](const std::vector<LabeledPair>& split) {
    for (const LabeledPair& p : split) {
      if (!cache.count(p.a)) cache[p.a] = encode(p.a, model);
      if (!cache.count(p.b)) cache[p.b] = encode(p.b, model);
    }
  };
  warm(train);
  warm(dev);
  warm(test);

  auto featurize = [&](const std::vector<LabeledPair>& split,
                       std::vector<Vector>* xs, std::vector<double>* ys) {
    for (const LabeledPair& p : split) {
      xs->push_back(pair_features(p, cache));
      ys->push_back(p.label);
    }
  };
  std::vector<Vector> xtr, xdev, xte;
  std::vector<double> ytr, ydev, yte;
  featurize(train, &xtr, &ytr);
  featurize(dev, &xdev, &ydev);
  featurize(test, &xte, &yte);

  size_t in_dim = xtr[0].size();
  Probe probe(in_dim, 64, seed);
  Probe best = probe;
  double best_dev = -1.0;
  int since_best = 0;
  constexpr double kLr = 1e-3;

  for (int epoch = 0; epoch < 100; ++epoch) {
    GradMatrix g_w1(probe.w1), g_b1(probe.b1), g_w2(probe.w2), g_b2(probe.b2);
    double inv = 1.0 / static_cast<double>(xtr.size());
    for (size_t i = 0; i < xtr.size(); ++i) {
      Vector hidden;
      double p = probe.predict(xtr[i], &hidden);
      // BCE gradient at the logit is (p - y).
      double dlogit = (p - ytr[i]) * inv;
      g_b2.at(0, 0) += dlogit;
      Vector dhidden;
      Vector dl2(1, dlogit);
      matvec_backward(hidden, probe.w2, dl2, &dhidden, &g_w2);
      for (size_t hgi = 0; hgi < dhidden.size(); ++hgi) {
        if (hidden[hgi] <= 0.0) dhidden[hgi] = 0.0;
        g_b1.at(0, hgi) += dhidden[hgi];
      }
      matvec_backward(xtr[i], probe.w1, dhidden, nullptr, &g_w1);
    }
    adam_step(&probe.w1, g_w1, &probe.s_w1, kLr);
    adam_step(&probe.b1, g_b1, &probe.s_b1, kLr);
    adam_step(&probe.w2, g_w2, &probe.s_w2, kLr);
    adam_step(&probe.b2, g_b2, &probe.s_b2, kLr);

    double dev_acc = accuracy_on(probe, xdev, ydev);
    if (dev_acc > best_dev) {
      best_dev = dev_acc;
      best = probe;
      since_best = 0;
    } else if (++since_best >= 10) {
      break;
    }
  }
  return accuracy_on(best, xte, yte);
}

double eval_similarity(const std::vector<LabeledPair>& pairs,
                       const ModelState& model) {
  if (pairs.size() < 2) {
    throw ValidationError("similarity eval: need at least two pairs");
  }
  std::vector<double> predicted, gold;
  predicted.reserve(pairs.size());
  gold.reserve(pairs.size());
  for (const LabeledPair& p : pairs) {
    predicted.push_back(dot(encode(p.a, model), encode(p.b, model)));
    gold.push_back(p.label);
  }
  return pearson(predicted, gold);
}

double eval_turney(const std::vector<TurneyItem>& items,
                   const ModelState& model) {
  if (items.empty()) {
    throw ValidationError("turney eval: no items");
  }
  size_t hits = 0;
  for (const TurneyItem& item : items) {
    Vector h = encode(item.bigram, model);
    int arg = 0;
    double best = -2.0;
    for (int c = 0; c < 5; ++c) {
      double s = dot(h, encode(item.candidates[static_cast<size_t>(c)], model));
      if (s > best) {
        best = s;
        arg = c;
      }
    }
    if (arg == item.gold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(items.size());
}

double eval_fuzzyjoin(const FuzzyJoinTask& task, const ModelState& model,
                      int threads) {
  if (task.left.empty()) {
    throw ValidationError("fuzzy join: empty left table");
  }
  std::vector<Vector> left_emb = embed_all(task.left, model, threads);
  std::vector<size_t> correct(task.right.size(), 0);
  parallel_for(task.right.size(), threads, [&](size_t i) {
    const auto& [name, gold] = task.right[i];
    Vector h = encode(name, model);
    size_t pred = nearest_index(h, left_emb, nullptr);
    correct[i] = pred == gold ? 1 : 0;
  });
  size_t hits = 0;
  for (size_t c : correct) hits += c;
  return task.right.empty() ? 0.0
                            : static_cast<double>(hits) /
                                  static_cast<double>(task.right.size());
}

double eval_clustering(const ClusteringTask& task, const ModelState& model,
                       uint64_t seed) {
  if (task.phrases.empty() || task.k == 0) {
    throw ValidationError("clustering eval: empty task");
  }
  std::vector<Vector> emb = embed_all(task.phrases, model, 0);
  std::vector<int> pred = kmeans(emb, task.k, seed);
  return nmi(pred, task.classes);
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw ValidationError("cannot open file: " + path);
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

[[noreturn]] void bad_line(const std::string& path, size_t line_no,
                           const std::string& why) {
  throw FormatError(path + " line " + std::to_string(line_no) + ": " + why);
}

}  // namespace

std::vector<LabeledPair> load_pairs_tsv(const std::string& path) {
  std::vector<LabeledPair> pairs;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 3) bad_line(path, i + 1, "expected three TAB fields");
    LabeledPair p;
    p.a = canonicalize_whitespace(f[0]);
    p.b = canonicalize_whitespace(f[1]);
    try {
      p.label = std::stod(f[2]);
    } catch (const std::exception&) {
      bad_line(path, i + 1, "bad label \"" + f[2] + "\"");
    }
    if (p.a.empty() || p.b.empty()) bad_line(path, i + 1, "empty phrase");
    if (p.label < 0.0 || p.label > 1.0) {
      bad_line(path, i + 1, "label outside [0, 1]");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

RetrievalTask load_retrieval_task(const std::string& dictionary_path,
                                  const std::string& queries_path) {
  RetrievalTask task;
  std::map<std::string, size_t> dict_pos;
  std::vector<std::string> dict_lines = read_lines(dictionary_path);
  for (size_t i = 0; i < dict_lines.size(); ++i) {
    if (dict_lines[i].empty() || dict_lines[i][0] == '#') continue;
    std::string name = canonicalize_whitespace(dict_lines[i]);
    if (name.empty()) continue;
    if (dict_pos.count(name)) {
      bad_line(dictionary_path, i + 1, "duplicate dictionary name");
    }
    dict_pos[name] = task.dictionary.size();
    task.dictionary.push_back(std::move(name));
  }
  std::vector<std::string> query_lines = read_lines(queries_path);
  for (size_t i = 0; i < query_lines.size(); ++i) {
    const std::string& line = query_lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 2) {
      bad_line(queries_path, i + 1, "expected two TAB fields");
    }
    std::string mention = canonicalize_whitespace(f[0]);
    std::string gold = canonicalize_whitespace(f[1]);
    auto it = dict_pos.find(gold);
    if (it == dict_pos.end()) {
      bad_line(queries_path, i + 1, "gold name not in dictionary: " + gold);
    }
    task.queries.emplace_back(std::move(mention), it->second);
  }
  return task;
}

ClusteringTask load_clustering_task(const std::string& path) {
  ClusteringTask task;
  std::map<std::string, int> class_ids;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 2) bad_line(path, i + 1, "expected two TAB fields");
    std::string phrase = canonicalize_whitespace(f[0]);
    std::string cls = canonicalize_whitespace(f[1]);
    if (phrase.empty() || cls.empty()) bad_line(path, i + 1, "empty field");
    auto [it, _] =
        class_ids.emplace(cls, static_cast<int>(class_ids.size()));
    task.phrases.push_back(std::move(phrase));
    task.classes.push_back(it->second);
  }
  task.k = class_ids.size();
  return task;
}

std::vector<TurneyItem> load_turney_tsv(const std::string& path) {
  std::vector<TurneyItem> items;
  std::vector<std::string> lines = read_lines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 7) bad_line(path, i + 1, "expected seven TAB fields");
    TurneyItem item;
    item.bigram = canonicalize_whitespace(f[0]);
    for (int c = 0; c < 5; ++c) {
      item.candidates[static_cast<size_t>(c)] =
          canonicalize_whitespace(f[static_cast<size_t>(c) + 1]);
    }
    try {
      item.gold = std::stoi(f[6]);
    } catch (const std::exception&) {
      bad_line(path, i + 1, "bad gold index \"" + f[6] + "\"");
    }
    if (item.gold < 0 || item.gold > 4) {
      bad_line(path, i + 1, "gold index outside [0, 4]");
    }
    items.push_back(std::move(item));
  }
  return items;
}

FuzzyJoinTask load_fuzzyjoin_task(const std::string& left_path,
                                  const std::string& right_path) {
  FuzzyJoinTask task;
  std::map<std::string, size_t> left_pos;
  std::vector<std::string> left_lines = read_lines(left_path);
  for (size_t i = 0; i < left_lines.size(); ++i) {
    if (left_lines[i].empty() || left_lines[i][0] == '#') continue;
    std::string name = canonicalize_whitespace(left_lines[i]);
    if (name.empty()) continue;
    if (!left_pos.count(name)) {
      left_pos[name] = task.left.size();
      task.left.push_back(std::move(name));
    }
  }
  std::vector<std::string> right_lines = read_lines(right_path);
  for (size_t i = 0; i < right_lines.size(); ++i) {
    const std::string& line = right_lines[i];
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 2) bad_line(right_path, i + 1, "expected two TAB fields");
    std::string name = canonicalize_whitespace(f[0]);
    std::string gold = canonicalize_whitespace(f[1]);
    auto it = left_pos.find(gold);
    if (it == left_pos.end()) {
      bad_line(right_path, i + 1, "gold name not in left table: " + gold);
    }
    task.right.emplace_back(std::move(name), it->second);
  }
  return task;
}

}  // namespace pearlkit
