/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

// Correlation Explanation (CorEx) topic model for binary document-term data.
//
// Each topic is a latent binary variable Y_j. Word i contributes to topic j
// with weight alpha_ij; the weights of one word sum to one over topics, so a
// word's explanatory power is shared rather than counted once per topic.
// Training maximises the lower bound on total correlation
//
//   F(q, theta, alpha) = sum_j 1/N sum_d sum_y q_dj(y) [ log p_j(y)
//                        + sum_i alpha_ij log p(x_di | y_j = y) / p(x_di)
//                        - log q_dj(y) ]
//
// by coordinate ascent. One iteration is
//
//   M-step  theta <- marginals p_j(y), p(x_i | y_j) from posterior-weighted
//           counts (additive smoothing);
//   alpha   F is linear in alpha with coefficient C_ij (the explained
//           information of word i by topic j), so alpha moves a damped step
//           towards a softmax competition target over topics;
//   E-step  q_dj <- p(y_j | x_d), which makes the bound tight:
//           F = sum_j TC_j with TC_j = 1/N sum_d log Z_dj.
//
// Each step is non-decreasing in F, so the recorded objective is monotone.
// The smoothing pseudo-count is the only source of slack; an iteration that
// loses more than `tol` is rolled back and training stops.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dsq/error.hpp"
#include "dsq/preprocess.hpp"
#include "dsq/rng.hpp"
#include "dsq/text.hpp"

namespace dsq {

struct CorexConfig {
  int n_topics = 200;
  int max_iter = 200;
  double tol = 1e-5;
  uint64_t seed = 42;
  double smoothing = 0.001;
  // Step size of the alpha update, in (0, 1].
  double damping = 1.0;
  // Inverse temperature of the competition between topics for a word. It
  // starts at sharpness_start and grows by sharpness_growth per iteration up
  // to sharpness, so topics can form before words commit to one of them.
  double sharpness = 500.0;
  double sharpness_start = 10.0;
  double sharpness_growth = 1.1;
  // Independent initialisations; the best final objective is kept.
  int restarts = 3;
  // Worker threads for the E-step; results do not depend on it.
  int threads = 1;

  void validate() const {
    if (n_topics < 1) throw ValidationError("n_topics must be >= 1");
    if (max_iter < 1) throw ValidationError("max_iter must be >= 1");
    if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
    if (!(smoothing > 0.0)) throw ValidationError("smoothing must be > 0");
    if (!(damping > 0.0 && damping <= 1.0)) throw ValidationError("damping must be in (0, 1]");
    if (!(sharpness_start > 0.0 && sharpness_start <= sharpness)) {
      throw ValidationError("sharpness_start must be in (0, sharpness]");
    }
    if (!(sharpness_growth >= 1.0)) throw ValidationError("sharpness_growth must be >= 1");
    if (restarts < 1) throw ValidationError("restarts must be >= 1");
    if (threads < 1) throw ValidationError("threads must be >= 1");
  }
};

// Topics with total correlation below this are reported as degenerate.
inline constexpr double kDegenerateTc = 1e-6;

enum class StopReason { kConverged, kMaxIter, kObjectiveDecrease };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::kConverged: return "converged";
    case StopReason::kMaxIter: return "max_iter";
    case StopReason::kObjectiveDecrease: return "objective_decrease";
  }
  return "unknown";
}

inline StopReason parse_stop_reason(std::string_view s) {
  if (s == "converged") return StopReason::kConverged;
  if (s == "max_iter") return StopReason::kMaxIter;
  if (s == "objective_decrease") return StopReason::kObjectiveDecrease;
  throw ParseError("unknown stop reason '" + std::string(s) + "'");
}

// Trained model. Matrices are row-major: word x topic and document x topic.
// Topics are ordered by descending topic_tc.
struct TopicModel {
  CorexConfig config;
  std::vector<std::string> vocabulary;  // index -> word
  std::vector<std::string> doc_ids;     // row -> question id
  size_t n_words = 0;
  size_t n_topics = 0;
  size_t n_docs = 0;
  std::vector<double> alpha;
  std::vector<double> word_topic_mi;
  std::vector<double> doc_topic_prob;
  std::vector<double> topic_tc;
  std::vector<double> objective_trace;
  int iterations = 0;
  StopReason stop_reason = StopReason::kMaxIter;

  double alpha_at(size_t word, size_t topic) const { return alpha[word * n_topics + topic]; }
  double mi(size_t word, size_t topic) const { return word_topic_mi[word * n_topics + topic]; }
  double prob(size_t doc, size_t topic) const { return doc_topic_prob[doc * n_topics + topic]; }
  bool degenerate(size_t topic) const { return topic_tc.at(topic) < kDegenerateTc; }
  double total_tc() const {
    double s = 0.0;
    for (double v : topic_tc) s += v;
    return s;
  }

  bool operator==(const TopicModel& o) const {
    return vocabulary == o.vocabulary && doc_ids == o.doc_ids && n_words == o.n_words && n_topics == o.n_topics &&
           n_docs == o.n_docs && alpha == o.alpha && word_topic_mi == o.word_topic_mi &&
           doc_topic_prob == o.doc_topic_prob && topic_tc == o.topic_tc && objective_trace == o.objective_trace &&
           iterations == o.iterations && stop_reason == o.stop_reason;
  }
};

namespace corex_detail {

template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 256) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const size_t workers = std::min<size_t>(static_cast<size_t>(threads), n);
  const size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    const size_t lo = w * chunk;
    const size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// x log(x / y) with 0 log 0 = 0.
inline double xlogx_over(double x, double y) { return x > 0.0 ? x * std::log(x / y) : 0.0; }

class Trainer {
 public:
  Trainer(const DocTermMatrix& matrix, const CorexConfig& cfg, uint64_t init_seed)
      : x_(matrix), cfg_(cfg), seed_(init_seed), n_(matrix.n_docs()), v_(matrix.n_words),
        m_(static_cast<size_t>(cfg.n_topics)) {
    const double s = cfg_.smoothing;
    doc_freq_.assign(v_, 0.0);
    for (const auto& row : x_.rows) {
      for (uint32_t i : row) doc_freq_[i] += 1.0;
    }
    log_pe1_.resize(v_);
    log_pe0_.resize(v_);
    for (size_t i = 0; i < v_; ++i) {
      const double p1 = (doc_freq_[i] + s) / (static_cast<double>(n_) + 2.0 * s);
      log_pe1_[i] = std::log(p1);
      log_pe0_[i] = std::log1p(-p1);
    }
  }

  TopicModel run() {
    init();
    std::vector<double> trace;
    StopReason reason = StopReason::kMaxIter;
    int iter = 0;
    double beta = cfg_.sharpness_start;
    for (iter = 1; iter <= cfg_.max_iter; ++iter) {
      const State saved = state_;
      m_step();
      update_alpha(beta);
      const double obj = e_step();
      if (!std::isfinite(obj)) {
        throw NumericError("non-finite objective at iteration " + std::to_string(iter));
      }
      if (!trace.empty() && obj < trace.back() - cfg_.tol) {
        state_ = saved;
        reason = StopReason::kObjectiveDecrease;
        --iter;
        break;
      }
      trace.push_back(obj);
      const bool annealed = beta >= cfg_.sharpness;
      if (annealed && trace.size() >= 2 && std::abs(trace.back() - trace[trace.size() - 2]) < cfg_.tol) {
        reason = StopReason::kConverged;
        break;
      }
      beta = std::min(cfg_.sharpness, beta * cfg_.sharpness_growth);
    }
    if (iter > cfg_.max_iter) iter = cfg_.max_iter;
    return finish(std::move(trace), iter, reason);
  }

 private:
  struct State {
    std::vector<double> q1, q0;     // posteriors, n x m
    std::vector<double> alpha;      // v x m
    std::vector<double> tc;         // m
  };

  void init() {
    state_.q1.resize(n_ * m_);
    state_.q0.resize(n_ * m_);
    std::vector<int32_t> anchor_topic(v_, -1);
    const auto anchors = choose_anchors();
    for (size_t j = 0; j < m_; ++j) anchor_topic[anchors[j]] = static_cast<int32_t>(j);
    std::vector<char> has_anchor(m_);
    for (size_t d = 0; d < n_; ++d) {
      std::fill(has_anchor.begin(), has_anchor.end(), 0);
      for (uint32_t i : x_.rows[d]) {
        if (anchor_topic[i] >= 0) has_anchor[static_cast<size_t>(anchor_topic[i])] = 1;
      }
      const uint64_t key = fnv1a64(x_.doc_ids[d]);
      for (size_t j = 0; j < m_; ++j) {
        const double u = 0.1 * keyed_uniform(seed_, key, j);
        const double q = has_anchor[j] ? 0.85 + u : 0.05 + u;
        state_.q1[d * m_ + j] = q;
        state_.q0[d * m_ + j] = 1.0 - q;
      }
    }
    state_.alpha.resize(v_ * m_);
    for (size_t i = 0; i < v_; ++i) {
      double sum = 0.0;
      for (size_t j = 0; j < m_; ++j) {
        const double a = 1.0 + 0.1 * keyed_uniform(seed_ ^ 0xA1FAULL, i, j);
        state_.alpha[i * m_ + j] = a;
        sum += a;
      }
      for (size_t j = 0; j < m_; ++j) state_.alpha[i * m_ + j] /= sum;
    }
    state_.tc.assign(m_, 0.0);
  }

  // Anchor words for the initial posteriors, one per topic, picked like
  // k-means++ seeding: each next anchor is drawn with weight (1 - overlap)^2,
  // overlap being its largest co-occurrence coefficient with earlier anchors.
  std::vector<size_t> choose_anchors() const {
    std::vector<std::vector<uint32_t>> docs_of(v_);
    for (size_t d = 0; d < n_; ++d) {
      for (uint32_t i : x_.rows[d]) docs_of[i].push_back(static_cast<uint32_t>(d));
    }
    SplitMix64 rng(SplitMix64::mix(seed_ ^ 0xA4C40ULL));
    std::vector<double> overlap(v_, 0.0);
    std::vector<char> taken(v_, 0);
    std::vector<double> co(v_);
    std::vector<size_t> anchors;
    anchors.reserve(m_);
    for (size_t j = 0; j < m_; ++j) {
      double total = 0.0;
      for (size_t i = 0; i < v_; ++i) {
        if (!taken[i]) total += (1.0 - overlap[i]) * (1.0 - overlap[i]);
      }
      size_t pick = v_;
      if (total > 0.0) {
        double r = rng.uniform() * total;
        for (size_t i = 0; i < v_; ++i) {
          if (taken[i]) continue;
          const double w = (1.0 - overlap[i]) * (1.0 - overlap[i]);
          if (w <= 0.0) continue;
          pick = i;
          if (r < w) break;
          r -= w;
        }
      }
      if (pick == v_) {
        // Everything left overlaps fully; take the first free word.
        for (size_t i = 0; i < v_ && pick == v_; ++i) {
          if (!taken[i]) pick = i;
        }
      }
      taken[pick] = 1;
      anchors.push_back(pick);
      std::fill(co.begin(), co.end(), 0.0);
      for (uint32_t d : docs_of[pick]) {
        for (uint32_t i : x_.rows[d]) co[i] += 1.0;
      }
      for (size_t i = 0; i < v_; ++i) {
        const double denom = std::min(doc_freq_[i], doc_freq_[pick]);
        if (denom > 0.0) overlap[i] = std::max(overlap[i], co[i] / denom);
      }
    }
    return anchors;
  }

  // Posterior-weighted counts: ny[j*2+y] = sum_d q_dj(y),
  // n1[(i*m + j)*2 + y] = sum over documents containing i of q_dj(y).
  void accumulate_counts(std::vector<double>& ny, std::vector<double>& n1) const {
    ny.assign(m_ * 2, 0.0);
    n1.assign(v_ * m_ * 2, 0.0);
    for (size_t d = 0; d < n_; ++d) {
      const double* q1 = &state_.q1[d * m_];
      const double* q0 = &state_.q0[d * m_];
      for (size_t j = 0; j < m_; ++j) {
        ny[j * 2] += q0[j];
        ny[j * 2 + 1] += q1[j];
      }
      for (uint32_t i : x_.rows[d]) {
        double* row = &n1[static_cast<size_t>(i) * m_ * 2];
        for (size_t j = 0; j < m_; ++j) {
          row[j * 2] += q0[j];
          row[j * 2 + 1] += q1[j];
        }
      }
    }
  }

  void m_step() {
    accumulate_counts(ny_, n1_);
    const double s = cfg_.smoothing;
    const double n = static_cast<double>(n_);
    log_py_.resize(m_ * 2);
    for (size_t j = 0; j < m_; ++j) {
      for (int y = 0; y < 2; ++y) log_py_[j * 2 + y] = std::log((ny_[j * 2 + y] + s) / (n + 2.0 * s));
    }
    // log ratios r1 = log p(x=1|y)/p(x=1), r0 = log p(x=0|y)/p(x=0)
    r1_.resize(v_ * m_ * 2);
    r0_.resize(v_ * m_ * 2);
    for (size_t i = 0; i < v_; ++i) {
      for (size_t j = 0; j < m_; ++j) {
        for (int y = 0; y < 2; ++y) {
          const size_t k = (i * m_ + j) * 2 + y;
          const double denom = ny_[j * 2 + y] + 2.0 * s;
          const double c1 = n1_[k];
          const double c0 = std::max(0.0, ny_[j * 2 + y] - c1);
          r1_[k] = std::log((c1 + s) / denom) - log_pe1_[i];
          r0_[k] = std::log((c0 + s) / denom) - log_pe0_[i];
        }
      }
    }
  }

  // Linear coefficient of alpha in F for the current posteriors and theta.
  std::vector<double> explained_information() const {
    std::vector<double> c(v_ * m_, 0.0);
    const double inv_n = 1.0 / static_cast<double>(n_);
    for (size_t i = 0; i < v_; ++i) {
      for (size_t j = 0; j < m_; ++j) {
        double acc = 0.0;
        for (int y = 0; y < 2; ++y) {
          const size_t k = (i * m_ + j) * 2 + y;
          const double c1 = n1_[k];
          const double c0 = std::max(0.0, ny_[j * 2 + y] - c1);
          acc += c1 * r1_[k] + c0 * r0_[k];
        }
        c[i * m_ + j] = acc * inv_n;
      }
    }
    return c;
  }

  void update_alpha(double beta) {
    const auto c = explained_information();
    std::vector<double> target(v_ * m_);
    for (size_t i = 0; i < v_; ++i) {
      const double* ci = &c[i * m_];
      double* ai = &state_.alpha[i * m_];
      size_t best = 0, worst = 0;
      for (size_t j = 1; j < m_; ++j) {
        if (ci[j] > ci[best]) best = j;
        if (ci[j] < ci[worst]) worst = j;
      }
      // Competition on the word's own scale of explained information.
      const double spread = ci[best] - ci[worst];
      if (!(spread > 0.0)) continue;
      double* ti = &target[i * m_];
      double sum = 0.0;
      for (size_t j = 0; j < m_; ++j) {
        ti[j] = std::exp(beta * (ci[j] - ci[best]) / spread);
        sum += ti[j];
      }
      double gain = 0.0;
      for (size_t j = 0; j < m_; ++j) {
        ti[j] /= sum;
        gain += ci[j] * (ti[j] - ai[j]);
      }
      // A step towards a target with negative gain would lower F.
      if (gain < 0.0) continue;
      for (size_t j = 0; j < m_; ++j) ai[j] = (1.0 - cfg_.damping) * ai[j] + cfg_.damping * ti[j];
    }
  }

  // Returns sum_j TC_j.
  double e_step() {
    // Baseline: every word absent.
    std::vector<double> base(m_ * 2, 0.0);
    for (size_t i = 0; i < v_; ++i) {
      for (size_t j = 0; j < m_; ++j) {
        const double a = state_.alpha[i * m_ + j];
        if (a == 0.0) continue;
        for (int y = 0; y < 2; ++y) base[j * 2 + y] += a * r0_[(i * m_ + j) * 2 + y];
      }
    }
    std::vector<double> log_z(n_ * m_);
    parallel_for(n_, cfg_.threads, [&](size_t d) {
      std::vector<double> l(m_ * 2);
      for (size_t k = 0; k < m_ * 2; ++k) l[k] = log_py_[k] + base[k];
      for (uint32_t i : x_.rows[d]) {
        for (size_t j = 0; j < m_; ++j) {
          const double a = state_.alpha[static_cast<size_t>(i) * m_ + j];
          const size_t k = (static_cast<size_t>(i) * m_ + j) * 2;
          l[j * 2] += a * (r1_[k] - r0_[k]);
          l[j * 2 + 1] += a * (r1_[k + 1] - r0_[k + 1]);
        }
      }
      for (size_t j = 0; j < m_; ++j) {
        const double l0 = l[j * 2], l1 = l[j * 2 + 1];
        log_z[d * m_ + j] = log_sum_exp(l0, l1);
        state_.q1[d * m_ + j] = 1.0 / (1.0 + std::exp(l0 - l1));
        state_.q0[d * m_ + j] = 1.0 / (1.0 + std::exp(l1 - l0));
      }
    });
    const double inv_n = 1.0 / static_cast<double>(n_);
    double total = 0.0;
    for (size_t j = 0; j < m_; ++j) {
      double acc = 0.0;
      for (size_t d = 0; d < n_; ++d) acc += log_z[d * m_ + j];
      state_.tc[j] = acc * inv_n;
      total += state_.tc[j];
    }
    return total;
  }

  TopicModel finish(std::vector<double> trace, int iterations, StopReason reason) {
    // Mutual information of the unsmoothed empirical joint of (X_i, Y_j)
    // under the final posteriors.
    accumulate_counts(ny_, n1_);
    const double n = static_cast<double>(n_);
    std::vector<double> mi(v_ * m_, 0.0);
    for (size_t i = 0; i < v_; ++i) {
      const double px1 = doc_freq_[i] / n;
      const double px0 = 1.0 - px1;
      for (size_t j = 0; j < m_; ++j) {
        double acc = 0.0;
        for (int y = 0; y < 2; ++y) {
          const double py = ny_[j * 2 + y] / n;
          const double p1 = n1_[(i * m_ + j) * 2 + y] / n;
          const double p0 = std::max(0.0, py - p1);
          acc += xlogx_over(p1, px1 * py) + xlogx_over(p0, px0 * py);
        }
        mi[i * m_ + j] = acc;
      }
    }

    // Canonical state labelling: state 1 is the less probable state.
    for (size_t j = 0; j < m_; ++j) {
      if (ny_[j * 2 + 1] > ny_[j * 2]) {
        for (size_t d = 0; d < n_; ++d) std::swap(state_.q1[d * m_ + j], state_.q0[d * m_ + j]);
      }
    }

    std::vector<size_t> order(m_);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return state_.tc[a] > state_.tc[b]; });

    TopicModel model;
    model.config = cfg_;
    model.doc_ids = x_.doc_ids;
    model.n_words = v_;
    model.n_topics = m_;
    model.n_docs = n_;
    model.alpha.resize(v_ * m_);
    model.word_topic_mi.resize(v_ * m_);
    model.doc_topic_prob.resize(n_ * m_);
    model.topic_tc.resize(m_);
    for (size_t j = 0; j < m_; ++j) {
      const size_t src = order[j];
      // Rounding can leave an empty topic a hair below zero.
      model.topic_tc[j] = state_.tc[src] < 0.0 && state_.tc[src] > -1e-9 ? 0.0 : state_.tc[src];
      for (size_t i = 0; i < v_; ++i) {
        model.alpha[i * m_ + j] = state_.alpha[i * m_ + src];
        model.word_topic_mi[i * m_ + j] = mi[i * m_ + src];
      }
      for (size_t d = 0; d < n_; ++d) model.doc_topic_prob[d * m_ + j] = state_.q1[d * m_ + src];
    }
    model.objective_trace = std::move(trace);
    model.iterations = iterations;
    model.stop_reason = reason;
    return model;
  }

  const DocTermMatrix& x_;
  CorexConfig cfg_;
  uint64_t seed_;
  size_t n_, v_, m_;
  std::vector<double> doc_freq_, log_pe1_, log_pe0_;
  State state_;
  std::vector<double> ny_, n1_, log_py_, r1_, r0_;
};

}  // namespace corex_detail

// Trains a model. `vocabulary` (index -> word) is stored in the model for
// reporting; pass an empty list to use the word indices as names.
inline TopicModel train(const DocTermMatrix& matrix, const CorexConfig& config,
                        std::vector<std::string> vocabulary = {}) {
  config.validate();
  if (matrix.n_docs() == 0 || matrix.n_words == 0) throw ValidationError("cannot train on an empty matrix");
  matrix.validate();
  if (static_cast<size_t>(config.n_topics) > matrix.n_words) {
    throw ValidationError("n_topics (" + std::to_string(config.n_topics) + ") exceeds the number of words (" +
                          std::to_string(matrix.n_words) + ")");
  }
  if (vocabulary.empty()) {
    for (size_t i = 0; i < matrix.n_words; ++i) vocabulary.push_back(std::to_string(i));
  } else if (vocabulary.size() != matrix.n_words) {
    throw ValidationError("vocabulary size does not match the matrix");
  }
  // Restart r starts from a different initialisation; the run with the
  // highest final objective wins, earlier runs on ties.
  TopicModel best;
  for (int r = 0; r < config.restarts; ++r) {
    const uint64_t init_seed = r == 0 ? config.seed : SplitMix64::mix(config.seed + static_cast<uint64_t>(r));
    TopicModel model = corex_detail::Trainer(matrix, config, init_seed).run();
    if (r == 0 || model.objective_trace.back() > best.objective_trace.back()) best = std::move(model);
  }
  best.vocabulary = std::move(vocabulary);
  return best;
}

// ---------------------------------------------------------------------------
// Queries

struct WordScore {
  std::string word;
  size_t index = 0;
  double mi = 0.0;
};

struct DocScore {
  std::string doc_id;
  size_t row = 0;
  double prob = 0.0;
};

inline void check_topic(const TopicModel& model, size_t topic) {
  if (topic >= model.n_topics) {
    throw ValidationError("topic " + std::to_string(topic) + " out of range (model has " +
                          std::to_string(model.n_topics) + " topics)");
  }
}

// The min(k, n_words) words with highest MI for the topic; ties by index.
inline std::vector<WordScore> top_words(const TopicModel& model, size_t topic, size_t k = 15) {
  check_topic(model, topic);
  if (k < 1) throw ValidationError("k must be >= 1");
  std::vector<size_t> idx(model.n_words);
  std::iota(idx.begin(), idx.end(), 0);
  const size_t take = std::min(k, model.n_words);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(take), idx.end(), [&](size_t a, size_t b) {
    const double ma = model.mi(a, topic), mb = model.mi(b, topic);
    return ma != mb ? ma > mb : a < b;
  });
  std::vector<WordScore> out;
  for (size_t r = 0; r < take; ++r) out.push_back({model.vocabulary[idx[r]], idx[r], model.mi(idx[r], topic)});
  return out;
}

// The min(k, n_docs) documents with highest p(topic active | doc); ties by row.
inline std::vector<DocScore> top_documents(const TopicModel& model, size_t topic, size_t k = 10) {
  check_topic(model, topic);
  std::vector<size_t> idx(model.n_docs);
  std::iota(idx.begin(), idx.end(), 0);
  const size_t take = std::min(k, model.n_docs);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(take), idx.end(), [&](size_t a, size_t b) {
    const double pa = model.prob(a, topic), pb = model.prob(b, topic);
    return pa != pb ? pa > pb : a < b;
  });
  std::vector<DocScore> out;
  for (size_t r = 0; r < take; ++r) out.push_back({model.doc_ids[idx[r]], idx[r], model.prob(idx[r], topic)});
  return out;
}

// Multi-label assignment: topic j for document d iff p >= threshold.
inline std::vector<std::vector<size_t>> assign_documents(const TopicModel& model, double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold must be in (0, 1)");
  std::vector<std::vector<size_t>> out(model.n_docs);
  for (size_t d = 0; d < model.n_docs; ++d) {
    for (size_t j = 0; j < model.n_topics; ++j) {
      if (model.prob(d, j) >= threshold) out[d].push_back(j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Model-size sweep

struct SweepEntry {
  int n_topics = 0;
  uint64_t seed = 0;
  double total_tc = 0.0;
  double mean_tc = 0.0;
  double median_tc = 0.0;
  double min_tc = 0.0;
  double max_tc = 0.0;
  int degenerate = 0;
  int iterations = 0;
  StopReason stop_reason = StopReason::kMaxIter;
  std::vector<double> topic_tc;  // descending
};

inline uint64_t sweep_seed(uint64_t base_seed, int n_topics) {
  return base_seed + static_cast<uint64_t>(n_topics);
}

inline SweepEntry summarize_model(const TopicModel& model) {
  SweepEntry e;
  e.n_topics = static_cast<int>(model.n_topics);
  e.seed = model.config.seed;
  e.topic_tc = model.topic_tc;
  e.total_tc = model.total_tc();
  e.mean_tc = e.total_tc / static_cast<double>(model.n_topics);
  std::vector<double> sorted = model.topic_tc;
  std::sort(sorted.begin(), sorted.end());
  const size_t k = sorted.size();
  e.median_tc = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  e.min_tc = sorted.front();
  e.max_tc = sorted.back();
  for (size_t j = 0; j < model.n_topics; ++j) e.degenerate += model.degenerate(j) ? 1 : 0;
  e.iterations = model.iterations;
  e.stop_reason = model.stop_reason;
  return e;
}

// One model per size, seeded with sweep_seed(base.seed, size).
inline std::vector<SweepEntry> sweep(const DocTermMatrix& matrix, const std::vector<int>& sizes,
                                     const CorexConfig& base) {
  if (sizes.empty()) throw ValidationError("sweep needs at least one model size");
  std::vector<SweepEntry> out;
  for (int size : sizes) {
    CorexConfig cfg = base;
    cfg.n_topics = size;
    cfg.seed = sweep_seed(base.seed, size);
    out.push_back(summarize_model(train(matrix, cfg)));
  }
  return out;
}

}  // namespace dsq
