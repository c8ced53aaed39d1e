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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "dsq/corex.hpp"
#include "dsq/model_io.hpp"
#include "fixtures.hpp"

namespace dsq {
namespace {

CorexConfig config(int n_topics, uint64_t seed = 42) {
  CorexConfig c;
  c.n_topics = n_topics;
  c.seed = seed;
  return c;
}

const DocTermMatrix& mini_matrix() {
  static const DocTermMatrix m = [] {
    const auto corpus = filter_subcategory(
        load_corpus(testing::data_dir() / "mini" / "questions.csv", CorpusFormat::kDelimited), "Alternative Medicine");
    const auto lex = load_lexicon(testing::data_dir() / "mini" / "lexicon.txt");
    const auto cleaned = clean_lexicon(match_ingredients(corpus, lex), lex);
    const auto streams =
        build_token_streams(corpus, cleaned.matched, cleaned.lexicon.preferred_names(), default_stopwords());
    const auto vocab = build_vocabulary(streams);
    return vectorize(filter_streams(streams, vocab), vocab);
  }();
  return m;
}

// Block of the top-10 words if they all share one, else -1.
int pure_block(const TopicModel& m, size_t topic, int block_size) {
  std::set<int> blocks;
  for (const auto& w : top_words(m, topic, 10)) blocks.insert(static_cast<int>(w.index) / block_size);
  return blocks.size() == 1 ? *blocks.begin() : -1;
}

TEST(Corex, PlantedRecovery) {
  const auto pc = testing::make_planted();
  ASSERT_EQ(pc.matrix.n_docs(), 900u);
  const auto model = train(pc.matrix, config(3), pc.vocabulary);
  std::set<int> found;
  for (size_t j = 0; j < 3; ++j) {
    const int b = pure_block(model, j, pc.block_size);
    EXPECT_GE(b, 0) << "topic " << j << " mixes blocks";
    found.insert(b);
  }
  EXPECT_EQ(found, (std::set<int>{0, 1, 2}));
  const auto assigned = assign_documents(model);
  for (size_t j = 0; j < 3; ++j) {
    size_t n = 0;
    for (const auto& a : assigned) n += std::count(a.begin(), a.end(), j);
    EXPECT_GE(n, 270u) << "topic " << j;
    EXPECT_LE(n, 330u) << "topic " << j;
  }
}

TEST(Corex, PlantedAssignmentMatchesBlocks) {
  const auto pc = testing::make_planted();
  const auto model = train(pc.matrix, config(3), pc.vocabulary);
  std::vector<int> topic_block(3);
  for (size_t j = 0; j < 3; ++j) topic_block[j] = pure_block(model, j, pc.block_size);
  size_t agree = 0;
  for (size_t d = 0; d < model.n_docs; ++d) {
    size_t best = 0;
    for (size_t j = 1; j < 3; ++j) {
      if (model.prob(d, j) > model.prob(d, best)) best = j;
    }
    agree += topic_block[best] == pc.doc_block[d];
  }
  EXPECT_GE(agree, model.n_docs * 95 / 100);
}

TEST(Corex, PlantedRecoveryWithSpareTopics) {
  const auto pc = testing::make_planted();
  const auto model = train(pc.matrix, config(20), pc.vocabulary);
  std::set<int> found;
  for (size_t j = 0; j < 3; ++j) found.insert(pure_block(model, j, pc.block_size));
  EXPECT_EQ(found, (std::set<int>{0, 1, 2}));
}

TEST(Corex, PlantedRecoveryAcrossSeeds) {
  const auto pc = testing::make_planted();
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto model = train(pc.matrix, config(3, seed), pc.vocabulary);
    std::set<int> found;
    for (size_t j = 0; j < 3; ++j) found.insert(pure_block(model, j, pc.block_size));
    EXPECT_EQ(found, (std::set<int>{0, 1, 2})) << "seed " << seed;
  }
}

void expect_monotone(const TopicModel& m, double tol) {
  ASSERT_FALSE(m.objective_trace.empty());
  for (size_t k = 1; k < m.objective_trace.size(); ++k) {
    EXPECT_GE(m.objective_trace[k], m.objective_trace[k - 1] - tol) << "iteration " << k;
  }
}

TEST(Corex, MonotoneObjective) {
  const auto pc = testing::make_planted();
  for (int m : {3, 20}) {
    expect_monotone(train(pc.matrix, config(m)), 1e-5);
    expect_monotone(train(mini_matrix(), config(m)), 1e-5);
  }
}

TEST(Corex, MonotoneWithoutAnnealingOrRestarts) {
  auto c = config(8, 3);
  c.sharpness_start = c.sharpness;
  c.restarts = 1;
  c.damping = 0.5;
  expect_monotone(train(mini_matrix(), c), 1e-5);
}

TEST(Corex, FinalObjectiveIsTotalTc) {
  const auto m = train(mini_matrix(), config(20));
  EXPECT_NEAR(m.objective_trace.back(), m.total_tc(), 1e-9);
}

// Brute-force MI of (X_i, Y_j) from the enumerated empirical joint.
double brute_mi(const DocTermMatrix& x, const TopicModel& m, size_t word, size_t topic) {
  double joint[2][2] = {{0, 0}, {0, 0}};
  const double n = static_cast<double>(x.n_docs());
  for (size_t d = 0; d < x.n_docs(); ++d) {
    const bool has = std::binary_search(x.rows[d].begin(), x.rows[d].end(), static_cast<uint32_t>(word));
    const double q1 = m.prob(d, topic);
    joint[has][1] += q1 / n;
    joint[has][0] += (1.0 - q1) / n;
  }
  double mi = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double px = joint[a][0] + joint[a][1];
      const double py = joint[0][b] + joint[1][b];
      if (joint[a][b] > 0) mi += joint[a][b] * std::log(joint[a][b] / (px * py));
    }
  }
  return mi;
}

DocTermMatrix two_word_matrix() {
  // Word 0 and word 1 co-occur strongly.
  DocTermMatrix x;
  x.n_words = 2;
  const std::vector<std::vector<uint32_t>> pattern = {{0, 1}, {0, 1}, {0, 1}, {0}, {1}, {0, 1}, {1}, {0, 1}};
  for (int rep = 0; rep < 5; ++rep) {
    for (size_t k = 0; k < pattern.size(); ++k) {
      x.doc_ids.push_back("d" + std::to_string(x.rows.size()));
      x.rows.push_back(pattern[k]);
    }
  }
  // Documents with neither word cannot be rows; give some a lone word 1.
  for (int k = 0; k < 6; ++k) {
    x.doc_ids.push_back("e" + std::to_string(k));
    x.rows.push_back({1});
  }
  return x;
}

TEST(Corex, TwoWordMiMatchesBruteForce) {
  const auto x = two_word_matrix();
  const auto m = train(x, config(1));
  for (size_t i = 0; i < 2; ++i) EXPECT_NEAR(m.mi(i, 0), brute_mi(x, m, i, 0), 1e-6);
  EXPECT_GT(m.mi(0, 0), 0.01);
}

TEST(Corex, MiMatchesBruteForceOnMini) {
  const auto& x = mini_matrix();
  const auto m = train(x, config(5));
  for (size_t j = 0; j < 5; ++j) {
    for (size_t i = 0; i < x.n_words; i += 17) EXPECT_NEAR(m.mi(i, j), brute_mi(x, m, i, j), 1e-9);
  }
}

TEST(Corex, SingleDocumentIsDegenerate) {
  DocTermMatrix x;
  x.n_words = 3;
  x.doc_ids = {"only"};
  x.rows = {{0, 2}};
  const auto m = train(x, config(2));
  for (double tc : m.topic_tc) {
    EXPECT_TRUE(std::isfinite(tc));
    EXPECT_LT(tc, kDegenerateTc);
  }
  for (double mi : m.word_topic_mi) EXPECT_NEAR(mi, 0.0, 1e-12);
}

TEST(Corex, Deterministic) {
  const auto& x = mini_matrix();
  const auto a = train(x, config(20));
  const auto b = train(x, config(20));
  EXPECT_TRUE(a == b);
  EXPECT_EQ(serialize_model(a), serialize_model(b));
}

TEST(Corex, ThreadCountDoesNotChangeResult) {
  const auto& x = mini_matrix();
  auto c = config(20);
  const auto a = train(x, c);
  c.threads = 4;
  const auto b = train(x, c);
  EXPECT_TRUE(a == b);
}

TEST(Corex, SeedChangesInitialisation) {
  const auto& x = mini_matrix();
  const auto a = train(x, config(20, 1));
  const auto b = train(x, config(20, 2));
  EXPECT_FALSE(a.doc_topic_prob == b.doc_topic_prob);
}

TEST(Corex, DocumentOrderDoesNotMatter) {
  const auto pc = testing::make_planted(3, 10, 100);
  DocTermMatrix rev = pc.matrix;
  std::reverse(rev.rows.begin(), rev.rows.end());
  std::reverse(rev.doc_ids.begin(), rev.doc_ids.end());
  const auto a = train(pc.matrix, config(3));
  const auto b = train(rev, config(3));
  ASSERT_EQ(a.topic_tc.size(), b.topic_tc.size());
  for (size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.topic_tc[j], b.topic_tc[j], 1e-8);
  const size_t n = a.n_docs;
  for (size_t d = 0; d < n; ++d) {
    for (size_t j = 0; j < 3; ++j) EXPECT_NEAR(a.prob(d, j), b.prob(n - 1 - d, j), 1e-6);
  }
}

TEST(Corex, ModelInvariants) {
  const auto& x = mini_matrix();
  const auto m = train(x, config(20));
  for (size_t i = 0; i < m.n_words; ++i) {
    double s = 0.0;
    for (size_t j = 0; j < m.n_topics; ++j) {
      EXPECT_GE(m.alpha_at(i, j), 0.0);
      EXPECT_LE(m.alpha_at(i, j), 1.0);
      s += m.alpha_at(i, j);
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
  }
  for (double p : m.doc_topic_prob) {
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
  }
  const double n = static_cast<double>(x.n_docs());
  std::vector<double> df(x.n_words, 0.0);
  for (const auto& r : x.rows) {
    for (auto i : r) df[i] += 1.0;
  }
  for (size_t i = 0; i < m.n_words; ++i) {
    const double p = df[i] / n;
    const double h = -(p * std::log(p) + (1 - p) * std::log1p(-p));
    for (size_t j = 0; j < m.n_topics; ++j) {
      EXPECT_GE(m.mi(i, j), -1e-12);
      EXPECT_LE(m.mi(i, j), h + 1e-9);
    }
  }
  for (size_t j = 0; j < m.n_topics; ++j) {
    EXPECT_GE(m.topic_tc[j], 0.0);
    if (j) EXPECT_GE(m.topic_tc[j - 1], m.topic_tc[j]);
    double active = 0.0;
    for (size_t d = 0; d < m.n_docs; ++d) active += m.prob(d, j);
    EXPECT_LE(active, 0.5 * n + 1e-9) << "state 1 must be the minority state";
  }
}

TEST(Corex, ConfigValidation) {
  const auto pc = testing::make_planted(2, 5, 20);
  auto bad = [&](auto mutate) {
    auto c = config(2);
    mutate(c);
    EXPECT_THROW(train(pc.matrix, c), ValidationError);
  };
  bad([](CorexConfig& c) { c.n_topics = 0; });
  bad([](CorexConfig& c) { c.n_topics = 11; });
  bad([](CorexConfig& c) { c.max_iter = 0; });
  bad([](CorexConfig& c) { c.tol = 0; });
  bad([](CorexConfig& c) { c.smoothing = -1; });
  bad([](CorexConfig& c) { c.damping = 1.5; });
  bad([](CorexConfig& c) { c.sharpness_start = 1000; });
  bad([](CorexConfig& c) { c.sharpness_growth = 0.5; });
  bad([](CorexConfig& c) { c.restarts = 0; });
  bad([](CorexConfig& c) { c.threads = 0; });
  EXPECT_THROW(train(DocTermMatrix{}, config(1)), ValidationError);
  EXPECT_THROW(train(pc.matrix, config(2), {"just one"}), ValidationError);
}

TEST(Corex, MaxIterStops) {
  auto c = config(5);
  c.max_iter = 3;
  const auto m = train(mini_matrix(), c);
  EXPECT_EQ(m.iterations, 3);
  EXPECT_EQ(m.objective_trace.size(), 3u);
  EXPECT_EQ(m.stop_reason, StopReason::kMaxIter);
}

TopicModel tiny_model() {
  TopicModel m;
  m.n_words = 4;
  m.n_topics = 2;
  m.n_docs = 3;
  m.vocabulary = {"w0", "w1", "w2", "w3"};
  m.doc_ids = {"a", "b", "c"};
  m.word_topic_mi = {0.1, 0.0, 0.3, 0.0, 0.3, 0.2, 0.0, 0.2};
  m.doc_topic_prob = {0.9, 0.5, 0.2, 0.5, 0.9, 0.1};
  m.alpha = std::vector<double>(8, 0.5);
  m.topic_tc = {0.2, 0.1};
  m.objective_trace = {0.1, 0.3};
  return m;
}

TEST(Queries, TopWordsTiesByIndex) {
  const auto m = tiny_model();
  const auto w = top_words(m, 0, 3);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].index, 1u);
  EXPECT_EQ(w[1].index, 2u);
  EXPECT_EQ(w[2].index, 0u);
  EXPECT_EQ(top_words(m, 1, 99).size(), 4u);
  EXPECT_THROW(top_words(m, 2), ValidationError);
  EXPECT_THROW(top_words(m, 0, 0), ValidationError);
}

TEST(Queries, TopDocumentsTiesByRow) {
  const auto m = tiny_model();
  const auto d = top_documents(m, 1, 2);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].doc_id, "a");
  EXPECT_EQ(d[1].doc_id, "b");
}

TEST(Queries, AssignmentThreshold) {
  const auto m = tiny_model();
  const auto a = assign_documents(m, 0.5);
  EXPECT_EQ(a[0], (std::vector<size_t>{0, 1}));
  EXPECT_EQ(a[1], (std::vector<size_t>{1}));
  EXPECT_EQ(a[2], (std::vector<size_t>{0}));
  EXPECT_THROW(assign_documents(m, 0.0), ValidationError);
  EXPECT_THROW(assign_documents(m, 1.0), ValidationError);
}

TEST(Sweep, OneEntryPerSize) {
  auto c = config(0);
  c.seed = 10;
  const auto entries = sweep(mini_matrix(), {5, 10}, c);
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].n_topics, 5);
  EXPECT_EQ(entries[0].seed, 15u);
  EXPECT_EQ(entries[1].seed, 20u);
  for (const auto& e : entries) {
    EXPECT_EQ(e.topic_tc.size(), static_cast<size_t>(e.n_topics));
    EXPECT_NEAR(e.total_tc, std::accumulate(e.topic_tc.begin(), e.topic_tc.end(), 0.0), 1e-12);
    EXPECT_LE(e.min_tc, e.median_tc);
    EXPECT_LE(e.median_tc, e.max_tc);
  }
  EXPECT_THROW(sweep(mini_matrix(), {}, c), ValidationError);
}

TEST(ModelIo, RoundTrip) {
  const auto m = train(mini_matrix(), config(6));
  const auto text = serialize_model(m);
  const auto back = parse_model(text);
  EXPECT_TRUE(back == m);
  EXPECT_EQ(back.config.seed, m.config.seed);
  EXPECT_EQ(back.config.tol, m.config.tol);
  EXPECT_EQ(serialize_model(back), text);
}

TEST(ModelIo, Errors) {
  const auto text = serialize_model(tiny_model());
  EXPECT_THROW(parse_model("something else\n"), ParseError);
  std::string v2 = text;
  v2.replace(v2.find(" 1\n"), 3, " 2\n");
  try {
    parse_model(v2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_model(text.substr(0, text.size() / 2)), ParseError);
  EXPECT_THROW(parse_model(text + "extra\n"), ParseError);
}

}  // namespace
}  // namespace dsq
