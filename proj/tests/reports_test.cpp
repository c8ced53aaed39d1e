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

#include <cstdlib>
#include <string>
#include <vector>

#include "dsq/reports.hpp"
#include "dsq/rng.hpp"

namespace dsq {
namespace {

// Nearest hundredth of a percent by direct distance comparison; exact ties
// go to the even candidate.
int64_t oracle_hundredths(int64_t count, int64_t total) {
  const int64_t lo = count * 10000 / total;
  const int64_t d_lo = count * 10000 - lo * total;        // distance * total
  const int64_t d_hi = (lo + 1) * total - count * 10000;  // distance * total
  if (d_lo < d_hi) return lo;
  if (d_hi < d_lo) return lo + 1;
  return lo % 2 == 0 ? lo : lo + 1;
}

struct Pair {
  int64_t count, total;
  const char* shown;
};

// Representative-ingredient counts and topic totals with the published
// parenthetical percentages.
const Pair kIngredientTable[] = {
    {24, 145, "16.55"}, {11, 45, "24.44"},  {45, 256, "17.58"}, {226, 476, "47.48"},
    {17, 84, "20.24"},  {38, 264, "14.39"}, {11, 48, "22.92"},  {37, 160, "23.12"},
    {11, 134, "8.21"},  {35, 98, "35.71"},  {29, 45, "64.44"},  {26, 171, "15.20"},
};

TEST(Percentage, IngredientTable) {
  for (const auto& p : kIngredientTable) {
    EXPECT_EQ(percentage(p.count, p.total).str(), p.shown) << p.count << "/" << p.total;
    EXPECT_EQ(percentage(p.count, p.total).hundredths, oracle_hundredths(p.count, p.total));
  }
}

TEST(Percentage, TieGoesToEven) {
  // 37/160 = 23.125 exactly.
  EXPECT_EQ(percentage(37, 160).str(), "23.12");
  // 1/32 = 3.125, 3/32 = 9.375.
  EXPECT_EQ(percentage(1, 32).str(), "3.12");
  EXPECT_EQ(percentage(3, 32).str(), "9.38");
}

TEST(Percentage, MatchesOracle) {
  SplitMix64 rng(2024);
  for (int k = 0; k < 200000; ++k) {
    const int64_t total = 1 + static_cast<int64_t>(rng.next() % 5000);
    const int64_t count = static_cast<int64_t>(rng.next() % static_cast<uint64_t>(total + 1));
    ASSERT_EQ(percentage(count, total).hundredths, oracle_hundredths(count, total)) << count << "/" << total;
  }
}

TEST(Percentage, EdgesAndErrors) {
  EXPECT_EQ(percentage(0, 10).str(), "0.00");
  EXPECT_EQ(percentage(10, 10).str(), "100.00");
  EXPECT_EQ(percentage(1, 3).str(), "33.33");
  EXPECT_EQ(percentage(2, 3).str(), "66.67");
  EXPECT_THROW(percentage(1, 0), ValidationError);
  EXPECT_THROW(percentage(-1, 5), ValidationError);
  EXPECT_THROW(percentage(6, 5), ValidationError);
}

// One question per entry; ingredient lists per question.
struct Fixture {
  Assignments assignments;
  std::vector<std::string> ids;
  MatchedCorpus matched;

  void add(std::vector<size_t> topics, std::vector<std::string> ingredients) {
    const std::string id = "q" + std::to_string(ids.size());
    ids.push_back(id);
    assignments.push_back(std::move(topics));
    MatchedQuestion q{id, {}};
    for (auto& n : ingredients) q.matches.push_back({n, 0, 1});
    matched.entries.push_back(std::move(q));
  }
};

TEST(Ingredients, MelatoninExample) {
  Fixture f;
  for (int k = 0; k < 29; ++k) f.add({0}, {"Melatonin"});
  for (int k = 0; k < 10; ++k) f.add({0}, {"Valerian"});
  for (int k = 0; k < 4; ++k) f.add({0}, {"Chamomile"});
  for (int k = 0; k < 2; ++k) f.add({0}, {"Kava"});
  f.add({1}, {"Melatonin"});
  const auto d = ingredient_distribution(f.assignments, f.ids, f.matched, 0);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].ingredient, "Melatonin");
  EXPECT_EQ(d[0].count, 29);
  EXPECT_EQ(d[0].total, 45);
  EXPECT_EQ(d[0].pct.str(), "64.44");
  EXPECT_FALSE(d[0].below_threshold);
  EXPECT_EQ(d[1].pct.str(), "22.22");
}

TEST(Ingredients, TopIngredientBelowThresholdIsFlagged) {
  Fixture f;
  for (int k = 0; k < 11; ++k) f.add({0}, {"Damiana"});
  for (int k = 0; k < 10; ++k) f.add({0}, {"Salvia"});
  for (int k = 0; k < 113; ++k) f.add({0}, {"Mullein" + std::to_string(k % 20)});
  const auto d = ingredient_distribution(f.assignments, f.ids, f.matched, 0);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].ingredient, "Damiana");
  EXPECT_EQ(d[0].pct.str(), "8.21");
  EXPECT_TRUE(d[0].below_threshold);
}

TEST(Ingredients, SingleMentionFlagged) {
  Fixture f;
  f.add({0}, {"Iron"});
  for (int k = 0; k < 99; ++k) f.add({0}, {"X" + std::to_string(k)});
  const auto d = ingredient_distribution(f.assignments, f.ids, f.matched, 0);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].ingredient, "Iron");
  EXPECT_EQ(d[0].pct.str(), "1.00");
  EXPECT_TRUE(d[0].below_threshold);
}

TEST(Ingredients, ThresholdBoundary) {
  Fixture f;
  for (int k = 0; k < 50; ++k) f.add({0}, {"Aaa"});
  for (int k = 0; k < 10; ++k) f.add({0}, {"Ten"});
  for (int k = 0; k < 9; ++k) f.add({0}, {"Nine"});
  for (int k = 0; k < 31; ++k) f.add({0}, {});
  const auto d = ingredient_distribution(f.assignments, f.ids, f.matched, 0);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[1].ingredient, "Ten");
  EXPECT_EQ(d[1].pct.str(), "10.00");
}

TEST(Ingredients, QuestionCountedOncePerIngredientAndTiesAlphabetical) {
  Fixture f;
  f.add({0}, {"Zinc", "Zinc", "Iron"});
  f.add({0}, {"Iron", "Zinc"});
  const auto d = ingredient_distribution(f.assignments, f.ids, f.matched, 0);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].ingredient, "Iron");
  EXPECT_EQ(d[0].count, 2);
  EXPECT_EQ(d[1].ingredient, "Zinc");
  EXPECT_EQ(d[1].count, 2);
}

TEST(Ingredients, Errors) {
  Fixture f;
  f.add({1}, {"Iron"});
  try {
    ingredient_distribution(f.assignments, f.ids, f.matched, 0);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("topic 0"), std::string::npos);
  }
  EXPECT_THROW(ingredient_distribution(f.assignments, {}, f.matched, 1), ValidationError);
  EXPECT_THROW(ingredient_distribution(f.assignments, f.ids, f.matched, 1, 1.5), ValidationError);
  EXPECT_THROW(ingredient_distribution(f.assignments, {"unknown"}, f.matched, 1), ValidationError);
}

TopicModel judged_model(size_t n_topics, size_t n_docs) {
  TopicModel m;
  m.n_topics = n_topics;
  m.n_docs = n_docs;
  m.n_words = 1;
  m.vocabulary = {"w"};
  m.word_topic_mi.assign(n_topics, 0.0);
  m.alpha.assign(n_topics, 1.0 / static_cast<double>(n_topics));
  m.topic_tc.assign(n_topics, 0.0);
  for (size_t d = 0; d < n_docs; ++d) m.doc_ids.push_back("q" + std::to_string(d));
  m.doc_topic_prob.assign(n_docs * n_topics, 0.0);
  // Topic j ranks documents 10j..10j+9 first.
  for (size_t j = 0; j < n_topics; ++j) {
    for (size_t k = 0; k < 10; ++k) m.doc_topic_prob[(10 * j + k) * n_topics + j] = 0.99 - 0.01 * static_cast<double>(k);
  }
  return m;
}

TEST(Accuracy, TenNineEightSeven) {
  const auto m = judged_model(4, 40);
  std::string content = "# topic, question, correct\n";
  const int correct[] = {10, 9, 8, 7};
  for (size_t j = 0; j < 4; ++j) {
    for (int k = 0; k < 10; ++k) {
      content += std::to_string(j) + ", q" + std::to_string(10 * j + k) + ", " + (k < correct[j] ? "1" : "0") + "\n";
    }
  }
  const auto recs = accuracy_report(parse_judgments(content), m);
  ASSERT_EQ(recs.size(), 4u);
  const char* want[] = {"100.00", "90.00", "80.00", "70.00"};
  for (size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(recs[j].topic, j);
    EXPECT_EQ(recs[j].n_correct, correct[j]);
    EXPECT_EQ(recs[j].judged.size(), 10u);
    EXPECT_EQ(recs[j].accuracy.str(), want[j]);
  }
  const auto csv = render_accuracy_report(recs, nullptr, ReportFormat::kCsv);
  EXPECT_EQ(csv,
            "topic,category,judged,correct,accuracy\n0,unassigned,10,10,100.00\n1,unassigned,10,9,90.00\n"
            "2,unassigned,10,8,80.00\n3,unassigned,10,7,70.00\n");
}

TEST(Accuracy, StaleJudgmentNamesQuestion) {
  const auto m = judged_model(2, 20);
  try {
    accuracy_report(parse_judgments("0, q15, 1\n"), m);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("q15"), std::string::npos) << e.what();
  }
  EXPECT_THROW(accuracy_report(parse_judgments("5, q1, 1\n"), m), ValidationError);
}

TEST(Accuracy, ParseErrors) {
  EXPECT_THROW(parse_judgments("0, q1\n"), ParseError);
  EXPECT_THROW(parse_judgments("x, q1, 1\n"), ParseError);
  EXPECT_THROW(parse_judgments("0, q1, yes\n"), ParseError);
  EXPECT_THROW(parse_judgments("0, , 1\n"), ParseError);
  EXPECT_THROW(parse_judgments("0, q1, 1\n0, q1, 0\n"), ValidationError);
  EXPECT_EQ(parse_judgments("\n# only comments\n").size(), 0u);
  EXPECT_EQ(parse_judgments("0, q1, 1\n1, q1, 0\n").size(), 2u);
}

TEST(Render, IngredientTextFormat) {
  TopicReportRow r;
  r.topic = 50;
  r.label = TaxonomyEntry{"Sleeping", "Sleep disorder"};
  r.assigned = 45;
  r.ingredients = {{"Melatonin", 29, 45, percentage(29, 45), false}};
  EXPECT_EQ(render_ingredient_report({r}, ReportFormat::kText), "Sleeping (50)\t45\tMelatonin 29 (64.44%)\n");
  r.ingredients = {{"Damiana", 11, 134, percentage(11, 134), true}};
  r.assigned = 134;
  r.label.reset();
  EXPECT_EQ(render_ingredient_report({r}, ReportFormat::kText),
            "unassigned (50)\t134\tDamiana 11 (8.21%) [below threshold]\n");
  EXPECT_EQ(render_ingredient_report({r}, ReportFormat::kCsv),
            "topic,category,assigned,ingredient,count,pct,below_threshold\n50,unassigned,134,Damiana,11,8.21,1\n");
}

TEST(Render, CountsAndQuoting) {
  const std::vector<NamedCount> c = {{"Uses & adverse effects", 15}, {"Dose, form", 1}};
  EXPECT_EQ(render_counts(c, "group", "categories", ReportFormat::kCsv),
            "group,categories\nUses & adverse effects,15\n\"Dose, form\",1\n");
  EXPECT_EQ(render_counts(c, "group", "categories", ReportFormat::kText), "Uses & adverse effects\t15\nDose, form\t1\n");
}

TEST(Render, Formats) {
  EXPECT_EQ(parse_report_format(" CSV "), ReportFormat::kCsv);
  EXPECT_EQ(parse_report_format("text"), ReportFormat::kText);
  EXPECT_THROW(parse_report_format("html"), ValidationError);
  EXPECT_STREQ(extension(ReportFormat::kText), ".txt");
}

TEST(TopicReport, RowsUseTaxonomyAndAssignments) {
  auto m = judged_model(2, 20);
  m.n_words = 2;
  m.vocabulary = {"alpha", "beta"};
  m.word_topic_mi = {0.1, 0.2, 0.3, 0.0};
  m.alpha.assign(4, 0.5);
  const auto assignments = assign_documents(m, 0.5);
  MatchedCorpus matched;
  for (const auto& id : m.doc_ids) matched.entries.push_back({id, {{"Iron", 0, 1}}});
  const auto tax = parse_taxonomy("[groups]\nG\n[categories]\nC = G\n[topics]\n1 = C\n", 2);
  const auto rows = build_topic_report(m, tax, matched, assignments, topics_with_assignments(m, assignments),
                                       {1, 3, 0.1});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].category(), "unassigned");
  EXPECT_EQ(rows[1].category(), "C");
  EXPECT_EQ(rows[1].group(), "G");
  EXPECT_EQ(rows[0].assigned, 10u);
  ASSERT_EQ(rows[0].keywords.size(), 1u);
  EXPECT_EQ(rows[0].keywords[0].word, "beta");
  EXPECT_EQ(rows[1].questions.size(), 3u);
  EXPECT_EQ(rows[1].questions[0].doc_id, "q10");
  EXPECT_EQ(rows[1].ingredients[0].pct.str(), "100.00");
  const auto csv = render_topic_report(rows, ReportFormat::kCsv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "topic,category,group,assigned,keywords,questions,probabilities,ingredients");
  EXPECT_NE(csv.find("1,C,G,10,alpha,q10;q11;q12,0.9900;0.9800;0.9700,Iron\n"), std::string::npos) << csv;
}

}  // namespace
}  // namespace dsq
