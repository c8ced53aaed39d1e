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

// Report tables: per-topic keywords/questions/ingredients, ingredient
// shares, accuracy from human judgments, and taxonomy distributions.
//
// Delimited column orders (stable):
//   topics       topic,category,group,assigned,keywords,questions,probabilities,ingredients
//   ingredients  topic,category,assigned,ingredient,count,pct,below_threshold
//   accuracy     topic,category,judged,correct,accuracy
//   groups       group,categories
//   categories   category,topics
// List-valued cells are ';'-joined.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dsq/corex.hpp"
#include "dsq/error.hpp"
#include "dsq/lexicon.hpp"
#include "dsq/taxonomy.hpp"
#include "dsq/text.hpp"

namespace dsq {

// A percentage held in hundredths, rendered with two decimals.
struct Percent {
  int64_t hundredths = 0;

  std::string str() const {
    std::string frac = std::to_string(hundredths % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return std::to_string(hundredths / 100) + "." + frac;
  }
  double value() const { return static_cast<double>(hundredths) / 100.0; }
  auto operator<=>(const Percent&) const = default;
};

// 100 * count / total to two decimals, ties to even on the exact rational.
inline Percent percentage(int64_t count, int64_t total) {
  if (total < 1) throw ValidationError("percentage: total must be >= 1 (got " + std::to_string(total) + ")");
  if (count < 0 || count > total) {
    throw ValidationError("percentage: count " + std::to_string(count) + " outside [0, " + std::to_string(total) + "]");
  }
  const int64_t num = count * 10000;
  int64_t q = num / total;
  const int64_t r2 = 2 * (num % total);
  if (r2 > total || (r2 == total && q % 2 == 1)) ++q;
  return Percent{q};
}

enum class ReportFormat { kCsv, kText };

inline ReportFormat parse_report_format(std::string_view s) {
  const std::string v = text::to_lower(text::trim(s));
  if (v == "csv") return ReportFormat::kCsv;
  if (v == "text") return ReportFormat::kText;
  throw ValidationError("unknown report format '" + std::string(s) + "' (expected csv or text)");
}

inline const char* extension(ReportFormat f) { return f == ReportFormat::kCsv ? ".csv" : ".txt"; }

// ---------------------------------------------------------------------------
// Ingredient shares

struct IngredientShare {
  std::string ingredient;
  int64_t count = 0;
  int64_t total = 0;
  Percent pct;
  bool below_threshold = false;

  bool operator==(const IngredientShare&) const = default;
};

using Assignments = std::vector<std::vector<size_t>>;

inline size_t assigned_count(const Assignments& assignments, size_t topic) {
  size_t n = 0;
  for (const auto& topics : assignments) {
    if (std::find(topics.begin(), topics.end(), topic) != topics.end()) ++n;
  }
  return n;
}

// `assignments[d]` belongs to question `doc_ids[d]`.
inline std::vector<IngredientShare> ingredient_distribution(const Assignments& assignments,
                                                            const std::vector<std::string>& doc_ids,
                                                            const MatchedCorpus& matched, size_t topic,
                                                            double min_frac = 0.10) {
  if (assignments.size() != doc_ids.size()) throw ValidationError("assignments and document ids differ in length");
  if (!(min_frac >= 0.0 && min_frac <= 1.0)) throw ValidationError("min_frac must be in [0, 1]");
  const auto by_question = matched.ingredients_by_question();
  std::map<std::string, int64_t> counts;
  int64_t total = 0;
  for (size_t d = 0; d < assignments.size(); ++d) {
    const auto& topics = assignments[d];
    if (std::find(topics.begin(), topics.end(), topic) == topics.end()) continue;
    ++total;
    auto it = by_question.find(doc_ids[d]);
    if (it == by_question.end()) throw ValidationError("question '" + doc_ids[d] + "' is not in the matched corpus");
    for (const auto& n : it->second) ++counts[n];
  }
  if (total == 0) throw ValidationError("topic " + std::to_string(topic) + " has no assigned questions");

  std::vector<IngredientShare> all;
  for (const auto& [name, c] : counts) all.push_back({name, c, total, percentage(c, total), false});
  std::stable_sort(all.begin(), all.end(), [](const IngredientShare& a, const IngredientShare& b) {
    return a.count != b.count ? a.count > b.count : a.ingredient < b.ingredient;
  });
  std::vector<IngredientShare> out;
  for (auto& s : all) {
    // count / total >= min_frac, with slack for binary min_frac.
    const bool passes = static_cast<double>(s.count) >= min_frac * static_cast<double>(total) - 1e-9;
    if (passes) {
      out.push_back(s);
    } else if (out.empty()) {
      s.below_threshold = true;
      out.push_back(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Topic report

struct TopicReportRow {
  size_t topic = 0;
  std::optional<TaxonomyEntry> label;  // nullopt = unassigned
  size_t assigned = 0;
  std::vector<WordScore> keywords;
  std::vector<DocScore> questions;
  std::vector<IngredientShare> ingredients;

  std::string category() const { return label ? label->category : "unassigned"; }
  std::string group() const { return label ? label->group : "unassigned"; }
};

struct TopicReportOptions {
  size_t top_k_words = 15;
  size_t top_k_docs = 10;
  double min_frac = 0.10;
};

inline std::vector<TopicReportRow> build_topic_report(const TopicModel& model, const Taxonomy& taxonomy,
                                                      const MatchedCorpus& matched, const Assignments& assignments,
                                                      const std::vector<size_t>& topics,
                                                      const TopicReportOptions& opts = {}) {
  std::vector<TopicReportRow> rows;
  for (size_t t : topics) {
    check_topic(model, t);
    TopicReportRow row;
    row.topic = t;
    if (t < taxonomy.n_topics()) row.label = taxonomy.lookup(t);
    row.assigned = assigned_count(assignments, t);
    row.keywords = top_words(model, t, opts.top_k_words);
    row.questions = top_documents(model, t, opts.top_k_docs);
    row.ingredients = ingredient_distribution(assignments, model.doc_ids, matched, t, opts.min_frac);
    rows.push_back(std::move(row));
  }
  return rows;
}

// Topics with at least one assigned question, ascending.
inline std::vector<size_t> topics_with_assignments(const TopicModel& model, const Assignments& assignments) {
  std::vector<size_t> out;
  for (size_t t = 0; t < model.n_topics; ++t) {
    if (assigned_count(assignments, t) > 0) out.push_back(t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Accuracy

struct Judgment {
  size_t topic = 0;
  std::string question_id;
  bool correct = false;
  size_t line_no = 0;
};

// Lines "topic_index, question_id, correct(0|1)"; '#' comments and blank
// lines are ignored.
inline std::vector<Judgment> parse_judgments(std::string_view content, const std::string& source = "<judgments>") {
  std::vector<Judgment> out;
  std::set<std::pair<size_t, std::string>> seen;
  size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto at = source + ":" + std::to_string(line_no) + ": ";
    const auto fields = text::split(line, ',');
    if (fields.size() != 3) throw ParseError(at + "expected 'topic_index, question_id, correct'");
    Judgment j;
    j.line_no = line_no;
    try {
      j.topic = text::parse_number<size_t>(fields[0], "topic index");
    } catch (const ParseError& e) {
      throw ParseError(at + e.what());
    }
    j.question_id = std::string(text::trim(fields[1]));
    if (j.question_id.empty()) throw ParseError(at + "empty question id");
    const auto flag = text::trim(fields[2]);
    if (flag == "1") j.correct = true;
    else if (flag != "0") throw ParseError(at + "correct must be 0 or 1, got '" + std::string(flag) + "'");
    if (!seen.emplace(j.topic, j.question_id).second) {
      throw ValidationError(at + "duplicate judgment for topic " + std::to_string(j.topic) + ", question '" +
                            j.question_id + "'");
    }
    out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<Judgment> load_judgments(const std::filesystem::path& path) {
  return parse_judgments(text::read_file(path), path.string());
}

struct AccuracyRecord {
  size_t topic = 0;
  std::vector<std::string> judged;
  std::vector<bool> correct;
  int64_t n_correct = 0;
  Percent accuracy;
};

// One record per judged topic, ascending topic index.
inline std::vector<AccuracyRecord> accuracy_report(const std::vector<Judgment>& judgments, const TopicModel& model,
                                                   size_t top_k = 10) {
  std::map<size_t, AccuracyRecord> by_topic;
  std::map<size_t, std::set<std::string>> top_ids;
  for (const auto& j : judgments) {
    if (j.topic >= model.n_topics) {
      throw ValidationError("judgment on line " + std::to_string(j.line_no) + ": topic " + std::to_string(j.topic) +
                            " out of range");
    }
    auto it = top_ids.find(j.topic);
    if (it == top_ids.end()) {
      std::set<std::string> ids;
      for (const auto& d : top_documents(model, j.topic, top_k)) ids.insert(d.doc_id);
      it = top_ids.emplace(j.topic, std::move(ids)).first;
    }
    if (!it->second.count(j.question_id)) {
      throw ValidationError("judged question '" + j.question_id + "' is not among the top " + std::to_string(top_k) +
                            " questions of topic " + std::to_string(j.topic));
    }
    auto& rec = by_topic[j.topic];
    rec.topic = j.topic;
    rec.judged.push_back(j.question_id);
    rec.correct.push_back(j.correct);
    rec.n_correct += j.correct ? 1 : 0;
  }
  std::vector<AccuracyRecord> out;
  for (auto& [t, rec] : by_topic) {
    rec.accuracy = percentage(rec.n_correct, static_cast<int64_t>(rec.judged.size()));
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

namespace report_detail {

inline std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

inline std::string share_text(const IngredientShare& s) {
  std::string out = s.ingredient + " " + std::to_string(s.count) + " (" + s.pct.str() + "%)";
  if (s.below_threshold) out += " [below threshold]";
  return out;
}

inline std::string prob_text(double p) { return text::format_fixed(p, 4); }

inline std::string category_of(const Taxonomy* tax, size_t topic) {
  if (tax == nullptr || topic >= tax->n_topics()) return "unassigned";
  const auto e = tax->lookup(topic);
  return e ? e->category : "unassigned";
}

}  // namespace report_detail

inline std::string render_topic_report(const std::vector<TopicReportRow>& rows, ReportFormat fmt) {
  using namespace report_detail;
  std::string out;
  if (fmt == ReportFormat::kCsv) {
    out += text::csv_row({"topic", "category", "group", "assigned", "keywords", "questions", "probabilities",
                          "ingredients"});
    for (const auto& r : rows) {
      std::vector<std::string> kw, qs, ps, ing;
      for (const auto& w : r.keywords) kw.push_back(w.word);
      for (const auto& d : r.questions) {
        qs.push_back(d.doc_id);
        ps.push_back(prob_text(d.prob));
      }
      for (const auto& s : r.ingredients) ing.push_back(s.ingredient);
      out += text::csv_row({std::to_string(r.topic), r.category(), r.group(), std::to_string(r.assigned),
                            join(kw, ";"), join(qs, ";"), join(ps, ";"), join(ing, ";")});
    }
    return out;
  }
  for (const auto& r : rows) {
    out += "Topic " + std::to_string(r.topic) + ": " + r.category() + " (" + r.group() + "), " +
           std::to_string(r.assigned) + " questions assigned\n";
    std::vector<std::string> kw;
    for (const auto& w : r.keywords) kw.push_back(w.word);
    out += "  keywords:    " + join(kw, ", ") + "\n";
    out += "  questions:  ";
    for (const auto& d : r.questions) out += " " + d.doc_id + " (" + prob_text(d.prob) + ")";
    out += "\n";
    std::vector<std::string> ing;
    for (const auto& s : r.ingredients) ing.push_back(share_text(s));
    out += "  ingredients: " + join(ing, ", ") + "\n\n";
  }
  return out;
}

inline std::string render_ingredient_report(const std::vector<TopicReportRow>& rows, ReportFormat fmt) {
  using namespace report_detail;
  std::string out;
  if (fmt == ReportFormat::kCsv) {
    out += text::csv_row({"topic", "category", "assigned", "ingredient", "count", "pct", "below_threshold"});
    for (const auto& r : rows) {
      for (const auto& s : r.ingredients) {
        out += text::csv_row({std::to_string(r.topic), r.category(), std::to_string(r.assigned), s.ingredient,
                              std::to_string(s.count), s.pct.str(), s.below_threshold ? "1" : "0"});
      }
    }
    return out;
  }
  for (const auto& r : rows) {
    out += r.category() + " (" + std::to_string(r.topic) + ")\t" + std::to_string(r.assigned) + "\t";
    std::vector<std::string> ing;
    for (const auto& s : r.ingredients) ing.push_back(share_text(s));
    out += join(ing, ", ") + "\n";
  }
  return out;
}

inline std::string render_accuracy_report(const std::vector<AccuracyRecord>& records, const Taxonomy* taxonomy,
                                          ReportFormat fmt) {
  using namespace report_detail;
  std::string out;
  if (fmt == ReportFormat::kCsv) {
    out += text::csv_row({"topic", "category", "judged", "correct", "accuracy"});
    for (const auto& r : records) {
      out += text::csv_row({std::to_string(r.topic), category_of(taxonomy, r.topic), std::to_string(r.judged.size()),
                            std::to_string(r.n_correct), r.accuracy.str()});
    }
    return out;
  }
  for (const auto& r : records) {
    out += category_of(taxonomy, r.topic) + " (" + std::to_string(r.topic) + ")\t" + std::to_string(r.n_correct) +
           " (" + r.accuracy.str() + "%) of " + std::to_string(r.judged.size()) + "\n";
  }
  return out;
}

inline std::string render_counts(const std::vector<NamedCount>& counts, std::string_view name_col,
                                 std::string_view count_col, ReportFormat fmt) {
  std::string out;
  if (fmt == ReportFormat::kCsv) {
    out += text::csv_row({std::string(name_col), std::string(count_col)});
    for (const auto& c : counts) out += text::csv_row({c.name, std::to_string(c.count)});
    return out;
  }
  for (const auto& c : counts) out += c.name + "\t" + std::to_string(c.count) + "\n";
  return out;
}

}  // namespace dsq
