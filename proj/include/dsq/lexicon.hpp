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

#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsq/corpus.hpp"
#include "dsq/error.hpp"
#include "dsq/text.hpp"

namespace dsq {

// Matching key of a name: lowercased alphanumeric tokens joined by single
// spaces. "St. John's Wort" and "st johns wort" differ; "St John's wort"
// and "st. john's WORT" share the key "st john s wort".
inline std::string name_key(std::string_view name) {
  std::string key;
  for (const auto& tok : text::alnum_tokens(name)) {
    if (!key.empty()) key.push_back(' ');
    key += tok;
  }
  return key;
}

class IngredientLexicon {
 public:
  static constexpr int kDefaultMinQuestions = 5;

  IngredientLexicon() = default;

  // Throws ValidationError for empty names or duplicates after case folding.
  IngredientLexicon(std::vector<std::string> preferred, std::set<std::string> everyday_food_drink,
                    std::set<std::string> body_parts, std::set<std::string> recreational_drugs,
                    int min_questions = kDefaultMinQuestions)
      : min_questions_(min_questions) {
    if (min_questions < 0) throw ValidationError("min_questions must be >= 0");
    for (auto& name : preferred) add_preferred(std::string(text::trim(name)));
    for (const auto& n : everyday_food_drink) everyday_.insert(name_key(n));
    for (const auto& n : body_parts) body_parts_.insert(name_key(n));
    for (const auto& n : recreational_drugs) recreational_.insert(name_key(n));
  }

  const std::vector<std::string>& preferred_names() const { return preferred_; }
  int min_questions() const { return min_questions_; }
  void set_min_questions(int n) {
    if (n < 0) throw ValidationError("min_questions must be >= 0");
    min_questions_ = n;
  }

  // Exclusion sets hold name keys.
  const std::set<std::string>& everyday_food_drink() const { return everyday_; }
  const std::set<std::string>& body_parts() const { return body_parts_; }
  const std::set<std::string>& recreational_drugs() const { return recreational_; }

  bool contains(std::string_view name) const { return by_key_.count(name_key(name)) > 0; }

  // Canonical (as written in the lexicon) spelling for a name key.
  const std::string* canonical(const std::string& key) const {
    auto it = by_key_.find(key);
    return it == by_key_.end() ? nullptr : &preferred_[it->second];
  }

  IngredientLexicon with_names(const std::vector<std::string>& names) const {
    IngredientLexicon out;
    out.min_questions_ = min_questions_;
    out.everyday_ = everyday_;
    out.body_parts_ = body_parts_;
    out.recreational_ = recreational_;
    for (const auto& n : names) out.add_preferred(n);
    return out;
  }

 private:
  void add_preferred(std::string name) {
    const std::string key = name_key(name);
    if (key.empty()) throw ValidationError("preferred name '" + name + "' has no alphanumeric characters");
    if (by_key_.count(key)) {
      throw ValidationError("duplicate preferred name '" + name + "' (same as '" + preferred_[by_key_[key]] +
                            "' after case folding)");
    }
    by_key_.emplace(key, preferred_.size());
    preferred_.push_back(std::move(name));
  }

  std::vector<std::string> preferred_;
  std::unordered_map<std::string, size_t> by_key_;
  std::set<std::string> everyday_;
  std::set<std::string> body_parts_;
  std::set<std::string> recreational_;
  int min_questions_ = kDefaultMinQuestions;
};

inline IngredientLexicon parse_lexicon(std::string_view content, std::string_view source = "<input>",
                                       int min_questions = IngredientLexicon::kDefaultMinQuestions) {
  const auto doc = text::SectionedText::parse(content, source);
  if (!doc.has("preferred")) throw ParseError(std::string(source) + ": missing [preferred] section");

  std::vector<std::string> preferred;
  std::set<std::string> everyday, body, recreational;
  for (const auto& sec : doc.sections()) {
    std::set<std::string>* target = nullptr;
    if (sec.name == "preferred") {
      for (const auto& l : sec.lines) preferred.push_back(l.text);
      continue;
    }
    if (sec.name == "exclude.everyday_food_drink") target = &everyday;
    else if (sec.name == "exclude.body_parts") target = &body;
    else if (sec.name == "exclude.recreational_drugs") target = &recreational;
    else throw ParseError(std::string(source) + ": unknown section [" + sec.name + "]");
    for (const auto& l : sec.lines) target->insert(l.text);
  }
  try {
    return IngredientLexicon(std::move(preferred), std::move(everyday), std::move(body), std::move(recreational),
                             min_questions);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ": " + e.what());
  }
}

inline IngredientLexicon load_lexicon(const std::filesystem::path& path,
                                      int min_questions = IngredientLexicon::kDefaultMinQuestions) {
  if (!std::filesystem::exists(path)) throw Error("lexicon file not found: " + path.string());
  return parse_lexicon(text::read_file(path), path.string(), min_questions);
}

inline std::string serialize_lexicon(const IngredientLexicon& lex) {
  std::string out = "[preferred]\n";
  for (const auto& n : lex.preferred_names()) out += n + "\n";
  auto section = [&](const char* name, const std::set<std::string>& s) {
    out += std::string("\n[") + name + "]\n";
    for (const auto& n : s) out += n + "\n";
  };
  section("exclude.everyday_food_drink", lex.everyday_food_drink());
  section("exclude.body_parts", lex.body_parts());
  section("exclude.recreational_drugs", lex.recreational_drugs());
  return out;
}

// ---------------------------------------------------------------------------
// Matching

struct IngredientMatch {
  std::string name;  // canonical lexicon spelling
  size_t begin = 0;  // byte offsets into Question::text()
  size_t end = 0;

  bool operator==(const IngredientMatch&) const = default;
};

struct MatchedQuestion {
  std::string question_id;
  std::vector<IngredientMatch> matches;  // sorted by begin, non-overlapping

  bool operator==(const MatchedQuestion&) const = default;
};

struct MatchedCorpus {
  std::vector<MatchedQuestion> entries;  // in corpus order

  const MatchedQuestion* find(const std::string& id) const {
    for (const auto& e : entries) {
      if (e.question_id == id) return &e;
    }
    return nullptr;
  }

  // Distinct ingredient names mentioned by each question, keyed by id.
  std::unordered_map<std::string, std::set<std::string>> ingredients_by_question() const {
    std::unordered_map<std::string, std::set<std::string>> out;
    for (const auto& e : entries) {
      auto& s = out[e.question_id];
      for (const auto& m : e.matches) s.insert(m.name);
    }
    return out;
  }

  bool operator==(const MatchedCorpus&) const = default;
};

// Finds whole-token, case-insensitive mentions of lexicon names in one text.
// Overlaps are resolved longest-first (in tokens), then leftmost.
class IngredientMatcher {
 public:
  explicit IngredientMatcher(const IngredientLexicon& lexicon) {
    for (const auto& name : lexicon.preferred_names()) {
      auto toks = text::alnum_tokens(name);
      max_len_ = std::max(max_len_, toks.size());
      by_first_[toks.front()].push_back({toks, name});
    }
    // Longest candidates first so scanning order is independent of file order.
    for (auto& [first, list] : by_first_) {
      std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
        return a.tokens.size() != b.tokens.size() ? a.tokens.size() > b.tokens.size() : a.tokens < b.tokens;
      });
    }
  }

  std::vector<IngredientMatch> match(std::string_view s) const {
    const auto runs = text::alnum_runs(s);
    std::vector<std::string> toks;
    toks.reserve(runs.size());
    for (const auto& r : runs) toks.push_back(text::to_lower(s.substr(r.begin, r.end - r.begin)));

    struct Candidate {
      size_t start, len;
      const std::string* name;
    };
    std::vector<Candidate> cands;
    for (size_t i = 0; i < toks.size(); ++i) {
      auto it = by_first_.find(toks[i]);
      if (it == by_first_.end()) continue;
      for (const auto& e : it->second) {
        const size_t n = e.tokens.size();
        if (i + n > toks.size()) continue;
        if (std::equal(e.tokens.begin(), e.tokens.end(), toks.begin() + static_cast<long>(i))) {
          cands.push_back({i, n, &e.name});
        }
      }
    }
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
      return a.len != b.len ? a.len > b.len : a.start < b.start;
    });

    std::vector<bool> taken(toks.size(), false);
    std::vector<IngredientMatch> out;
    for (const auto& c : cands) {
      bool free = true;
      for (size_t k = c.start; k < c.start + c.len; ++k) free = free && !taken[k];
      if (!free) continue;
      for (size_t k = c.start; k < c.start + c.len; ++k) taken[k] = true;
      out.push_back({*c.name, runs[c.start].begin, runs[c.start + c.len - 1].end});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });
    return out;
  }

 private:
  struct Entry {
    std::vector<std::string> tokens;
    std::string name;
  };
  std::unordered_map<std::string, std::vector<Entry>> by_first_;
  size_t max_len_ = 0;
};

inline MatchedCorpus match_ingredients(const Corpus& corpus, const IngredientLexicon& lexicon) {
  const IngredientMatcher matcher(lexicon);
  MatchedCorpus out;
  for (const auto& q : corpus) {
    auto matches = matcher.match(q.text());
    if (!matches.empty()) out.entries.push_back({q.id, std::move(matches)});
  }
  return out;
}

// Number of distinct questions mentioning each ingredient.
inline std::map<std::string, int> question_counts(const MatchedCorpus& matched) {
  std::map<std::string, int> counts;
  for (const auto& e : matched.entries) {
    std::set<std::string> seen;
    for (const auto& m : e.matches) {
      if (seen.insert(m.name).second) ++counts[m.name];
    }
  }
  return counts;
}

enum class DropReason { kTooFewQuestions, kEverydayFoodDrink, kBodyPart, kRecreationalDrug };

inline const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::kTooFewQuestions: return "too_few_questions";
    case DropReason::kEverydayFoodDrink: return "everyday_food_drink";
    case DropReason::kBodyPart: return "body_part";
    case DropReason::kRecreationalDrug: return "recreational_drug";
  }
  return "unknown";
}

struct DroppedIngredient {
  std::string name;
  DropReason reason;
  int questions = 0;
};

struct CleanedLexicon {
  IngredientLexicon lexicon;
  MatchedCorpus matched;
  std::vector<DroppedIngredient> dropped;  // in lexicon order
};

// Applies the four cleaning rules in order: question-count threshold
// (strictly more than min_questions retained), then the everyday
// food/drink, body-part and recreational-drug exclusion lists. Questions
// left without any retained match are removed.
inline CleanedLexicon clean_lexicon(const MatchedCorpus& matched, const IngredientLexicon& lexicon) {
  const auto counts = question_counts(matched);
  std::vector<std::string> kept;
  std::vector<DroppedIngredient> dropped;
  std::set<std::string> kept_set;
  for (const auto& name : lexicon.preferred_names()) {
    auto it = counts.find(name);
    const int n = it == counts.end() ? 0 : it->second;
    const std::string key = name_key(name);
    if (n <= lexicon.min_questions()) {
      dropped.push_back({name, DropReason::kTooFewQuestions, n});
    } else if (lexicon.everyday_food_drink().count(key)) {
      dropped.push_back({name, DropReason::kEverydayFoodDrink, n});
    } else if (lexicon.body_parts().count(key)) {
      dropped.push_back({name, DropReason::kBodyPart, n});
    } else if (lexicon.recreational_drugs().count(key)) {
      dropped.push_back({name, DropReason::kRecreationalDrug, n});
    } else {
      kept.push_back(name);
      kept_set.insert(name);
    }
  }

  MatchedCorpus filtered;
  for (const auto& e : matched.entries) {
    MatchedQuestion q{e.question_id, {}};
    for (const auto& m : e.matches) {
      if (kept_set.count(m.name)) q.matches.push_back(m);
    }
    if (!q.matches.empty()) filtered.entries.push_back(std::move(q));
  }
  return {lexicon.with_names(kept), std::move(filtered), std::move(dropped)};
}

// ---------------------------------------------------------------------------
// Serialization of matched corpora: one JSON object per line.

inline std::string serialize_matched(const MatchedCorpus& matched) {
  std::string out;
  for (const auto& e : matched.entries) {
    nlohmann::ordered_json obj;
    obj["id"] = e.question_id;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& m : e.matches) {
      nlohmann::ordered_json jm;
      jm["name"] = m.name;
      jm["begin"] = m.begin;
      jm["end"] = m.end;
      arr.push_back(std::move(jm));
    }
    obj["matches"] = std::move(arr);
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

inline MatchedCorpus parse_matched(std::string_view content, std::string_view source = "<input>") {
  MatchedCorpus out;
  size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    if (text::trim(raw).empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(raw);
      MatchedQuestion q{obj.at("id").get<std::string>(), {}};
      for (const auto& jm : obj.at("matches")) {
        q.matches.push_back({jm.at("name").get<std::string>(), jm.at("begin").get<size_t>(),
                             jm.at("end").get<size_t>()});
      }
      out.entries.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace dsq
