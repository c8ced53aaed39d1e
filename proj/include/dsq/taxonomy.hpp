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

// Topic index -> category -> group mapping.
//
//   [groups]
//   Uses & adverse effects
//   [categories]
//   Gastrointestinal disorders = Uses & adverse effects
//   [topics]
//   65 = Gastrointestinal disorders
//
// Names are compared exactly after trimming. Topics without a line are
// unassigned.

#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsq/error.hpp"
#include "dsq/text.hpp"

namespace dsq {

struct TaxonomyEntry {
  std::string category;
  std::string group;

  bool operator==(const TaxonomyEntry&) const = default;
};

struct NamedCount {
  std::string name;
  size_t count = 0;

  bool operator==(const NamedCount&) const = default;
};

class Taxonomy {
 public:
  Taxonomy() = default;
  explicit Taxonomy(size_t n_topics) : n_topics_(n_topics) {}

  size_t n_topics() const { return n_topics_; }
  const std::vector<std::string>& groups() const { return groups_; }
  // Declared categories with their group, in file order.
  const std::vector<std::pair<std::string, std::string>>& categories() const { return categories_; }
  const std::map<size_t, std::string>& topics() const { return topics_; }

  void add_group(const std::string& name) {
    if (name.empty()) throw ValidationError("empty group name");
    if (has_group(name)) throw ValidationError("duplicate group '" + name + "'");
    groups_.push_back(name);
  }

  void add_category(const std::string& name, const std::string& group) {
    if (name.empty()) throw ValidationError("empty category name");
    if (!has_group(group)) throw ValidationError("category '" + name + "' refers to undeclared group '" + group + "'");
    if (const auto* g = group_of(name)) {
      if (*g != group) {
        throw ValidationError("category '" + name + "' mapped to two groups ('" + *g + "' and '" + group + "')");
      }
      return;
    }
    categories_.emplace_back(name, group);
  }

  void map_topic(size_t index, const std::string& category) {
    if (index >= n_topics_) {
      throw ValidationError("topic index " + std::to_string(index) + " out of range (n_topics = " +
                            std::to_string(n_topics_) + ")");
    }
    if (group_of(category) == nullptr) {
      throw ValidationError("topic " + std::to_string(index) + " refers to undeclared category '" + category + "'");
    }
    if (!topics_.emplace(index, category).second) {
      throw ValidationError("duplicate topic index " + std::to_string(index));
    }
  }

  // nullopt for unassigned topics.
  std::optional<TaxonomyEntry> lookup(size_t index) const {
    if (index >= n_topics_) {
      throw ValidationError("topic index " + std::to_string(index) + " out of range (n_topics = " +
                            std::to_string(n_topics_) + ")");
    }
    auto it = topics_.find(index);
    if (it == topics_.end()) return std::nullopt;
    return TaxonomyEntry{it->second, *group_of(it->second)};
  }

  const std::string* group_of(std::string_view category) const {
    for (const auto& [c, g] : categories_) {
      if (c == category) return &g;
    }
    return nullptr;
  }

  bool has_group(std::string_view name) const {
    return std::find(groups_.begin(), groups_.end(), name) != groups_.end();
  }

  std::vector<size_t> unassigned() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < n_topics_; ++i) {
      if (!topics_.count(i)) out.push_back(i);
    }
    return out;
  }

 private:
  size_t n_topics_ = 0;
  std::vector<std::string> groups_;
  std::vector<std::pair<std::string, std::string>> categories_;
  std::map<size_t, std::string> topics_;
};

inline Taxonomy parse_taxonomy(std::string_view content, size_t n_topics, const std::string& source = "<taxonomy>") {
  const auto doc = text::SectionedText::parse(content, source);
  for (const auto& s : doc.sections()) {
    if (s.name != "groups" && s.name != "categories" && s.name != "topics") {
      throw ParseError(source + ": unknown section [" + s.name + "]");
    }
  }
  Taxonomy tax(n_topics);
  auto at = [&](size_t line_no) { return source + ":" + std::to_string(line_no) + ": "; };
  if (const auto* s = doc.find("groups")) {
    for (const auto& l : s->lines) {
      try {
        tax.add_group(l.text);
      } catch (const ValidationError& e) {
        throw ValidationError(at(l.line_no) + e.what());
      }
    }
  }
  if (const auto* s = doc.find("categories")) {
    for (const auto& l : s->lines) {
      std::string cat, group;
      if (!text::split_key_value(l.text, cat, group)) throw ParseError(at(l.line_no) + "expected 'category = group'");
      try {
        tax.add_category(cat, group);
      } catch (const ValidationError& e) {
        throw ValidationError(at(l.line_no) + e.what());
      }
    }
  }
  if (const auto* s = doc.find("topics")) {
    for (const auto& l : s->lines) {
      std::string idx, cat;
      if (!text::split_key_value(l.text, idx, cat)) throw ParseError(at(l.line_no) + "expected 'index = category'");
      size_t index = 0;
      try {
        index = text::parse_number<size_t>(idx, "topic index");
        tax.map_topic(index, cat);
      } catch (const ParseError& e) {
        throw ParseError(at(l.line_no) + e.what());
      } catch (const ValidationError& e) {
        throw ValidationError(at(l.line_no) + e.what());
      }
    }
  }
  return tax;
}

inline Taxonomy load_taxonomy(const std::filesystem::path& path, size_t n_topics) {
  return parse_taxonomy(text::read_file(path), n_topics, path.string());
}

inline std::string serialize_taxonomy(const Taxonomy& tax) {
  std::string out = "[groups]\n";
  for (const auto& g : tax.groups()) out += g + "\n";
  out += "\n[categories]\n";
  for (const auto& [c, g] : tax.categories()) out += c + " = " + g + "\n";
  out += "\n[topics]\n";
  for (const auto& [i, c] : tax.topics()) out += std::to_string(i) + " = " + c + "\n";
  return out;
}

namespace taxonomy_detail {

inline std::vector<NamedCount> sorted_counts(const std::map<std::string, size_t>& counts) {
  std::vector<NamedCount> out;
  for (const auto& [name, n] : counts) out.push_back({name, n});
  std::stable_sort(out.begin(), out.end(), [](const NamedCount& a, const NamedCount& b) {
    return a.count != b.count ? a.count > b.count : a.name < b.name;
  });
  return out;
}

}  // namespace taxonomy_detail

// Distinct categories (among mapped topics) per group; descending count,
// ties alphabetical.
inline std::vector<NamedCount> group_distribution(const Taxonomy& tax) {
  std::set<std::string> used;
  for (const auto& [i, c] : tax.topics()) used.insert(c);
  std::map<std::string, size_t> counts;
  for (const auto& c : used) ++counts[*tax.group_of(c)];
  return taxonomy_detail::sorted_counts(counts);
}

// Mapped topics per category; same ordering.
inline std::vector<NamedCount> category_topic_counts(const Taxonomy& tax) {
  std::map<std::string, size_t> counts;
  for (const auto& [i, c] : tax.topics()) ++counts[c];
  return taxonomy_detail::sorted_counts(counts);
}

// Mapped topics per group.
inline std::vector<NamedCount> group_topic_counts(const Taxonomy& tax) {
  std::map<std::string, size_t> counts;
  for (const auto& [i, c] : tax.topics()) ++counts[*tax.group_of(c)];
  return taxonomy_detail::sorted_counts(counts);
}

struct TaxonomyCardinality {
  size_t categories = 0;
  size_t groups = 0;
  size_t mapped_topics = 0;
  size_t unassigned_topics = 0;
};

// Counts over mapped topics, so declared-but-unused names do not count.
inline TaxonomyCardinality cardinality(const Taxonomy& tax) {
  TaxonomyCardinality c;
  const auto groups = group_distribution(tax);
  c.groups = groups.size();
  for (const auto& g : groups) c.categories += g.count;
  c.mapped_topics = tax.topics().size();
  c.unassigned_topics = tax.n_topics() - c.mapped_topics;
  return c;
}

}  // namespace dsq
