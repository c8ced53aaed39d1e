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

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsq/error.hpp"
#include "dsq/text.hpp"

namespace dsq {

struct Question {
  std::string id;
  std::string title;
  std::string body;
  std::string subcategory;

  // Text used by every downstream stage: title, one space, body.
  std::string text() const { return title + " " + body; }

  bool operator==(const Question&) const = default;
};

enum class CorpusFormat { kDelimited, kRecordPerLine };

inline CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "delimited" || name == "csv") return CorpusFormat::kDelimited;
  if (name == "record-per-line" || name == "jsonl") return CorpusFormat::kRecordPerLine;
  throw ValidationError("unknown corpus format '" + std::string(name) +
                        "' (expected delimited or record-per-line)");
}

// Ordered, id-unique collection of questions. Immutable once built.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string source) : source_(std::move(source)) {}

  // Throws ValidationError on a duplicate id or an empty id/title.
  void add(Question q) {
    if (text::trim(q.id).empty()) throw ValidationError("question with empty id");
    for (char c : q.id) {
      if (static_cast<unsigned char>(c) < 0x20) throw ValidationError("question id contains a control character");
    }
    if (text::trim(q.title).empty()) throw ValidationError("question '" + q.id + "' has empty title");
    if (!ids_.insert(q.id).second) throw ValidationError("duplicate question id '" + q.id + "'");
    questions_.push_back(std::move(q));
  }

  const std::vector<Question>& questions() const { return questions_; }
  const std::string& source() const { return source_; }
  size_t size() const { return questions_.size(); }
  bool empty() const { return questions_.empty(); }
  bool contains(const std::string& id) const { return ids_.count(id) > 0; }

  auto begin() const { return questions_.begin(); }
  auto end() const { return questions_.end(); }

  bool operator==(const Corpus& other) const { return questions_ == other.questions_; }

 private:
  std::string source_;
  std::vector<Question> questions_;
  std::unordered_set<std::string> ids_;
};

namespace detail {

inline void add_record(Corpus& corpus, Question q, std::string_view source, size_t line_no) {
  try {
    corpus.add(std::move(q));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
  }
}

}  // namespace detail

// Delimited text with header row id,subcategory,title,body (any column order;
// body column optional).
inline Corpus parse_delimited_corpus(std::string_view content, std::string source = "<input>") {
  Corpus corpus(source);
  const auto records = text::parse_csv(content, source);
  if (records.empty()) return corpus;

  const auto& header = records.front().fields;
  int col_id = -1, col_sub = -1, col_title = -1, col_body = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    const std::string h = text::to_lower(text::trim(header[i]));
    if (h == "id") col_id = static_cast<int>(i);
    else if (h == "subcategory") col_sub = static_cast<int>(i);
    else if (h == "title") col_title = static_cast<int>(i);
    else if (h == "body") col_body = static_cast<int>(i);
  }
  if (col_id < 0 || col_title < 0 || col_sub < 0) {
    throw ParseError(source + ":1: header must contain id, subcategory, title (and optionally body)");
  }

  for (size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    auto field = [&](int col) -> std::string {
      return col >= 0 && static_cast<size_t>(col) < rec.fields.size() ? rec.fields[col] : std::string();
    };
    if (rec.fields.size() > header.size()) {
      throw ParseError(source + ":" + std::to_string(rec.line_no) + ": record has " +
                       std::to_string(rec.fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    }
    if (static_cast<size_t>(std::max({col_id, col_title, col_sub})) >= rec.fields.size()) {
      throw ParseError(source + ":" + std::to_string(rec.line_no) + ": record is missing id, title or subcategory");
    }
    detail::add_record(corpus, Question{field(col_id), field(col_title), field(col_body), field(col_sub)},
                       source, rec.line_no);
  }
  return corpus;
}

// One flat JSON object per line with keys id, subcategory, title, body.
inline Corpus parse_record_corpus(std::string_view content, std::string source = "<input>") {
  Corpus corpus(source);
  size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    if (text::trim(raw).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) throw ParseError(source + ":" + std::to_string(line_no) + ": record is not an object");
    auto get = [&](const char* key, bool required) -> std::string {
      auto it = obj.find(key);
      if (it == obj.end() || it->is_null()) {
        if (required) {
          throw ParseError(source + ":" + std::to_string(line_no) + ": record is missing '" + key + "'");
        }
        return {};
      }
      if (!it->is_string()) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": field '" + key + "' is not a string");
      }
      return it->get<std::string>();
    };
    Question q{get("id", true), get("title", true), get("body", false), get("subcategory", true)};
    detail::add_record(corpus, std::move(q), source, line_no);
  }
  return corpus;
}

inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  if (!std::filesystem::exists(path)) throw Error("corpus file not found: " + path.string());
  const std::string content = text::read_file(path);
  return format == CorpusFormat::kDelimited ? parse_delimited_corpus(content, path.string())
                                            : parse_record_corpus(content, path.string());
}

inline std::string serialize_record_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& q : corpus) {
    nlohmann::ordered_json obj;
    obj["id"] = q.id;
    obj["subcategory"] = q.subcategory;
    obj["title"] = q.title;
    obj["body"] = q.body;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

inline std::string serialize_delimited_corpus(const Corpus& corpus) {
  std::string out = text::csv_row({"id", "subcategory", "title", "body"});
  for (const auto& q : corpus) out += text::csv_row({q.id, q.subcategory, q.title, q.body});
  return out;
}

// Case-insensitive exact match on the subcategory label; order preserved.
inline Corpus filter_subcategory(const Corpus& corpus, std::string_view name) {
  Corpus out(corpus.source());
  for (const auto& q : corpus) {
    if (text::iequals(text::trim(q.subcategory), text::trim(name))) out.add(q);
  }
  return out;
}

}  // namespace dsq
