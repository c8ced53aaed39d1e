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

// Small text utilities shared by the file formats: ASCII case handling,
// the sectioned-text format used by lexicon/taxonomy/config files, RFC-4180
// delimited records, and locale-independent number formatting.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "dsq/error.hpp"

namespace dsq::text {

inline bool is_alnum(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z');
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline char to_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = to_lower(c);
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (to_lower(a[i]) != to_lower(b[i])) return false;
  }
  return true;
}

// A maximal run of ASCII alphanumerics, with its byte offsets in the source.
struct TokenSpan {
  size_t begin = 0;
  size_t end = 0;
};

inline std::vector<TokenSpan> alnum_runs(std::string_view s) {
  std::vector<TokenSpan> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !is_alnum(s[i])) ++i;
    if (i == s.size()) break;
    const size_t b = i;
    while (i < s.size() && is_alnum(s[i])) ++i;
    out.push_back({b, i});
  }
  return out;
}

// Lowercased alphanumeric tokens of s.
inline std::vector<std::string> alnum_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& r : alnum_runs(s)) out.push_back(to_lower(s.substr(r.begin, r.end - r.begin)));
  return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// ---------------------------------------------------------------------------
// Numbers

// Shortest representation that round-trips; identical across runs.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  s = trim(s);
  T value{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes via a sibling temp file and rename so readers never see a partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Sectioned text
//
//   # comment
//   [section.name]
//   line
//   key = value
//
// Blank lines and '#' comments are skipped. Lines before the first header
// are an error. Section names may repeat; their lines are concatenated.

struct SectionLine {
  size_t line_no = 0;
  std::string text;
};

struct Section {
  std::string name;
  std::vector<SectionLine> lines;
};

class SectionedText {
 public:
  static SectionedText parse(std::string_view content, std::string_view source = "<input>") {
    SectionedText doc;
    size_t line_no = 0;
    Section* current = nullptr;
    for (const auto& raw : split(content, '\n')) {
      ++line_no;
      std::string_view line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3) {
          throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                           ": malformed section header '" + std::string(line) + "'");
        }
        const std::string name = to_lower(trim(line.substr(1, line.size() - 2)));
        current = &doc.section_or_create(name);
        continue;
      }
      if (current == nullptr) {
        throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                         ": content before first section header");
      }
      current->lines.push_back({line_no, std::string(line)});
    }
    return doc;
  }

  bool has(std::string_view name) const { return find(name) != nullptr; }

  const Section* find(std::string_view name) const {
    for (const auto& s : sections_) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  const std::vector<Section>& sections() const { return sections_; }

 private:
  Section& section_or_create(const std::string& name) {
    for (auto& s : sections_) {
      if (s.name == name) return s;
    }
    sections_.push_back({name, {}});
    return sections_.back();
  }

  std::vector<Section> sections_;
};

// Splits "key = value" on the first '='. Returns false when there is no '='.
inline bool split_key_value(std::string_view line, std::string& key, std::string& value) {
  const size_t pos = line.find('=');
  if (pos == std::string_view::npos) return false;
  key = std::string(trim(line.substr(0, pos)));
  value = std::string(trim(line.substr(pos + 1)));
  return true;
}

// ---------------------------------------------------------------------------
// Delimited records (RFC-4180 quoting: fields may be quoted, "" escapes a
// quote, quoted fields may span lines).

struct CsvRecord {
  size_t line_no = 0;  // line on which the record starts
  std::vector<std::string> fields;
};

inline std::vector<CsvRecord> parse_csv(std::string_view content, std::string_view source = "<input>") {
  std::vector<CsvRecord> records;
  size_t i = 0;
  size_t line_no = 1;
  // Tolerate a UTF-8 byte order mark.
  if (content.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  while (i < content.size()) {
    CsvRecord rec;
    rec.line_no = line_no;
    std::string field;
    bool record_done = false;
    while (!record_done) {
      if (i < content.size() && content[i] == '"') {
        ++i;
        while (true) {
          if (i >= content.size()) {
            throw ParseError(std::string(source) + ":" + std::to_string(rec.line_no) +
                             ": unterminated quoted field");
          }
          const char c = content[i];
          if (c == '"') {
            if (i + 1 < content.size() && content[i + 1] == '"') {
              field.push_back('"');
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') ++line_no;
          field.push_back(c);
          ++i;
        }
        if (i < content.size() && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
          throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                           ": unexpected character after closing quote");
        }
      } else {
        while (i < content.size() && content[i] != ',' && content[i] != '\n' && content[i] != '\r') {
          if (content[i] == '"') {
            throw ParseError(std::string(source) + ":" + std::to_string(line_no) +
                             ": quote inside unquoted field");
          }
          field.push_back(content[i]);
          ++i;
        }
      }
      rec.fields.push_back(std::move(field));
      field.clear();
      if (i >= content.size()) {
        record_done = true;
      } else if (content[i] == ',') {
        ++i;
      } else {
        if (content[i] == '\r') ++i;
        if (i < content.size() && content[i] == '\n') ++i;
        ++line_no;
        record_done = true;
      }
    }
    // A lone empty line is not a record.
    if (!(rec.fields.size() == 1 && rec.fields[0].empty())) records.push_back(std::move(rec));
  }
  return records;
}

inline std::string csv_escape(std::string_view field) {
  const bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
  return out;
}

}  // namespace dsq::text
