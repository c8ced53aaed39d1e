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
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsq/corpus.hpp"
#include "dsq/error.hpp"
#include "dsq/lexicon.hpp"
#include "dsq/normalize.hpp"
#include "dsq/stopwords.hpp"
#include "dsq/text.hpp"

namespace dsq {

// Deletes every [begin, end) span from s. Spans may be given in any order
// and may overlap; they must lie within s.
inline std::string mask_spans(std::string_view s, const std::vector<std::pair<size_t, size_t>>& spans) {
  std::vector<bool> drop(s.size(), false);
  for (const auto& [b, e] : spans) {
    if (b > e || e > s.size()) {
      throw ValidationError("span [" + std::to_string(b) + ", " + std::to_string(e) +
                            ") out of range for text of length " + std::to_string(s.size()));
    }
    std::fill(drop.begin() + static_cast<long>(b), drop.begin() + static_cast<long>(e), true);
  }
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    if (!drop[i]) out.push_back(s[i]);
  }
  return out;
}

inline std::string mask_ingredients(std::string_view s, const std::vector<IngredientMatch>& matches) {
  std::vector<std::pair<size_t, size_t>> spans;
  spans.reserve(matches.size());
  for (const auto& m : matches) spans.emplace_back(m.begin, m.end);
  return mask_spans(s, spans);
}

// Removes http(s):// and www. links up to the next whitespace.
inline std::string strip_hyperlinks(std::string_view s) {
  auto starts_link = [&](size_t i) {
    auto rest = s.substr(i);
    auto prefix = [&](std::string_view p) {
      return rest.size() >= p.size() && text::iequals(rest.substr(0, p.size()), p);
    };
    if (prefix("http://") || prefix("https://")) return true;
    // "www." only at the start of a word.
    return prefix("www.") && (i == 0 || !text::is_alnum(s[i - 1]));
  };
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (starts_link(i)) {
      while (i < s.size() && !text::is_space(s[i])) ++i;
      continue;
    }
    out.push_back(s[i++]);
  }
  return out;
}

using Normalizer = std::function<std::string(std::string_view)>;

struct TokenizeOptions {
  size_t min_word_len = 3;
  Normalizer normalizer = [](std::string_view w) { return normalize(w); };
  // Normalized token sequences of retained ingredient names. Any contiguous
  // occurrence is removed, which also catches inflected mentions ("irons")
  // that character-level masking cannot see.
  std::vector<std::vector<std::string>> ingredient_sequences;
};

// hyperlink strip -> lowercase -> split on non-alphanumerics -> stopword
// filter -> length filter -> normalize. Stopword and length filters are
// re-applied to the normalized form.
inline std::vector<std::string> tokenize(std::string_view s, const StopwordSet& stopwords,
                                         const TokenizeOptions& opts = {}) {
  const std::string raw_text = strip_hyperlinks(s);
  const auto raw = text::alnum_tokens(raw_text);
  std::vector<std::string> norm;
  norm.reserve(raw.size());
  for (const auto& t : raw) norm.push_back(opts.normalizer(t));

  std::vector<bool> removed(raw.size(), false);
  if (!opts.ingredient_sequences.empty()) {
    for (size_t i = 0; i < norm.size(); ++i) {
      for (const auto& seq : opts.ingredient_sequences) {
        if (seq.empty() || i + seq.size() > norm.size()) continue;
        if (std::equal(seq.begin(), seq.end(), norm.begin() + static_cast<long>(i))) {
          for (size_t k = i; k < i + seq.size(); ++k) removed[k] = true;
        }
      }
    }
  }

  std::vector<std::string> out;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (removed[i]) continue;
    if (stopwords.count(raw[i]) || raw[i].size() < opts.min_word_len) continue;
    if (stopwords.count(norm[i]) || norm[i].size() < opts.min_word_len) continue;
    out.push_back(norm[i]);
  }
  return out;
}

// Normalized token sequences for ingredient names, longest first.
inline std::vector<std::vector<std::string>> ingredient_sequences(const std::vector<std::string>& names,
                                                                  const Normalizer& normalizer) {
  std::vector<std::vector<std::string>> out;
  for (const auto& name : names) {
    std::vector<std::string> seq;
    for (const auto& t : text::alnum_tokens(name)) seq.push_back(normalizer(t));
    if (!seq.empty()) out.push_back(std::move(seq));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  return out;
}

struct TokenStream {
  std::string question_id;
  std::vector<std::string> tokens;

  bool operator==(const TokenStream&) const = default;
};

// Token streams for every question of the cleaned matched corpus, in its
// order, with retained ingredient mentions masked out.
inline std::vector<TokenStream> build_token_streams(const Corpus& corpus, const MatchedCorpus& matched,
                                                    const std::vector<std::string>& retained_names,
                                                    const StopwordSet& stopwords, TokenizeOptions opts = {}) {
  if (opts.ingredient_sequences.empty()) {
    opts.ingredient_sequences = ingredient_sequences(retained_names, opts.normalizer);
  }
  std::unordered_map<std::string, const Question*> by_id;
  for (const auto& q : corpus) by_id.emplace(q.id, &q);

  std::vector<TokenStream> streams;
  streams.reserve(matched.entries.size());
  for (const auto& entry : matched.entries) {
    auto it = by_id.find(entry.question_id);
    if (it == by_id.end()) {
      throw ValidationError("matched question '" + entry.question_id + "' is not in the corpus");
    }
    const std::string masked = mask_ingredients(it->second->text(), entry.matches);
    streams.push_back({entry.question_id, tokenize(masked, stopwords, opts)});
  }
  return streams;
}

// ---------------------------------------------------------------------------
// Vocabulary

struct VocabEntry {
  std::string word;
  int64_t count = 0;     // total occurrences in the corpus
  int64_t doc_freq = 0;  // number of documents containing the word

  bool operator==(const VocabEntry&) const = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;

  explicit Vocabulary(std::vector<VocabEntry> entries) : entries_(std::move(entries)) {
    for (size_t i = 0; i < entries_.size(); ++i) {
      if (!index_.emplace(entries_[i].word, static_cast<int>(i)).second) {
        throw ValidationError("duplicate vocabulary word '" + entries_[i].word + "'");
      }
    }
  }

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::string& word(size_t i) const { return entries_.at(i).word; }
  const VocabEntry& entry(size_t i) const { return entries_.at(i); }
  const std::vector<VocabEntry>& entries() const { return entries_; }

  // -1 when absent.
  int index_of(std::string_view w) const {
    auto it = index_.find(std::string(w));
    return it == index_.end() ? -1 : it->second;
  }

  bool operator==(const Vocabulary& other) const { return entries_ == other.entries_; }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, int> index_;
};

// Largest admissible document frequency for a corpus of n_docs documents.
inline int64_t max_doc_count(double max_doc_frac, size_t n_docs) {
  return static_cast<int64_t>(std::floor(max_doc_frac * static_cast<double>(n_docs) + 1e-9));
}

// Keeps words with corpus count >= min_count and document frequency
// <= floor(max_doc_frac * n_docs). Ordered by descending count, then
// alphabetically.
inline Vocabulary build_vocabulary(const std::vector<TokenStream>& streams, int64_t min_count = 5,
                                   double max_doc_frac = 0.85) {
  if (min_count < 1) throw ValidationError("min_count must be >= 1");
  if (!(max_doc_frac > 0.0 && max_doc_frac <= 1.0)) throw ValidationError("max_doc_frac must be in (0, 1]");

  std::map<std::string, VocabEntry> stats;
  for (const auto& s : streams) {
    std::vector<std::string> seen;
    for (const auto& t : s.tokens) {
      auto& e = stats[t];
      e.word = t;
      ++e.count;
      seen.push_back(t);
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (const auto& t : seen) ++stats[t].doc_freq;
  }

  const int64_t df_limit = max_doc_count(max_doc_frac, streams.size());
  std::vector<VocabEntry> kept;
  for (auto& [w, e] : stats) {
    if (e.count >= min_count && e.doc_freq <= df_limit) kept.push_back(e);
  }
  if (kept.empty()) throw ValidationError("vocabulary is empty after frequency filtering");
  std::stable_sort(kept.begin(), kept.end(), [](const VocabEntry& a, const VocabEntry& b) {
    return a.count != b.count ? a.count > b.count : a.word < b.word;
  });
  return Vocabulary(std::move(kept));
}

inline std::vector<TokenStream> filter_streams(const std::vector<TokenStream>& streams, const Vocabulary& vocab) {
  std::vector<TokenStream> out;
  out.reserve(streams.size());
  for (const auto& s : streams) {
    TokenStream f{s.question_id, {}};
    for (const auto& t : s.tokens) {
      if (vocab.index_of(t) >= 0) f.tokens.push_back(t);
    }
    out.push_back(std::move(f));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Document-term matrix

// Sparse binary presence matrix. Rows hold sorted, unique word indices and
// are never empty.
struct DocTermMatrix {
  size_t n_words = 0;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<uint32_t>> rows;
  std::vector<std::string> dropped_ids;  // documents that had no vocabulary words

  size_t n_docs() const { return rows.size(); }

  size_t nnz() const {
    size_t n = 0;
    for (const auto& r : rows) n += r.size();
    return n;
  }

  double density() const {
    return n_docs() == 0 || n_words == 0 ? 0.0
                                         : static_cast<double>(nnz()) / (static_cast<double>(n_docs()) * n_words);
  }

  void validate() const {
    if (doc_ids.size() != rows.size()) throw ValidationError("matrix doc ids and rows differ in length");
    for (size_t d = 0; d < rows.size(); ++d) {
      if (rows[d].empty()) throw ValidationError("matrix row for '" + doc_ids[d] + "' is empty");
      for (size_t k = 0; k < rows[d].size(); ++k) {
        if (rows[d][k] >= n_words) throw ValidationError("word index out of range in row '" + doc_ids[d] + "'");
        if (k > 0 && rows[d][k] <= rows[d][k - 1]) {
          throw ValidationError("row '" + doc_ids[d] + "' is not sorted and unique");
        }
      }
    }
  }

  bool operator==(const DocTermMatrix&) const = default;
};

inline DocTermMatrix vectorize(const std::vector<TokenStream>& streams, const Vocabulary& vocab) {
  DocTermMatrix m;
  m.n_words = vocab.size();
  for (const auto& s : streams) {
    std::vector<uint32_t> row;
    for (const auto& t : s.tokens) {
      const int idx = vocab.index_of(t);
      if (idx < 0) throw ValidationError("token '" + t + "' of '" + s.question_id + "' is not in the vocabulary");
      row.push_back(static_cast<uint32_t>(idx));
    }
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (row.empty()) {
      m.dropped_ids.push_back(s.question_id);
      continue;
    }
    m.doc_ids.push_back(s.question_id);
    m.rows.push_back(std::move(row));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Summary and serialization

struct PreprocessSummary {
  size_t documents_in = 0;
  size_t documents_out = 0;
  int64_t total_tokens = 0;
  size_t unique_words = 0;
  std::vector<std::string> dropped_ids;
};

inline PreprocessSummary summarize(const std::vector<TokenStream>& filtered, const Vocabulary& vocab,
                                   const DocTermMatrix& matrix) {
  PreprocessSummary s;
  s.documents_in = filtered.size();
  s.documents_out = matrix.n_docs();
  for (const auto& f : filtered) s.total_tokens += static_cast<int64_t>(f.tokens.size());
  s.unique_words = vocab.size();
  s.dropped_ids = matrix.dropped_ids;
  return s;
}

inline std::string format_summary(const PreprocessSummary& s) {
  std::string out;
  out += "documents_in = " + std::to_string(s.documents_in) + "\n";
  out += "documents_out = " + std::to_string(s.documents_out) + "\n";
  out += "total_tokens = " + std::to_string(s.total_tokens) + "\n";
  out += "unique_words = " + std::to_string(s.unique_words) + "\n";
  out += "dropped_empty = " + std::to_string(s.dropped_ids.size()) + "\n";
  std::string ids;
  for (const auto& id : s.dropped_ids) ids += (ids.empty() ? "" : ",") + id;
  out += "dropped_ids = " + ids + "\n";
  return out;
}

// word<TAB>count<TAB>doc_freq, one line per word in index order.
inline std::string serialize_vocabulary(const Vocabulary& v) {
  std::string out = "word\tcount\tdoc_freq\n";
  for (const auto& e : v.entries()) {
    out += e.word + "\t" + std::to_string(e.count) + "\t" + std::to_string(e.doc_freq) + "\n";
  }
  return out;
}

inline Vocabulary parse_vocabulary(std::string_view content, std::string_view source = "<input>") {
  std::vector<VocabEntry> entries;
  size_t line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    if (line_no == 1 || text::trim(raw).empty()) continue;
    const auto f = text::split(raw, '\t');
    if (f.size() != 3) throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": expected 3 columns");
    entries.push_back({f[0], text::parse_number<int64_t>(f[1], "count"), text::parse_number<int64_t>(f[2], "doc_freq")});
  }
  return Vocabulary(std::move(entries));
}

// Header line {"format":"dsq-matrix","version":1,"n_words":N}, then one
// {"id":...,"w":[...]} object per row, then one {"dropped":[...]} line.
inline std::string serialize_matrix(const DocTermMatrix& m) {
  nlohmann::ordered_json head;
  head["format"] = "dsq-matrix";
  head["version"] = 1;
  head["n_words"] = m.n_words;
  std::string out = head.dump() + "\n";
  for (size_t d = 0; d < m.rows.size(); ++d) {
    nlohmann::ordered_json row;
    row["id"] = m.doc_ids[d];
    row["w"] = m.rows[d];
    out += row.dump() + "\n";
  }
  nlohmann::ordered_json tail;
  tail["dropped"] = m.dropped_ids;
  out += tail.dump() + "\n";
  return out;
}

inline DocTermMatrix parse_matrix(std::string_view content, std::string_view source = "<input>") {
  DocTermMatrix m;
  const auto lines = text::split(content, '\n');
  size_t line_no = 0;
  bool have_header = false;
  try {
    for (const auto& raw : lines) {
      ++line_no;
      if (text::trim(raw).empty()) continue;
      const auto obj = nlohmann::json::parse(raw);
      if (!have_header) {
        if (obj.value("format", "") != "dsq-matrix") throw ParseError("not a dsq-matrix file");
        if (obj.at("version").get<int>() != 1) throw ParseError("unsupported matrix version");
        m.n_words = obj.at("n_words").get<size_t>();
        have_header = true;
      } else if (obj.contains("dropped")) {
        m.dropped_ids = obj.at("dropped").get<std::vector<std::string>>();
      } else {
        m.doc_ids.push_back(obj.at("id").get<std::string>());
        m.rows.push_back(obj.at("w").get<std::vector<uint32_t>>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw ParseError(std::string(source) + ": empty matrix file");
  m.validate();
  return m;
}

}  // namespace dsq
