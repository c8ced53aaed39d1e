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

// Flat-text model file.
//
//   dsq-corex-model <version>
//   key value            (counts, training outcome, config)
//   [vocabulary]         one word per line
//   [documents]          one question id per line
//   [topic_tc] [objective_trace]      one number per line
//   [alpha] [word_topic_mi] [doc_topic_prob]   one matrix row per line
//
// Numbers are written in shortest round-trip form, so save/load is exact.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dsq/corex.hpp"
#include "dsq/error.hpp"
#include "dsq/text.hpp"

namespace dsq {

inline constexpr std::string_view kModelMagic = "dsq-corex-model";
inline constexpr int kModelVersion = 1;

namespace model_io_detail {

inline void put_matrix(std::string& out, std::string_view name, const std::vector<double>& m, size_t rows,
                       size_t cols) {
  out += "[";
  out += name;
  out += "]\n";
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      if (c) out.push_back(' ');
      out += text::format_double(m[r * cols + c]);
    }
    out.push_back('\n');
  }
}

class Reader {
 public:
  Reader(std::string_view content, std::string source) : lines_(text::split(content, '\n')), source_(std::move(source)) {
    if (!lines_.empty() && lines_.back().empty()) lines_.pop_back();
    for (auto& l : lines_) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  size_t line_no() const { return pos_ + 1; }

  const std::string& next(std::string_view what) {
    if (done()) fail("unexpected end of file, expected " + std::string(what));
    return lines_[pos_++];
  }

  void expect_section(std::string_view name) {
    const std::string want = "[" + std::string(name) + "]";
    if (next(want) != want) {
      --pos_;
      fail("expected " + want);
    }
  }

  std::vector<double> numbers(size_t rows, size_t cols, std::string_view what) {
    std::vector<double> out;
    out.reserve(rows * cols);
    for (size_t r = 0; r < rows; ++r) {
      const auto& line = next(what);
      const auto fields = text::split(line, ' ');
      if (fields.size() != cols) {
        fail(std::string(what) + " row has " + std::to_string(fields.size()) + " values, expected " +
             std::to_string(cols));
      }
      for (const auto& f : fields) out.push_back(number(f, what));
    }
    return out;
  }

  double number(std::string_view s, std::string_view what) {
    try {
      return text::parse_number<double>(s, what);
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_ + ":" + std::to_string(pos_ == 0 ? 1 : pos_) + ": " + msg);
  }

 private:
  std::vector<std::string> lines_;
  std::string source_;
  size_t pos_ = 0;
};

}  // namespace model_io_detail

inline std::string serialize_model(const TopicModel& m) {
  using model_io_detail::put_matrix;
  const auto& c = m.config;
  std::string out;
  out += std::string(kModelMagic) + " " + std::to_string(kModelVersion) + "\n";
  out += "n_words " + std::to_string(m.n_words) + "\n";
  out += "n_topics " + std::to_string(m.n_topics) + "\n";
  out += "n_docs " + std::to_string(m.n_docs) + "\n";
  out += "n_trace " + std::to_string(m.objective_trace.size()) + "\n";
  out += "iterations " + std::to_string(m.iterations) + "\n";
  out += "stop_reason " + std::string(to_string(m.stop_reason)) + "\n";
  out += "config.max_iter " + std::to_string(c.max_iter) + "\n";
  out += "config.tol " + text::format_double(c.tol) + "\n";
  out += "config.seed " + std::to_string(c.seed) + "\n";
  out += "config.smoothing " + text::format_double(c.smoothing) + "\n";
  out += "config.damping " + text::format_double(c.damping) + "\n";
  out += "config.sharpness " + text::format_double(c.sharpness) + "\n";
  out += "config.sharpness_start " + text::format_double(c.sharpness_start) + "\n";
  out += "config.sharpness_growth " + text::format_double(c.sharpness_growth) + "\n";
  out += "config.restarts " + std::to_string(c.restarts) + "\n";
  out += "[vocabulary]\n";
  for (const auto& w : m.vocabulary) out += w + "\n";
  out += "[documents]\n";
  for (const auto& id : m.doc_ids) out += id + "\n";
  put_matrix(out, "topic_tc", m.topic_tc, m.n_topics, 1);
  put_matrix(out, "objective_trace", m.objective_trace, m.objective_trace.size(), 1);
  put_matrix(out, "alpha", m.alpha, m.n_words, m.n_topics);
  put_matrix(out, "word_topic_mi", m.word_topic_mi, m.n_words, m.n_topics);
  put_matrix(out, "doc_topic_prob", m.doc_topic_prob, m.n_docs, m.n_topics);
  return out;
}

inline TopicModel parse_model(std::string_view content, std::string source = "<model>") {
  model_io_detail::Reader in(content, source);
  {
    const auto& head = in.next("header");
    const auto parts = text::split(head, ' ');
    if (parts.size() != 2 || parts[0] != kModelMagic) in.fail("not a model file");
    const int version = text::parse_number<int>(parts[1], "model version");
    if (version != kModelVersion) {
      in.fail("unsupported model version " + std::to_string(version) + " (expected " +
              std::to_string(kModelVersion) + ")");
    }
  }
  std::map<std::string, std::string, std::less<>> kv;
  const char* keys[] = {"n_words",          "n_topics",          "n_docs",          "n_trace",
                        "iterations",       "stop_reason",       "config.max_iter", "config.tol",
                        "config.seed",      "config.smoothing",  "config.damping",  "config.sharpness",
                        "config.sharpness_start", "config.sharpness_growth", "config.restarts"};
  for (const char* key : keys) {
    const auto& line = in.next(key);
    const size_t sp = line.find(' ');
    if (sp == std::string::npos || line.substr(0, sp) != key) in.fail(std::string("expected '") + key + "'");
    kv[key] = line.substr(sp + 1);
  }
  auto count = [&](const char* k) {
    try {
      return text::parse_number<size_t>(kv[k], k);
    } catch (const ParseError& e) {
      in.fail(e.what());
    }
  };

  TopicModel m;
  try {
    m.n_words = count("n_words");
    m.n_topics = count("n_topics");
    m.n_docs = count("n_docs");
    m.iterations = text::parse_number<int>(kv["iterations"], "iterations");
    m.stop_reason = parse_stop_reason(kv["stop_reason"]);
    auto& c = m.config;
    c.n_topics = static_cast<int>(m.n_topics);
    c.max_iter = text::parse_number<int>(kv["config.max_iter"], "config.max_iter");
    c.tol = text::parse_number<double>(kv["config.tol"], "config.tol");
    c.seed = text::parse_number<uint64_t>(kv["config.seed"], "config.seed");
    c.smoothing = text::parse_number<double>(kv["config.smoothing"], "config.smoothing");
    c.damping = text::parse_number<double>(kv["config.damping"], "config.damping");
    c.sharpness = text::parse_number<double>(kv["config.sharpness"], "config.sharpness");
    c.sharpness_start = text::parse_number<double>(kv["config.sharpness_start"], "config.sharpness_start");
    c.sharpness_growth = text::parse_number<double>(kv["config.sharpness_growth"], "config.sharpness_growth");
    c.restarts = text::parse_number<int>(kv["config.restarts"], "config.restarts");
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
  const size_t n_trace = count("n_trace");

  in.expect_section("vocabulary");
  for (size_t i = 0; i < m.n_words; ++i) m.vocabulary.push_back(in.next("vocabulary word"));
  in.expect_section("documents");
  for (size_t d = 0; d < m.n_docs; ++d) m.doc_ids.push_back(in.next("document id"));
  in.expect_section("topic_tc");
  m.topic_tc = in.numbers(m.n_topics, 1, "topic_tc");
  in.expect_section("objective_trace");
  m.objective_trace = in.numbers(n_trace, 1, "objective_trace");
  in.expect_section("alpha");
  m.alpha = in.numbers(m.n_words, m.n_topics, "alpha");
  in.expect_section("word_topic_mi");
  m.word_topic_mi = in.numbers(m.n_words, m.n_topics, "word_topic_mi");
  in.expect_section("doc_topic_prob");
  m.doc_topic_prob = in.numbers(m.n_docs, m.n_topics, "doc_topic_prob");
  if (!in.done()) in.fail("trailing content after doc_topic_prob");
  return m;
}

inline void save_model(const TopicModel& model, const std::filesystem::path& path) {
  text::write_file_atomic(path, serialize_model(model));
}

inline TopicModel load_model(const std::filesystem::path& path) {
  return parse_model(text::read_file(path), path.string());
}

}  // namespace dsq
