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

// Stage orchestration for the command-line tool.
//
// Configuration layers, later wins: built-in defaults, the config file,
// DSQ_<SECTION>_<KEY> environment variables, command-line overrides.
// Relative paths from the config file resolve against its directory; those
// from the environment or command line against the working directory.
//
// Every stage reads the artifacts of earlier stages from the output
// directory and writes its own there atomically.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsq/corex.hpp"
#include "dsq/corpus.hpp"
#include "dsq/error.hpp"
#include "dsq/lexicon.hpp"
#include "dsq/model_io.hpp"
#include "dsq/preprocess.hpp"
#include "dsq/reports.hpp"
#include "dsq/stopwords.hpp"
#include "dsq/taxonomy.hpp"
#include "dsq/text.hpp"

namespace dsq {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

struct PipelineConfig {
  fs::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kDelimited;
  std::string subcategory;  // empty = keep all

  fs::path lexicon_path;
  int min_questions = 5;

  fs::path stopwords_path;  // empty = built-in list
  size_t min_word_len = 3;
  int64_t min_count = 5;
  double max_doc_frac = 0.85;

  CorexConfig corex;

  fs::path taxonomy_path;

  fs::path judgments_path;
  size_t top_k_words = 15;
  size_t top_k_docs = 10;
  double assign_threshold = 0.5;
  double min_frac = 0.10;
  ReportFormat format = ReportFormat::kCsv;
  std::vector<size_t> report_topics;  // empty = every topic with an assigned question

  fs::path output_dir = "out";

  std::vector<int> sweep_sizes;
};

enum class KeyKind { kPath, kString, kInt, kDouble, kList };

struct ConfigKey {
  const char* name;
  const char* fallback;
  KeyKind kind;
};

inline const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"corpus.path", "", KeyKind::kPath},
      {"corpus.format", "delimited", KeyKind::kString},
      {"corpus.subcategory", "", KeyKind::kString},
      {"lexicon.path", "", KeyKind::kPath},
      {"lexicon.min_questions", "5", KeyKind::kInt},
      {"preprocess.stopwords", "", KeyKind::kPath},
      {"preprocess.min_word_len", "3", KeyKind::kInt},
      {"preprocess.min_count", "5", KeyKind::kInt},
      {"preprocess.max_doc_frac", "0.85", KeyKind::kDouble},
      {"corex.n_topics", "200", KeyKind::kInt},
      {"corex.seed", "42", KeyKind::kInt},
      {"corex.max_iter", "200", KeyKind::kInt},
      {"corex.tol", "1e-5", KeyKind::kDouble},
      {"corex.smoothing", "0.001", KeyKind::kDouble},
      {"corex.restarts", "3", KeyKind::kInt},
      {"corex.threads", "1", KeyKind::kInt},
      {"taxonomy.path", "", KeyKind::kPath},
      {"reports.judgments", "", KeyKind::kPath},
      {"reports.top_k_words", "15", KeyKind::kInt},
      {"reports.top_k_docs", "10", KeyKind::kInt},
      {"reports.assign_threshold", "0.5", KeyKind::kDouble},
      {"reports.min_frac", "0.10", KeyKind::kDouble},
      {"reports.format", "csv", KeyKind::kString},
      {"reports.topics", "", KeyKind::kList},
      {"output.dir", "out", KeyKind::kPath},
      {"sweep.sizes", "", KeyKind::kList},
  };
  return keys;
}

// DSQ_COREX_N_TOPICS for corex.n_topics.
inline std::string env_name(std::string_view key) {
  std::string out = "DSQ_";
  for (char c : key) {
    if (c == '.') out.push_back('_');
    else out.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
  }
  return out;
}

class ConfigStore {
 public:
  using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

  ConfigStore() {
    for (const auto& k : config_keys()) values_[k.name] = {k.fallback, {}};
  }

  static const ConfigKey& key_info(std::string_view key) {
    for (const auto& k : config_keys()) {
      if (key == k.name) return k;
    }
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }

  void set(std::string_view key, std::string value, const fs::path& base_dir = {}) {
    key_info(key);
    values_[std::string(key)] = {std::move(value), base_dir};
  }

  // "section.key=value"
  void set_assignment(std::string_view assignment) {
    std::string key, value;
    if (!text::split_key_value(assignment, key, value)) {
      throw ValidationError("expected key=value, got '" + std::string(assignment) + "'");
    }
    set(text::to_lower(key), value);
  }

  void load_file(const fs::path& path) {
    if (!fs::exists(path)) throw ValidationError("config file not found: " + path.string());
    const auto doc = text::SectionedText::parse(text::read_file(path), path.string());
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    for (const auto& sec : doc.sections()) {
      for (const auto& line : sec.lines) {
        std::string key, value;
        const std::string at = path.string() + ":" + std::to_string(line.line_no) + ": ";
        if (!text::split_key_value(line.text, key, value)) throw ParseError(at + "expected 'key = value'");
        try {
          set(sec.name + "." + text::to_lower(key), value, base);
        } catch (const ValidationError& e) {
          throw ValidationError(at + e.what());
        }
      }
    }
  }

  void apply_env(const EnvLookup& lookup = default_env) {
    for (const auto& k : config_keys()) {
      if (auto v = lookup(env_name(k.name))) set(k.name, *v);
    }
  }

  static std::optional<std::string> default_env(const std::string& name) {
    const char* v = std::getenv(name.c_str());
    if (v == nullptr) return std::nullopt;
    return std::string(v);
  }

  const std::string& raw(std::string_view key) const {
    key_info(key);
    return values_.at(std::string(key)).value;
  }

  fs::path path(std::string_view key) const {
    const auto& e = values_.at(std::string(key));
    if (e.value.empty()) return {};
    fs::path p(e.value);
    if (p.is_relative() && !e.base_dir.empty()) p = e.base_dir / p;
    return p.lexically_normal();
  }

  PipelineConfig resolve() const {
    PipelineConfig c;
    c.corpus_path = path("corpus.path");
    c.corpus_format = parse_corpus_format(raw("corpus.format"));
    c.subcategory = raw("corpus.subcategory");
    c.lexicon_path = path("lexicon.path");
    c.min_questions = integer<int>("lexicon.min_questions", 0);
    c.stopwords_path = path("preprocess.stopwords");
    c.min_word_len = integer<size_t>("preprocess.min_word_len", 1);
    c.min_count = integer<int64_t>("preprocess.min_count", 1);
    c.max_doc_frac = real("preprocess.max_doc_frac");
    if (!(c.max_doc_frac > 0.0 && c.max_doc_frac <= 1.0)) bad("preprocess.max_doc_frac", "must be in (0, 1]");
    c.corex.n_topics = integer<int>("corex.n_topics", 1);
    c.corex.seed = integer<uint64_t>("corex.seed", 0);
    c.corex.max_iter = integer<int>("corex.max_iter", 1);
    c.corex.tol = real("corex.tol");
    c.corex.smoothing = real("corex.smoothing");
    c.corex.restarts = integer<int>("corex.restarts", 1);
    c.corex.threads = integer<int>("corex.threads", 1);
    try {
      c.corex.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
    c.taxonomy_path = path("taxonomy.path");
    c.judgments_path = path("reports.judgments");
    c.top_k_words = integer<size_t>("reports.top_k_words", 1);
    c.top_k_docs = integer<size_t>("reports.top_k_docs", 1);
    c.assign_threshold = real("reports.assign_threshold");
    if (!(c.assign_threshold > 0.0 && c.assign_threshold < 1.0)) bad("reports.assign_threshold", "must be in (0, 1)");
    c.min_frac = real("reports.min_frac");
    if (!(c.min_frac >= 0.0 && c.min_frac <= 1.0)) bad("reports.min_frac", "must be in [0, 1]");
    c.format = parse_report_format(raw("reports.format"));
    for (size_t t : list<size_t>("reports.topics", 0)) c.report_topics.push_back(t);
    c.output_dir = path("output.dir");
    if (c.output_dir.empty()) bad("output.dir", "must not be empty");
    c.sweep_sizes = list<int>("sweep.sizes", 1);
    return c;
  }

 private:
  struct Entry {
    std::string value;
    fs::path base_dir;
  };

  [[noreturn]] static void bad(std::string_view key, std::string_view why) {
    throw ValidationError("config " + std::string(key) + ": " + std::string(why));
  }

  template <typename T>
  T integer(std::string_view key, T min) const {
    T v{};
    try {
      v = text::parse_number<T>(raw(key), key);
    } catch (const ParseError& e) {
      bad(key, e.what());
    }
    if (v < min) bad(key, "must be >= " + std::to_string(min));
    return v;
  }

  double real(std::string_view key) const {
    try {
      return text::parse_number<double>(raw(key), key);
    } catch (const ParseError& e) {
      bad(key, e.what());
    }
  }

  template <typename T>
  std::vector<T> list(std::string_view key, T min) const {
    std::vector<T> out;
    const auto& v = raw(key);
    if (text::trim(v).empty()) return out;
    for (const auto& item : text::split(v, ',')) {
      T x{};
      try {
        x = text::parse_number<T>(item, key);
      } catch (const ParseError& e) {
        bad(key, e.what());
      }
      if (x < min) bad(key, "values must be >= " + std::to_string(min));
      out.push_back(x);
    }
    return out;
  }

  std::map<std::string, Entry, std::less<>> values_;
};

// ---------------------------------------------------------------------------
// Artifacts

namespace artifact {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kMatched = "matched.jsonl";
inline constexpr const char* kLexicon = "lexicon_retained.txt";
inline constexpr const char* kDropped = "lexicon_dropped.csv";
inline constexpr const char* kVocabulary = "vocabulary.tsv";
inline constexpr const char* kMatrix = "matrix.jsonl";
inline constexpr const char* kSummary = "preprocess_summary.txt";
inline constexpr const char* kModel = "model.txt";
inline constexpr const char* kSweep = "sweep.csv";
inline constexpr const char* kTopics = "report_topics";
inline constexpr const char* kIngredients = "report_ingredients";
inline constexpr const char* kGroups = "report_groups";
inline constexpr const char* kCategories = "report_categories";
inline constexpr const char* kAccuracy = "report_accuracy";
}  // namespace artifact

struct StageResult {
  std::string stage;
  std::vector<fs::path> written;
  std::string summary;  // one line
};

namespace pipeline_detail {

// Reads an artifact produced by `producer`.
inline std::string read_artifact(const PipelineConfig& cfg, const char* name, const char* producer) {
  const fs::path p = cfg.output_dir / name;
  if (!fs::exists(p)) {
    throw MissingArtifactError(producer, "missing artifact " + p.string() + " (run '" + producer + "' first)");
  }
  return text::read_file(p);
}

inline fs::path require_input(const fs::path& p, std::string_view key) {
  if (p.empty()) throw ValidationError("config " + std::string(key) + " is not set");
  if (!fs::exists(p)) throw ValidationError("config " + std::string(key) + ": file not found: " + p.string());
  return p;
}

inline fs::path write(StageResult& r, const PipelineConfig& cfg, const std::string& name, std::string_view content) {
  const fs::path p = cfg.output_dir / name;
  text::write_file_atomic(p, content);
  r.written.push_back(p);
  return p;
}

inline Corpus read_corpus(const PipelineConfig& cfg) {
  return parse_record_corpus(read_artifact(cfg, artifact::kCorpus, "ingest"),
                             (cfg.output_dir / artifact::kCorpus).string());
}

inline MatchedCorpus read_matched(const PipelineConfig& cfg) {
  return parse_matched(read_artifact(cfg, artifact::kMatched, "match"),
                       (cfg.output_dir / artifact::kMatched).string());
}

inline TopicModel read_model(const PipelineConfig& cfg) {
  return parse_model(read_artifact(cfg, artifact::kModel, "train"), (cfg.output_dir / artifact::kModel).string());
}

inline DocTermMatrix read_matrix(const PipelineConfig& cfg) {
  return parse_matrix(read_artifact(cfg, artifact::kMatrix, "preprocess"),
                      (cfg.output_dir / artifact::kMatrix).string());
}

inline std::string report_name(const char* base, ReportFormat f) { return std::string(base) + extension(f); }

}  // namespace pipeline_detail

// ---------------------------------------------------------------------------
// Stages

inline StageResult run_ingest(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"ingest", {}, {}};
  const Corpus all = load_corpus(require_input(cfg.corpus_path, "corpus.path"), cfg.corpus_format);
  const Corpus kept = cfg.subcategory.empty() ? all : filter_subcategory(all, cfg.subcategory);
  if (kept.empty()) throw ValidationError("no questions left after the subcategory filter");
  const auto p = write(r, cfg, artifact::kCorpus, serialize_record_corpus(kept));
  r.summary = "ingest: " + std::to_string(kept.size()) + " of " + std::to_string(all.size()) + " questions -> " +
              p.string();
  return r;
}

inline StageResult run_match(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"match", {}, {}};
  const Corpus corpus = read_corpus(cfg);
  const auto lexicon = load_lexicon(require_input(cfg.lexicon_path, "lexicon.path"), cfg.min_questions);
  const auto cleaned = clean_lexicon(match_ingredients(corpus, lexicon), lexicon);
  if (cleaned.matched.entries.empty()) throw ValidationError("no question mentions a retained ingredient");
  write(r, cfg, artifact::kMatched, serialize_matched(cleaned.matched));
  write(r, cfg, artifact::kLexicon, serialize_lexicon(cleaned.lexicon));
  std::string dropped = text::csv_row({"ingredient", "reason", "questions"});
  for (const auto& d : cleaned.dropped) dropped += text::csv_row({d.name, to_string(d.reason), std::to_string(d.questions)});
  write(r, cfg, artifact::kDropped, dropped);
  r.summary = "match: " + std::to_string(cleaned.lexicon.preferred_names().size()) + " ingredients retained, " +
              std::to_string(cleaned.dropped.size()) + " dropped, " + std::to_string(cleaned.matched.entries.size()) +
              " questions kept";
  return r;
}

inline StageResult run_preprocess(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"preprocess", {}, {}};
  const Corpus corpus = read_corpus(cfg);
  const MatchedCorpus matched = read_matched(cfg);
  const auto retained = parse_lexicon(read_artifact(cfg, artifact::kLexicon, "match"),
                                      (cfg.output_dir / artifact::kLexicon).string());
  const StopwordSet stopwords =
      cfg.stopwords_path.empty() ? default_stopwords()
                                 : load_stopwords(require_input(cfg.stopwords_path, "preprocess.stopwords"));
  TokenizeOptions opts;
  opts.min_word_len = cfg.min_word_len;
  const auto streams = build_token_streams(corpus, matched, retained.preferred_names(), stopwords, opts);
  const Vocabulary vocab = build_vocabulary(streams, cfg.min_count, cfg.max_doc_frac);
  const auto filtered = filter_streams(streams, vocab);
  const DocTermMatrix matrix = vectorize(filtered, vocab);
  const auto summary = summarize(filtered, vocab, matrix);
  write(r, cfg, artifact::kVocabulary, serialize_vocabulary(vocab));
  write(r, cfg, artifact::kMatrix, serialize_matrix(matrix));
  write(r, cfg, artifact::kSummary, format_summary(summary));
  r.summary = "preprocess: " + std::to_string(matrix.n_docs()) + " documents, " + std::to_string(vocab.size()) +
              " words, density " + text::format_fixed(matrix.density() * 100.0, 2) + "%";
  return r;
}

inline StageResult run_train(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"train", {}, {}};
  const DocTermMatrix matrix = read_matrix(cfg);
  const Vocabulary vocab = parse_vocabulary(read_artifact(cfg, artifact::kVocabulary, "preprocess"),
                                            (cfg.output_dir / artifact::kVocabulary).string());
  std::vector<std::string> words;
  for (const auto& e : vocab.entries()) words.push_back(e.word);
  const TopicModel model = train(matrix, cfg.corex, words);
  write(r, cfg, artifact::kModel, serialize_model(model));
  size_t degenerate = 0;
  for (size_t j = 0; j < model.n_topics; ++j) degenerate += model.degenerate(j) ? 1 : 0;
  r.summary = "train: " + std::to_string(model.n_topics) + " topics, total tc " +
              text::format_fixed(model.total_tc(), 6) + ", " + std::to_string(model.iterations) + " iterations (" +
              to_string(model.stop_reason) + "), " + std::to_string(degenerate) + " degenerate";
  return r;
}

inline std::string render_sweep(const std::vector<SweepEntry>& entries) {
  std::string out = text::csv_row({"n_topics", "seed", "total_tc", "mean_tc", "median_tc", "min_tc", "max_tc",
                                   "degenerate", "iterations", "stop_reason"});
  for (const auto& e : entries) {
    out += text::csv_row({std::to_string(e.n_topics), std::to_string(e.seed), text::format_fixed(e.total_tc, 6),
                          text::format_fixed(e.mean_tc, 6), text::format_fixed(e.median_tc, 6),
                          text::format_fixed(e.min_tc, 6), text::format_fixed(e.max_tc, 6),
                          std::to_string(e.degenerate), std::to_string(e.iterations), to_string(e.stop_reason)});
  }
  return out;
}

inline StageResult run_sweep(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"sweep", {}, {}};
  if (cfg.sweep_sizes.empty()) throw ValidationError("config sweep.sizes is not set");
  const DocTermMatrix matrix = read_matrix(cfg);
  const auto entries = sweep(matrix, cfg.sweep_sizes, cfg.corex);
  write(r, cfg, artifact::kSweep, render_sweep(entries));
  r.summary = "sweep: " + std::to_string(entries.size()) + " model sizes";
  return r;
}

inline StageResult run_report(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"report", {}, {}};
  const TopicModel model = read_model(cfg);
  const MatchedCorpus matched = read_matched(cfg);
  const Taxonomy taxonomy = cfg.taxonomy_path.empty()
                                ? Taxonomy(model.n_topics)
                                : load_taxonomy(require_input(cfg.taxonomy_path, "taxonomy.path"), model.n_topics);
  const auto assignments = assign_documents(model, cfg.assign_threshold);
  const auto topics = cfg.report_topics.empty() ? topics_with_assignments(model, assignments) : cfg.report_topics;
  TopicReportOptions opts;
  opts.top_k_words = cfg.top_k_words;
  opts.top_k_docs = cfg.top_k_docs;
  opts.min_frac = cfg.min_frac;
  const auto rows = build_topic_report(model, taxonomy, matched, assignments, topics, opts);
  write(r, cfg, report_name(artifact::kTopics, cfg.format), render_topic_report(rows, cfg.format));
  write(r, cfg, report_name(artifact::kIngredients, cfg.format), render_ingredient_report(rows, cfg.format));
  if (!cfg.taxonomy_path.empty()) {
    write(r, cfg, report_name(artifact::kGroups, cfg.format),
          render_counts(group_distribution(taxonomy), "group", "categories", cfg.format));
    write(r, cfg, report_name(artifact::kCategories, cfg.format),
          render_counts(category_topic_counts(taxonomy), "category", "topics", cfg.format));
  }
  r.summary = "report: " + std::to_string(rows.size()) + " topics";
  return r;
}

inline StageResult run_evaluate(const PipelineConfig& cfg) {
  using namespace pipeline_detail;
  StageResult r{"evaluate", {}, {}};
  const TopicModel model = read_model(cfg);
  const auto judgments = load_judgments(require_input(cfg.judgments_path, "reports.judgments"));
  std::optional<Taxonomy> taxonomy;
  if (!cfg.taxonomy_path.empty()) {
    taxonomy = load_taxonomy(require_input(cfg.taxonomy_path, "taxonomy.path"), model.n_topics);
  }
  const auto records = accuracy_report(judgments, model, cfg.top_k_docs);
  write(r, cfg, report_name(artifact::kAccuracy, cfg.format),
        render_accuracy_report(records, taxonomy ? &*taxonomy : nullptr, cfg.format));
  r.summary = "evaluate: " + std::to_string(records.size()) + " judged topics";
  return r;
}

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest", "match",  "preprocess", "train",
                                                 "sweep",  "report", "evaluate"};
  return names;
}

inline StageResult run_stage(std::string_view name, const PipelineConfig& cfg) {
  if (name == "ingest") return run_ingest(cfg);
  if (name == "match") return run_match(cfg);
  if (name == "preprocess") return run_preprocess(cfg);
  if (name == "train") return run_train(cfg);
  if (name == "sweep") return run_sweep(cfg);
  if (name == "report") return run_report(cfg);
  if (name == "evaluate") return run_evaluate(cfg);
  throw ValidationError("unknown stage '" + std::string(name) + "'");
}

// All stages in order; sweep only with sweep.sizes, evaluate only with
// reports.judgments.
inline std::vector<StageResult> run_pipeline(const PipelineConfig& cfg,
                                             const std::function<void(const StageResult&)>& on_stage = {}) {
  std::vector<StageResult> out;
  for (const auto& name : stage_names()) {
    if (name == "sweep" && cfg.sweep_sizes.empty()) continue;
    if (name == "evaluate" && cfg.judgments_path.empty()) continue;
    out.push_back(run_stage(name, cfg));
    if (on_stage) on_stage(out.back());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exit codes

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitMissingArtifact = 2;
inline constexpr int kExitValidation = 3;

struct Failure {
  int code = kExitError;
  std::string line;  // single line, no trailing newline
};

// Maps an exception to its exit code and a one-line reason:
//   error kind=<kind> [stage=<stage>] message=<text>
inline Failure describe_failure(const std::exception& e) {
  std::string msg = e.what();
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  if (const auto* m = dynamic_cast<const MissingArtifactError*>(&e)) {
    return {kExitMissingArtifact, "error kind=missing_artifact stage=" + m->stage() + " message=" + msg};
  }
  if (dynamic_cast<const ValidationError*>(&e)) return {kExitValidation, "error kind=validation message=" + msg};
  if (dynamic_cast<const ParseError*>(&e)) return {kExitValidation, "error kind=parse message=" + msg};
  if (dynamic_cast<const NumericError*>(&e)) return {kExitError, "error kind=numeric message=" + msg};
  return {kExitError, "error kind=runtime message=" + msg};
}

}  // namespace dsq
