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

#include <set>
#include <string>
#include <vector>

#include "dsq/preprocess.hpp"
#include "fixtures.hpp"

namespace dsq {
namespace {

TokenizeOptions identity_opts() {
  TokenizeOptions o;
  o.normalizer = [](std::string_view w) { return std::string(w); };
  return o;
}

TEST(Tokenize, LengthBoundary) {
  const auto toks = tokenize("ab abc xy xyz", {}, identity_opts());
  EXPECT_EQ(toks, (std::vector<std::string>{"abc", "xyz"}));
}

TEST(Tokenize, LowercaseStopwordsSpecials) {
  const StopwordSet stop = {"the", "you"};
  const auto toks = tokenize("The HERB, you know?! (really) #tag", stop, identity_opts());
  EXPECT_EQ(toks, (std::vector<std::string>{"herb", "know", "really", "tag"}));
}

TEST(Tokenize, Hyperlinks) {
  EXPECT_EQ(strip_hyperlinks("see http://a.com/x?y=1 and WWW.b.org/faq. ok"), "see  and  ok");
  const auto toks = tokenize("see https://example.com/sleep-aids now", {}, identity_opts());
  EXPECT_EQ(toks, (std::vector<std::string>{"see", "now"}));
}

TEST(Tokenize, NormalizedFormFilteredAgain) {
  // "went" normalizes to "go", which is too short.
  EXPECT_TRUE(tokenize("went", {}).empty());
  EXPECT_EQ(tokenize("taking capsules", {}), (std::vector<std::string>{"take", "capsule"}));
}

TEST(Masking, Spans) {
  EXPECT_EQ(mask_spans("abcdef", {{1, 3}, {2, 4}}), "aef");
  EXPECT_THROW(mask_spans("abc", {{2, 5}}), ValidationError);
}

TEST(Masking, InflectedIngredientRemoved) {
  TokenizeOptions o;
  o.ingredient_sequences = ingredient_sequences({"Fish Oil", "Iron"}, o.normalizer);
  const auto toks = tokenize("fish oils and irons help", {"and"}, o);
  EXPECT_EQ(toks, (std::vector<std::string>{"help"}));
}

std::vector<TokenStream> streams_of(const std::vector<std::vector<std::string>>& docs) {
  std::vector<TokenStream> out;
  for (size_t d = 0; d < docs.size(); ++d) out.push_back({"d" + std::to_string(d), docs[d]});
  return out;
}

TEST(Vocabulary, CountBoundary) {
  std::vector<std::vector<std::string>> d(20, std::vector<std::string>{"filler"});
  for (int k = 0; k < 4; ++k) d[k].push_back("four");
  for (int k = 0; k < 5; ++k) d[10 + k].push_back("five");
  const auto v = build_vocabulary(streams_of(d), 5, 1.0);
  EXPECT_EQ(v.index_of("four"), -1);
  ASSERT_GE(v.index_of("five"), 0);
  EXPECT_EQ(v.entry(static_cast<size_t>(v.index_of("five"))).count, 5);
}

TEST(Vocabulary, CountIsOccurrencesNotDocuments) {
  std::vector<std::vector<std::string>> d(10, std::vector<std::string>{"filler"});
  d[0] = {"rep", "rep", "rep", "rep", "rep"};
  const auto v = build_vocabulary(streams_of(d), 5, 1.0);
  ASSERT_GE(v.index_of("rep"), 0);
  EXPECT_EQ(v.entry(static_cast<size_t>(v.index_of("rep"))).doc_freq, 1);
}

TEST(Vocabulary, DocumentFrequencyBoundary) {
  // 100 documents: "keep" in 85, "drop" in 86.
  std::vector<std::vector<std::string>> d(100, std::vector<std::string>{"filler"});
  for (int k = 0; k < 85; ++k) d[k].push_back("keep");
  for (int k = 0; k < 86; ++k) d[99 - k].push_back("drop");
  const auto v = build_vocabulary(streams_of(d), 5, 0.85);
  EXPECT_GE(v.index_of("keep"), 0);
  EXPECT_EQ(v.index_of("drop"), -1);
  EXPECT_EQ(v.index_of("filler"), -1);
  EXPECT_EQ(max_doc_count(0.85, 100), 85);
  EXPECT_EQ(max_doc_count(0.85, 20), 17);
}

TEST(Vocabulary, OrderAndErrors) {
  std::vector<std::vector<std::string>> d(10);
  for (int k = 0; k < 10; ++k) d[k] = {"bbb", "aaa"};
  for (int k = 0; k < 6; ++k) d[k].push_back("ccc");
  const auto v = build_vocabulary(streams_of(d), 5, 1.0);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_EQ(v.word(0), "aaa");
  EXPECT_EQ(v.word(1), "bbb");
  EXPECT_EQ(v.word(2), "ccc");
  EXPECT_THROW(build_vocabulary(streams_of(d), 0, 1.0), ValidationError);
  EXPECT_THROW(build_vocabulary(streams_of(d), 5, 0.0), ValidationError);
  EXPECT_THROW(build_vocabulary(streams_of(d), 50, 1.0), ValidationError);
}

TEST(Matrix, EmptyRowsDroppedAndAccounted) {
  std::vector<std::vector<std::string>> d(12, std::vector<std::string>{"common"});
  for (int k = 0; k < 6; ++k) d[k].push_back("word");
  const auto streams = streams_of(d);
  const auto v = build_vocabulary(streams, 5, 0.9);
  const auto filtered = filter_streams(streams, v);
  const auto m = vectorize(filtered, v);
  EXPECT_EQ(m.n_docs(), 6u);
  EXPECT_EQ(m.dropped_ids.size(), 6u);
  EXPECT_EQ(m.n_docs() + m.dropped_ids.size(), streams.size());
  EXPECT_NO_THROW(m.validate());
  const auto s = summarize(filtered, v, m);
  EXPECT_EQ(s.documents_in, s.documents_out + s.dropped_ids.size());
}

TEST(Matrix, SerializeRoundTrip) {
  DocTermMatrix m;
  m.n_words = 4;
  m.doc_ids = {"a", "b"};
  m.rows = {{0, 3}, {1}};
  m.dropped_ids = {"c"};
  const auto back = parse_matrix(serialize_matrix(m));
  EXPECT_EQ(back.rows, m.rows);
  EXPECT_EQ(back.doc_ids, m.doc_ids);
  EXPECT_EQ(back.dropped_ids, m.dropped_ids);
  EXPECT_EQ(back.n_words, 4u);
  EXPECT_THROW(parse_matrix("{\"format\":\"x\"}\n"), ParseError);
  EXPECT_THROW(parse_matrix(""), ParseError);
}

TEST(Matrix, ValidateCatchesBadRows) {
  DocTermMatrix m;
  m.n_words = 2;
  m.doc_ids = {"a"};
  m.rows = {{1, 0}};
  EXPECT_THROW(m.validate(), ValidationError);
  m.rows = {{2}};
  EXPECT_THROW(m.validate(), ValidationError);
  m.rows = {{}};
  EXPECT_THROW(m.validate(), ValidationError);
}

TEST(VocabularyFile, RoundTrip) {
  const Vocabulary v({{"aaa", 9, 4}, {"bbb", 5, 5}});
  EXPECT_EQ(parse_vocabulary(serialize_vocabulary(v)), v);
}

struct MiniPrep {
  Corpus corpus;
  CleanedLexicon cleaned;
  std::vector<TokenStream> streams;
  Vocabulary vocab;
  DocTermMatrix matrix;
};

const MiniPrep& mini() {
  static const MiniPrep p = [] {
    MiniPrep p;
    p.corpus = filter_subcategory(
        load_corpus(testing::data_dir() / "mini" / "questions.csv", CorpusFormat::kDelimited), "Alternative Medicine");
    const auto lex = load_lexicon(testing::data_dir() / "mini" / "lexicon.txt");
    p.cleaned = clean_lexicon(match_ingredients(p.corpus, lex), lex);
    p.streams = build_token_streams(p.corpus, p.cleaned.matched, p.cleaned.lexicon.preferred_names(),
                                    default_stopwords());
    p.vocab = build_vocabulary(p.streams);
    p.matrix = vectorize(filter_streams(p.streams, p.vocab), p.vocab);
    return p;
  }();
  return p;
}

TEST(MiniCorpus, SparseMatrix) {
  const auto& p = mini();
  EXPECT_LT(p.matrix.density(), 0.05);
  EXPECT_GT(p.matrix.n_docs(), 300u);
  EXPECT_NO_THROW(p.matrix.validate());
}

TEST(MiniCorpus, NoRetainedIngredientTokensSurvive) {
  const auto& p = mini();
  TokenizeOptions o;
  const auto seqs = ingredient_sequences(p.cleaned.lexicon.preferred_names(), o.normalizer);
  for (const auto& s : p.streams) {
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      for (const auto& seq : seqs) {
        if (i + seq.size() > s.tokens.size()) continue;
        EXPECT_FALSE(std::equal(seq.begin(), seq.end(), s.tokens.begin() + static_cast<long>(i)))
            << s.question_id << " still mentions " << seq.front();
      }
    }
  }
}

TEST(MiniCorpus, VocabularyThresholdsHold) {
  const auto& p = mini();
  const auto limit = max_doc_count(0.85, p.streams.size());
  for (const auto& e : p.vocab.entries()) {
    EXPECT_GE(e.count, 5) << e.word;
    EXPECT_LE(e.doc_freq, limit) << e.word;
    EXPECT_GE(e.word.size(), 3u) << e.word;
    EXPECT_FALSE(default_stopwords().count(e.word)) << e.word;
  }
}

TEST(MiniCorpus, TokenAccounting) {
  const auto& p = mini();
  const auto filtered = filter_streams(p.streams, p.vocab);
  int64_t in_vocab = 0;
  for (const auto& e : p.vocab.entries()) in_vocab += e.count;
  int64_t total = 0;
  for (const auto& f : filtered) total += static_cast<int64_t>(f.tokens.size());
  EXPECT_EQ(total, in_vocab);
  EXPECT_EQ(p.matrix.n_docs() + p.matrix.dropped_ids.size(), p.streams.size());
}

}  // namespace
}  // namespace dsq
