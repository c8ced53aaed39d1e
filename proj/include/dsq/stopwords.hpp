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
#include <set>
#include <string>
#include <string_view>

#include "dsq/error.hpp"
#include "dsq/text.hpp"

namespace dsq {

using StopwordSet = std::set<std::string, std::less<>>;

// Default English stopword list; data/stopwords.txt carries the same words.
inline const StopwordSet& default_stopwords() {
  static const StopwordSet words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
      "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
      "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
      "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
      "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
      "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for",
      "with", "about", "against", "between", "into", "through", "during", "before", "after",
      "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over", "under",
      "again", "further", "then", "once", "here", "there", "when", "where", "why", "how", "all",
      "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
      "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don",
      "should", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn",
      "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn",
      "weren", "won", "wouldn", "would", "could", "also", "im", "ive", "id", "youre", "youve",
      "theyre", "hes", "shes", "thats", "dont", "cant", "wont", "didnt", "doesnt", "isnt", "arent",
      "wasnt", "werent", "havent", "hasnt", "hadnt", "shouldnt", "wouldnt", "couldnt", "lets",
      "etc", "ok", "hi", "hello", "thanks", "thank", "please", "anyone", "someone", "anybody",
      "somebody",
  };
  return words;
}

// One word per line; '#' starts a comment line. Words are lowercased.
inline StopwordSet parse_stopwords(std::string_view content) {
  StopwordSet out;
  for (const auto& raw : text::split(content, '\n')) {
    auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    out.insert(text::to_lower(line));
  }
  return out;
}

inline StopwordSet load_stopwords(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("stopword file not found: " + path.string());
  return parse_stopwords(text::read_file(path));
}

}  // namespace dsq
