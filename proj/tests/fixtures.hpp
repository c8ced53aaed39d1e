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

// Shared test fixtures.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dsq/preprocess.hpp"
#include "dsq/rng.hpp"

namespace dsq::testing {

inline std::filesystem::path source_dir() { return DSQ_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "data"; }
inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

// Planted-topic corpus: n_blocks disjoint blocks of block_size words;
// docs_per_block documents per block. A document of block b has each word of
// b present with probability p_in and every other word with probability
// p_out. Word w belongs to block w / block_size.
struct PlantedCorpus {
  DocTermMatrix matrix;
  std::vector<int> doc_block;  // planted block of each row
  std::vector<std::string> vocabulary;
  int block_size = 0;
};

inline PlantedCorpus make_planted(int n_blocks = 3, int block_size = 10, int docs_per_block = 300,
                                  double p_in = 0.8, double p_out = 0.02, uint64_t seed = 7) {
  PlantedCorpus pc;
  pc.block_size = block_size;
  const int n_words = n_blocks * block_size;
  pc.matrix.n_words = static_cast<size_t>(n_words);
  for (int w = 0; w < n_words; ++w) {
    pc.vocabulary.push_back("b" + std::to_string(w / block_size) + "w" + std::to_string(w % block_size));
  }
  SplitMix64 rng(seed);
  int doc = 0;
  // Interleave blocks so document order carries no block structure.
  for (int k = 0; k < docs_per_block; ++k) {
    for (int b = 0; b < n_blocks; ++b) {
      std::vector<uint32_t> row;
      for (int w = 0; w < n_words; ++w) {
        const double p = (w / block_size == b) ? p_in : p_out;
        if (rng.uniform() < p) row.push_back(static_cast<uint32_t>(w));
      }
      const std::string id = "d" + std::to_string(doc++);
      if (row.empty()) {
        pc.matrix.dropped_ids.push_back(id);
        continue;
      }
      pc.matrix.doc_ids.push_back(id);
      pc.matrix.rows.push_back(std::move(row));
      pc.doc_block.push_back(b);
    }
  }
  return pc;
}

}  // namespace dsq::testing
