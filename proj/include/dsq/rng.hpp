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

#include <cstdint>
#include <string_view>

namespace dsq {

// SplitMix64 (Steele, Lea & Flood). Used both as a stream generator and as a
// keyed hash so that per-document and per-word draws do not depend on
// iteration order. Outputs are fully specified, so results are reproducible
// across platforms and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Deterministic uniform draw in [0, 1) keyed by (seed, a, b).
inline double keyed_uniform(uint64_t seed, uint64_t a, uint64_t b = 0) {
  uint64_t z = SplitMix64::mix(seed ^ 0x6A09E667F3BCC909ULL);
  z = SplitMix64::mix(z ^ a);
  z = SplitMix64::mix(z + 0x9E3779B97F4A7C15ULL * (b + 1));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace dsq
