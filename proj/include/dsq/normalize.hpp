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

// English inflection reducer.
//
// Maps plural nouns to the singular and regular verb inflections (-s, -ed,
// -ing) to the base form. It is a rule cascade in the spirit of Porter's
// step 1, but it aims at dictionary words rather than stems: after removing
// -ed/-ing it undoes consonant doubling or restores a silent final 'e'
// ("constipated" -> "constipate", "taking" -> "take", "stopped" -> "stop").
// Irregular forms and words that merely look inflected ("diabetes",
// "morning") go through a lookup table first.
//
// The reducer is applied until it reaches a fixed point, so it is idempotent.
// Words shorter than three characters and words containing digits are left
// unchanged. Suffix rules never produce a word shorter than three characters;
// a few irregulars do ("went" -> "go").

#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

namespace dsq {

namespace normalize_detail {

inline const std::unordered_map<std::string_view, std::string_view>& irregulars() {
  static const std::unordered_map<std::string_view, std::string_view> table = {
      // Irregular plurals.
      {"children", "child"}, {"men", "man"}, {"women", "woman"}, {"teeth", "tooth"},
      {"feet", "foot"}, {"geese", "goose"}, {"mice", "mouse"}, {"lice", "louse"},
      {"leaves", "leaf"}, {"knives", "knife"}, {"wives", "wife"}, {"lives", "life"},
      {"halves", "half"}, {"calves", "calf"}, {"shelves", "shelf"}, {"loaves", "loaf"},
      {"thieves", "thief"}, {"wolves", "wolf"}, {"selves", "self"},
      {"potatoes", "potato"}, {"tomatoes", "tomato"}, {"heroes", "hero"}, {"echoes", "echo"},
      {"mangoes", "mango"}, {"volcanoes", "volcano"}, {"goes", "go"},
      {"fungi", "fungus"}, {"cacti", "cactus"}, {"nuclei", "nucleus"}, {"stimuli", "stimulus"},
      {"analyses", "analysis"}, {"diagnoses", "diagnosis"}, {"crises", "crisis"},
      {"theses", "thesis"}, {"hypotheses", "hypothesis"}, {"prognoses", "prognosis"},
      {"phenomena", "phenomenon"}, {"criteria", "criterion"}, {"indices", "index"},
      {"appendices", "appendix"}, {"matrices", "matrix"}, {"vertebrae", "vertebra"},
      {"quizzes", "quiz"}, {"gases", "gas"}, {"biases", "bias"}, {"aches", "ache"},
      {"abuses", "abuse"}, {"excuses", "excuse"}, {"refuses", "refuse"}, {"confuses", "confuse"},
      {"fuses", "fuse"}, {"amuses", "amuse"}, {"infuses", "infuse"}, {"diffuses", "diffuse"},
      {"uses", "use"}, {"dice", "die"}, {"oxen", "ox"}, {"calories", "calorie"},
      {"cookies", "cookie"}, {"movies", "movie"}, {"smoothies", "smoothie"}, {"brownies", "brownie"},
      {"veggies", "veggie"}, {"goodies", "goodie"}, {"hoodies", "hoodie"}, {"zombies", "zombie"},
      // Irregular verbs.
      {"took", "take"}, {"taken", "take"}, {"gave", "give"}, {"given", "give"},
      {"went", "go"}, {"gone", "go"}, {"ate", "eat"}, {"eaten", "eat"},
      {"got", "get"}, {"gotten", "get"}, {"made", "make"}, {"said", "say"},
      {"saw", "see"}, {"seen", "see"}, {"came", "come"}, {"became", "become"},
      {"felt", "feel"}, {"kept", "keep"}, {"slept", "sleep"}, {"thought", "think"},
      {"bought", "buy"}, {"brought", "bring"}, {"caught", "catch"}, {"taught", "teach"},
      {"fought", "fight"}, {"sought", "seek"}, {"told", "tell"}, {"sold", "sell"},
      {"found", "find"}, {"held", "hold"}, {"lost", "lose"}, {"meant", "mean"},
      {"met", "meet"}, {"paid", "pay"}, {"ran", "run"}, {"sat", "sit"},
      {"spent", "spend"}, {"stood", "stand"}, {"understood", "understand"}, {"won", "win"},
      {"wrote", "write"}, {"written", "write"}, {"drank", "drink"}, {"drunk", "drink"},
      {"drove", "drive"}, {"driven", "drive"}, {"fell", "fall"}, {"fallen", "fall"},
      {"forgot", "forget"}, {"forgotten", "forget"}, {"grew", "grow"}, {"grown", "grow"},
      {"knew", "know"}, {"known", "know"}, {"began", "begin"}, {"begun", "begin"},
      {"broke", "break"}, {"broken", "break"}, {"chose", "choose"}, {"chosen", "choose"},
      {"froze", "freeze"}, {"frozen", "freeze"}, {"hid", "hide"}, {"hidden", "hide"},
      {"shook", "shake"}, {"shaken", "shake"}, {"spoke", "speak"}, {"spoken", "speak"},
      {"stole", "steal"}, {"stolen", "steal"}, {"swam", "swim"}, {"threw", "throw"},
      {"thrown", "throw"}, {"woke", "wake"}, {"woken", "wake"}, {"wore", "wear"},
      {"worn", "wear"}, {"bled", "bleed"}, {"fed", "feed"}, {"built", "build"},
      {"burnt", "burn"}, {"dealt", "deal"}, {"dreamt", "dream"}, {"heard", "hear"},
      {"laid", "lay"}, {"lent", "lend"}, {"sent", "send"}, {"shot", "shoot"},
      {"slid", "slide"}, {"spun", "spin"}, {"stuck", "stick"}, {"struck", "strike"},
      {"swore", "swear"}, {"sworn", "swear"}, {"swollen", "swell"}, {"tore", "tear"},
      {"torn", "tear"}, {"wept", "weep"}, {"bitten", "bite"}, {"ridden", "ride"},
      {"risen", "rise"}, {"sang", "sing"}, {"sung", "sing"}, {"sank", "sink"},
      {"sunk", "sink"}, {"stank", "stink"}, {"stung", "sting"}, {"swung", "swing"},
      {"hung", "hang"}, {"clung", "cling"}, {"dug", "dig"}, {"flew", "fly"},
      {"flown", "fly"}, {"forgave", "forgive"}, {"forgiven", "forgive"}, {"overcame", "overcome"},
      {"undertook", "undertake"}, {"undertaken", "undertake"}, {"withdrew", "withdraw"},
      {"withdrawn", "withdraw"}, {"drew", "draw"}, {"drawn", "draw"}, {"blew", "blow"},
      {"blown", "blow"}, {"mistook", "mistake"}, {"mistaken", "mistake"},
      // -ed/-ing forms the suffix rules would leave without their final 'e'.
      {"used", "use"}, {"using", "use"}, {"caused", "cause"}, {"causing", "cause"},
      {"refused", "refuse"}, {"refusing", "refuse"}, {"confused", "confuse"}, {"confusing", "confuse"},
      {"abused", "abuse"}, {"abusing", "abuse"}, {"excused", "excuse"},
      {"created", "create"}, {"creating", "create"}, {"agreed", "agree"}, {"freed", "free"},
      {"guaranteed", "guarantee"}, {"ached", "ache"}, {"aching", "ache"},
      {"breathing", "breathe"}, {"breathed", "breathe"}, {"bathing", "bathe"},
      {"changed", "change"}, {"changing", "change"}, {"challenged", "challenge"},
      {"arranged", "arrange"}, {"binging", "binge"}, {"binged", "binge"}, {"plunged", "plunge"},
      {"ignored", "ignore"}, {"ignoring", "ignore"}, {"explored", "explore"}, {"exploring", "explore"},
      {"restored", "restore"}, {"restoring", "restore"}, {"biased", "bias"},
      {"dying", "die"}, {"lying", "lie"}, {"tying", "tie"},
      // Words that only look inflected.
      {"news", "news"}, {"series", "series"}, {"species", "species"}, {"diabetes", "diabetes"},
      {"herpes", "herpes"}, {"measles", "measles"}, {"mumps", "mumps"}, {"rabies", "rabies"},
      {"scabies", "scabies"}, {"rickets", "rickets"}, {"shingles", "shingles"}, {"always", "always"},
      {"perhaps", "perhaps"}, {"sometimes", "sometimes"}, {"whereas", "whereas"}, {"lens", "lens"},
      {"pancreas", "pancreas"}, {"christmas", "christmas"}, {"atlas", "atlas"}, {"alias", "alias"},
      {"canvas", "canvas"}, {"bias", "bias"}, {"towards", "towards"}, {"afterwards", "afterwards"},
      {"hundred", "hundred"}, {"sacred", "sacred"}, {"naked", "naked"}, {"wicked", "wicked"},
      {"kindred", "kindred"}, {"beloved", "beloved"},
      {"morning", "morning"}, {"evening", "evening"}, {"nothing", "nothing"},
      {"something", "something"}, {"anything", "anything"}, {"everything", "everything"},
      {"wedding", "wedding"}, {"pudding", "pudding"}, {"ceiling", "ceiling"}, {"icing", "icing"},
      {"clothing", "clothing"}, {"stuffing", "stuffing"}, {"seasoning", "seasoning"},
      {"herring", "herring"}, {"during", "during"}, {"ginseng", "ginseng"},
  };
  return table;
}

inline bool is_vowel_at(std::string_view w, size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return true;
    case 'y': return i > 0 && !is_vowel_at(w, i - 1);
    default: return false;
  }
}

inline bool has_vowel(std::string_view w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_at(w, i)) return true;
  }
  return false;
}

// Porter's measure: number of vowel-consonant sequences.
inline int measure(std::string_view w) {
  int m = 0;
  bool prev_vowel = false;
  for (size_t i = 0; i < w.size(); ++i) {
    const bool v = is_vowel_at(w, i);
    if (prev_vowel && !v) ++m;
    prev_vowel = v;
  }
  return m;
}

inline bool is_consonant_at(std::string_view w, size_t i) { return !is_vowel_at(w, i); }

inline bool ends_cvc(std::string_view w) {
  const size_t n = w.size();
  if (n < 3) return false;
  const char last = w[n - 1];
  return is_consonant_at(w, n - 3) && is_vowel_at(w, n - 2) && is_consonant_at(w, n - 1) && last != 'w' &&
         last != 'x' && last != 'y';
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

// Consonant + suffix at the end of w, with the consonant directly before suffix.
inline bool consonant_then(std::string_view w, std::string_view suffix) {
  return ends_with(w, suffix) && w.size() > suffix.size() && is_consonant_at(w, w.size() - suffix.size() - 1);
}

// Stem left after removing -ed/-ing: undo doubling or restore a final 'e'.
inline std::string repair_stem(std::string stem) {
  const size_t n = stem.size();
  const char last = stem[n - 1];
  if (n >= 4 && last == stem[n - 2] && is_consonant_at(stem, n - 1) && last != 'l' && last != 's' &&
      last != 'z' && last != 'f') {
    stem.pop_back();
    return stem;
  }
  const int m = measure(stem);
  auto add_e = [&] { return stem + "e"; };

  if (last == 'v' || last == 'u' || last == 'c') return add_e();
  if (last == 'z' && !ends_with(stem, "zz")) return add_e();
  if (ends_with(stem, "dg") || ends_with(stem, "rg")) return add_e();
  if (ends_with(stem, "iz") || ends_with(stem, "bl") || ends_with(stem, "uir")) return add_e();
  if (last == 'l' && n >= 2) {
    switch (stem[n - 2]) {
      case 'b': case 'c': case 'd': case 'f': case 'g': case 'k': case 'p': case 't': case 'z':
        return add_e();
      default: break;
    }
  }
  if (last == 's' && !ends_with(stem, "ss") && !ends_with(stem, "us")) return add_e();
  if (ends_with(stem, "aus")) return add_e();
  if (consonant_then(stem, "at")) return add_e();
  if (m >= 2) {
    static constexpr std::string_view kLongSuffixes[] = {"ag", "ar", "ur", "in", "ot", "ut", "id",
                                                         "od", "ud", "ad", "ap", "ib", "ok", "ik",
                                                         "ul", "ir", "um"};
    for (auto suf : kLongSuffixes) {
      if (consonant_then(stem, suf)) return add_e();
    }
    if (ends_with(stem, "let")) return add_e();
  }
  if (m == 1 && ends_cvc(stem)) return add_e();
  return stem;
}

inline std::string reduce_plural(std::string_view w) {
  const size_t n = w.size();
  auto cut = [&](size_t k) { return std::string(w.substr(0, n - k)); };
  if (ends_with(w, "ies")) return n > 4 ? cut(3) + "y" : cut(1);
  if (ends_with(w, "sses") || ends_with(w, "shes") || ends_with(w, "xes") || ends_with(w, "zzes")) return cut(2);
  if (ends_with(w, "ches")) {
    if (ends_with(w, "aches") && !ends_with(w, "eaches") && !ends_with(w, "oaches")) return cut(1);
    return cut(2);
  }
  if (ends_with(w, "uses") && !ends_with(w, "auses")) return cut(2);
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is") || ends_with(w, "ous")) return std::string(w);
  if (ends_with(w, "s") && n - 1 >= 3) return cut(1);
  return std::string(w);
}

inline std::string reduce_once(std::string_view w) {
  if (w.size() < 3) return std::string(w);
  for (char c : w) {
    if (c >= '0' && c <= '9') return std::string(w);
  }
  if (auto it = irregulars().find(w); it != irregulars().end()) return std::string(it->second);

  if (ends_with(w, "'s")) return std::string(w.substr(0, w.size() - 2));

  if (ends_with(w, "ied") && w.size() >= 5) return std::string(w.substr(0, w.size() - 3)) + "y";
  if (ends_with(w, "ied")) return std::string(w.substr(0, w.size() - 1));

  if (ends_with(w, "ing") && w.size() >= 5) {
    std::string stem(w.substr(0, w.size() - 3));
    if (has_vowel(stem)) {
      std::string out = repair_stem(stem);
      if (out.size() >= 3) return out;
    }
    return std::string(w);
  }
  if (ends_with(w, "ed") && w.size() >= 5 && !ends_with(w, "eed")) {
    std::string stem(w.substr(0, w.size() - 2));
    if (has_vowel(stem)) {
      std::string out = repair_stem(stem);
      if (out.size() >= 3) return out;
    }
    return std::string(w);
  }
  if (ends_with(w, "s")) return reduce_plural(w);
  return std::string(w);
}

}  // namespace normalize_detail

// Canonical form of a lowercase alphanumeric word.
inline std::string normalize(std::string_view word) {
  std::string cur(word);
  for (int i = 0; i < 16; ++i) {
    std::string next = normalize_detail::reduce_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace dsq
