#pragma once

// A small seeded PCFG used for end-to-end checks. Eight phrase labels and
// twenty PoS tags; several rules are unary so that both intermediate chains
// (S -> VP) and leaf chains (NP -> NNP, ADVP -> RB, ...) occur.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeseq/tree.hpp"

namespace treeseq::toy {

struct Rule {
  double weight;
  std::vector<std::string_view> rhs;
};

struct Grammar {
  std::vector<std::pair<std::string_view, std::vector<Rule>>> rules;
  std::vector<std::pair<std::string_view, std::vector<std::string_view>>> lexicon;

  const std::vector<Rule>* expansions(std::string_view sym) const {
    for (const auto& [lhs, rs] : rules)
      if (lhs == sym) return &rs;
    return nullptr;
  }
  const std::vector<std::string_view>& words(std::string_view pos) const {
    for (const auto& [p, ws] : lexicon)
      if (p == pos) return ws;
    static const std::vector<std::string_view> none;
    return none;
  }
};

inline const Grammar& grammar() {
  static const Grammar g{
      {
          {"S", {{0.45, {"NP", "VP", "."}},
                 {0.20, {"NP", "VP"}},
                 {0.10, {"PP", ",", "NP", "VP", "."}},
                 {0.10, {"VP"}},
                 {0.10, {"ADVP", "NP", "VP", "."}},
                 {0.05, {"NP", "VP", "CC", "NP", "VP"}}}},
          {"NP", {{0.28, {"DT", "NN"}},
                  {0.14, {"DT", "JJ", "NN"}},
                  {0.12, {"NNP"}},
                  {0.10, {"PRP"}},
                  {0.10, {"NP", "PP"}},
                  {0.08, {"DT", "NNS"}},
                  {0.06, {"QP", "NNS"}},
                  {0.06, {"NNS"}},
                  {0.06, {"NNP", "POS", "NN"}}}},
          {"VP", {{0.28, {"VBD", "NP"}},
                  {0.14, {"VBZ", "NP", "PP"}},
                  {0.10, {"VBD"}},
                  {0.12, {"MD", "VB", "NP"}},
                  {0.10, {"VBZ", "ADJP"}},
                  {0.08, {"VBD", "SBAR"}},
                  {0.10, {"VBD", "NP", "ADVP"}},
                  {0.08, {"VBZ", "TO", "VB"}}}},
          {"PP", {{1.0, {"IN", "NP"}}}},
          {"ADJP", {{0.5, {"JJ"}}, {0.3, {"RB", "JJ"}}, {0.2, {"JJR", "PP"}}}},
          {"ADVP", {{0.7, {"RB"}}, {0.3, {"RB", "RB"}}}},
          {"SBAR", {{0.6, {"IN", "S"}}, {0.4, {"WDT", "VP"}}}},
          {"QP", {{0.4, {"CD"}}, {0.6, {"RB", "CD"}}}},
      },
      {
          {"DT", {"the", "a", "this", "every", "some", "that"}},
          {"NN", {"dog", "cat", "house", "tree", "river", "car", "book",
                  "garden", "teacher", "window", "city", "song", "letter",
                  "market", "bridge", "lamp", "road", "storm", "coin", "boat"}},
          {"NNS", {"dogs", "cats", "houses", "trees", "rivers", "cars",
                   "books", "songs", "letters", "coins", "boats", "lamps"}},
          {"NNP", {"Alice", "Bob", "Paris", "Madrid", "Carol", "Dave",
                   "London", "Eve", "Oslo", "Rome"}},
          {"JJ", {"red", "old", "big", "quiet", "happy", "small", "green",
                  "bright", "cold", "strange"}},
          {"JJR", {"bigger", "older", "smaller", "colder"}},
          {"RB", {"quickly", "very", "often", "never", "almost", "slowly",
                  "rarely", "nearly"}},
          {"VB", {"see", "find", "build", "carry", "read", "sell"}},
          {"VBD", {"saw", "found", "built", "carried", "read", "sold",
                   "liked", "painted", "watched", "left"}},
          {"VBZ", {"sees", "finds", "builds", "carries", "reads", "sells",
                   "likes", "seems", "wants", "looks"}},
          {"IN", {"in", "on", "near", "with", "under", "because", "from",
                  "behind"}},
          {"TO", {"to"}},
          {"CC", {"and", "but", "or"}},
          {"PRP", {"he", "she", "they", "we", "it"}},
          {"CD", {"2", "3", "12", "40", "1,000", "3.5", "seven"}},
          {"MD", {"can", "will", "must", "might"}},
          {"WDT", {"which", "whatever"}},
          {"POS", {"'s"}},
          {".", {"."}},
          {",", {","}},
      }};
  return g;
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  // A sentence with between min_len and max_len words.
  Tree sentence(std::size_t min_len = 3, std::size_t max_len = 15) {
    while (true) {
      std::size_t budget = 0;
      Tree t = expand("S", 0, budget);
      if (budget >= min_len && budget <= max_len) return t;
    }
  }

 private:
  double uniform() {
    return static_cast<double>(rng_() >> 11) * (1.0 / 9007199254740992.0);
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  Tree expand(std::string_view sym, int depth, std::size_t& words) {
    const Grammar& g = grammar();
    const auto* rs = g.expansions(sym);
    if (!rs) {
      const auto& ws = g.words(sym);
      ++words;
      return Tree::leaf(std::string(ws[pick(ws.size())]), std::string(sym));
    }
    // Past the depth limit only the first (non-recursive) rule is used.
    const Rule* chosen = &rs->front();
    if (depth < 6) {
      double total = 0;
      for (const auto& r : *rs) total += r.weight;
      double x = uniform() * total;
      for (const auto& r : *rs) {
        chosen = &r;
        if ((x -= r.weight) < 0) break;
      }
    }
    std::vector<Tree> kids;
    for (auto child : chosen->rhs) kids.push_back(expand(child, depth + 1, words));
    return Tree::node(std::string(sym), std::move(kids));
  }

  std::mt19937_64 rng_;
};

struct Corpus {
  std::vector<Tree> train;
  std::vector<Tree> test;
};

inline Corpus make_corpus(std::uint64_t seed, std::size_t n_train = 2000,
                          std::size_t n_test = 200) {
  Generator gen(seed);
  Corpus c;
  for (std::size_t i = 0; i < n_train; ++i) c.train.push_back(gen.sentence());
  for (std::size_t i = 0; i < n_test; ++i) c.test.push_back(gen.sentence());
  return c;
}

}  // namespace treeseq::toy
