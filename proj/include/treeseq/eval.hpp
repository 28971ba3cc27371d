#pragma once

// Labeled-bracket scoring in the style of evalb, plus per-label accuracy.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "treeseq/encoding.hpp"
#include "treeseq/error.hpp"
#include "treeseq/tree.hpp"

namespace treeseq {

using LabelSet = std::set<std::string, std::less<>>;

// Approximation of the COLLINS.prm deletions: these nonterminals produce no
// bracket, and leaves with these PoS tags are not counted in span offsets.
inline LabelSet default_deleted_labels() {
  return {"TOP", "S1", "-NONE-", ",", ":", "``", "''", "."};
}

struct Span {
  std::string label;
  std::size_t start = 0;  // half-open word offsets, deleted leaves skipped
  std::size_t end = 0;

  friend auto operator<=>(const Span&, const Span&) = default;
};

namespace detail {

inline void collect_spans(const Tree& t, const LabelSet& deleted,
                          std::size_t& cursor, std::vector<Span>& out) {
  if (t.is_leaf()) {
    if (!deleted.contains(t.label)) ++cursor;
    return;
  }
  const std::size_t start = cursor;
  for (const auto& c : t.children) collect_spans(c, deleted, cursor, out);
  if (cursor > start && !deleted.contains(t.label))
    out.push_back({t.label, start, cursor});
}

inline std::size_t multiset_overlap(std::vector<Span> a, std::vector<Span> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

inline double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

// Sorted multiset of labeled spans of a tree.
inline std::vector<Span> bracket_spans(const Tree& t, const LabelSet& deleted) {
  std::vector<Span> out;
  std::size_t cursor = 0;
  detail::collect_spans(t, deleted, cursor, out);
  std::sort(out.begin(), out.end());
  return out;
}

struct EvalReport {
  std::size_t matched_brackets = 0;
  std::size_t gold_brackets = 0;
  std::size_t pred_brackets = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::optional<double> label_accuracy;
  double exact_match = 0.0;
  std::size_t n_sentences = 0;
};

// Micro-averaged labeled bracketing precision/recall/F1. When neither side
// has any bracket the scores are 1 (the two bracket multisets are equal).
inline EvalReport bracketing_score(const std::vector<Tree>& gold,
                                   const std::vector<Tree>& pred,
                                   const LabelSet& deleted = default_deleted_labels()) {
  if (gold.size() != pred.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(gold.size()) + " gold trees but " +
                    std::to_string(pred.size()) + " predicted");
  EvalReport r;
  r.n_sentences = gold.size();
  std::size_t exact = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    auto gw = leaves(gold[s]), pw = leaves(pred[s]);
    bool same_words = gw.size() == pw.size();
    for (std::size_t i = 0; same_words && i < gw.size(); ++i)
      same_words = gw[i].word == pw[i].word;
    if (!same_words)
      throw Error(ErrorKind::TokenMismatch,
                  "sentence " + std::to_string(s + 1) + " has different words");
    auto gs = bracket_spans(gold[s], deleted);
    auto ps = bracket_spans(pred[s], deleted);
    const std::size_t m = detail::multiset_overlap(gs, ps);
    r.matched_brackets += m;
    r.gold_brackets += gs.size();
    r.pred_brackets += ps.size();
    if (gs == ps) ++exact;
  }
  if (r.gold_brackets == 0 && r.pred_brackets == 0) {
    r.precision = r.recall = r.f1 = 1.0;
  } else {
    r.precision = detail::ratio(r.matched_brackets, r.pred_brackets);
    r.recall = detail::ratio(r.matched_brackets, r.gold_brackets);
    r.f1 = r.precision + r.recall > 0
               ? 2 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
  }
  r.exact_match = gold.empty() ? 1.0 : detail::ratio(exact, gold.size());
  return r;
}

// Fraction of positions (dummy included) whose serialized labels match.
inline double label_accuracy(const std::vector<LabeledSentence>& gold,
                             const std::vector<LabeledSentence>& pred) {
  if (gold.size() != pred.size())
    throw Error(ErrorKind::LengthMismatch, "different sentence counts");
  std::size_t total = 0, correct = 0;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto& g = gold[s].labels;
    const auto& p = pred[s].labels;
    if (g.size() != p.size())
      throw Error(ErrorKind::LengthMismatch,
                  "sentence " + std::to_string(s + 1) + " has different lengths");
    for (std::size_t i = 0; i < g.size(); ++i)
      correct += to_string(g[i]) == to_string(p[i]);
    total += g.size();
  }
  return total == 0 ? 1.0 : detail::ratio(correct, total);
}

inline std::string format_report(const EvalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "Sentences          %8zu\n"
                "Gold brackets      %8zu\n"
                "Predicted brackets %8zu\n"
                "Matched brackets   %8zu\n"
                "Precision          %8.2f\n"
                "Recall             %8.2f\n"
                "F1                 %8.2f\n"
                "Exact match        %8.2f\n",
                r.n_sentences, r.gold_brackets, r.pred_brackets,
                r.matched_brackets, r.precision * 100, r.recall * 100,
                r.f1 * 100, r.exact_match * 100);
  std::string out = buf;
  if (r.label_accuracy) {
    std::snprintf(buf, sizeof buf, "Label accuracy     %8.2f\n",
                  *r.label_accuracy * 100);
    out += buf;
  }
  return out;
}

inline std::string machine_line(const EvalReport& r) {
  char acc[32] = "NA";
  if (r.label_accuracy) std::snprintf(acc, sizeof acc, "%.4f", *r.label_accuracy);
  char buf[256];
  std::snprintf(buf, sizeof buf, "P=%.4f R=%.4f F1=%.4f ACC=%s EXACT=%.4f",
                r.precision, r.recall, r.f1, acc, r.exact_match);
  return buf;
}

}  // namespace treeseq
