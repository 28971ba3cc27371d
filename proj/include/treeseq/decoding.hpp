#pragma once

// Label sequence -> tree. The decoder is total: any label sequence that is
// syntactically valid for the scheme yields a unary-free tree over exactly
// the given tokens. Ill-formed sequences are repaired deterministically:
//   - counts below 1 are clamped to 1 (a relative drop past the root stops
//     at the root);
//   - when several labels name the same node, the first one wins;
//   - unary nodes generated by the counts are spliced out, keeping the
//     lower node.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "treeseq/encoding.hpp"
#include "treeseq/error.hpp"
#include "treeseq/tree.hpp"

namespace treeseq {

inline std::vector<int> repair_absolute_counts(std::span<const int> counts) {
  std::vector<int> out(counts.begin(), counts.end());
  for (auto& c : out) c = std::max(c, 1);
  return out;
}

inline std::vector<Token> merge_psi(
    std::vector<Token> tokens,
    std::span<const std::optional<std::string>> psi) {
  if (psi.size() != tokens.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(tokens.size()) + " tokens but " +
                    std::to_string(psi.size()) + " leaf-unary labels");
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (psi[i]) tokens[i].pos = *psi[i] + kChainSep + tokens[i].pos;
  return tokens;
}

namespace detail {

class TreeBuilder {
 public:
  explicit TreeBuilder(const std::vector<Token>& tokens) : tokens_(tokens) {}

  std::size_t depth() const { return path_.size(); }

  void truncate(std::size_t d) {
    if (path_.size() > d) path_.resize(d);
  }

  void open_to(std::size_t d) {
    while (path_.size() < d) {
      int id = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      if (!path_.empty()) nodes_[path_.back()].children.push_back(id);
      path_.push_back(id);
    }
  }

  void attach_leaf(std::size_t i) {
    nodes_[path_.back()].children.push_back(-static_cast<int>(i) - 1);
  }

  // Depth of the deepest open node with fewer than k children, or 1.
  std::size_t deepest_unfilled(std::size_t k) const {
    for (std::size_t d = path_.size(); d >= 1; --d)
      if (nodes_[path_[d - 1]].children.size() < k) return d;
    return 1;
  }

  void name(std::size_t d, const std::string& label) {
    auto& n = nodes_[path_[d - 1]];
    if (!n.named) {
      n.label = label;
      n.named = true;
    }
  }

  Tree finish() const { return build(0); }

 private:
  struct Node {
    std::string label;
    bool named = false;
    std::vector<int> children;  // >= 0: node id, < 0: -(leaf index) - 1
  };

  Tree build_child(int c) const {
    if (c < 0) return Tree::leaf(tokens_[static_cast<std::size_t>(-c - 1)]);
    return build(c);
  }

  Tree build(int id) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    // A node with one child was generated by the counts, never named by a
    // label pair; keep its child.
    if (n.children.size() == 1) return build_child(n.children.front());
    std::vector<Tree> kids;
    kids.reserve(n.children.size());
    for (int c : n.children) kids.push_back(build_child(c));
    return Tree::node(n.label, std::move(kids));
  }

  const std::vector<Token>& tokens_;
  std::vector<Node> nodes_;
  std::vector<int> path_;
};

inline void check_level(const Level& n, const Scheme& scheme, std::size_t i) {
  auto fail = [&](const char* why) {
    throw Error(ErrorKind::MalformedLabel,
                std::string(why) + " at position " + std::to_string(i + 1));
  };
  switch (n.kind) {
    case LevelKind::Eos: fail("end-of-sentence label before the last word");
      break;
    case LevelKind::Absolute:
      if (scheme.scale != Scale::Absolute) fail("absolute level in a relative scheme");
      break;
    case LevelKind::Relative:
      if (scheme.scale == Scale::Absolute) fail("relative level in an absolute scheme");
      break;
    case LevelKind::Root:
    case LevelKind::Neg: break;
  }
}

}  // namespace detail

// Decodes core labels into a collapsed tree. Token PoS tags are used as
// given, so leaf chains already merged into them survive into the leaves.
inline Tree decode(const std::vector<Token>& tokens,
                   const std::vector<Label>& labels, const Scheme& scheme) {
  if (tokens.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(tokens.size()) + " tokens but " +
                    std::to_string(labels.size()) + " labels");
  if (tokens.empty())
    throw Error(ErrorKind::LengthMismatch, "empty sentence");
  if (tokens.size() == 1) return Tree::leaf(tokens.front());

  const std::size_t arity =
      scheme.scale == Scale::KAry ? static_cast<std::size_t>(std::max(scheme.k, 2)) : 2;
  const std::size_t n = tokens.size();
  detail::TreeBuilder builder(tokens);
  std::size_t prev = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Label& l = labels[i];
    detail::check_level(l.level, scheme, i);
    builder.truncate(prev);

    std::size_t cur = 1;
    if (l.level.kind == LevelKind::Neg && prev > 0) {
      builder.attach_leaf(i);
      cur = builder.deepest_unfilled(arity);
    } else {
      switch (l.level.kind) {
        case LevelKind::Absolute:
          cur = static_cast<std::size_t>(std::max(l.level.value, 1));
          break;
        case LevelKind::Relative:
          cur = static_cast<std::size_t>(
              std::max(static_cast<long>(prev) + l.level.value, 1L));
          break;
        default: cur = 1; break;
      }
      builder.open_to(std::max(prev, cur));
      builder.attach_leaf(i);
    }
    builder.name(cur, l.nonterminal);
    prev = cur;
  }
  builder.truncate(prev);
  builder.attach_leaf(n - 1);
  return builder.finish();
}

inline Tree decode(const LabeledSentence& s, const Scheme& scheme) {
  return decode(s.tokens, s.labels, scheme);
}

// Inverse of encode_extended: leaf chains come back from the labels' u
// fields, then the tree is uncollapsed.
inline Tree decode_extended(const std::vector<Token>& tokens,
                            const std::vector<Label>& labels,
                            const Scheme& scheme) {
  if (tokens.size() != labels.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(tokens.size()) + " tokens but " +
                    std::to_string(labels.size()) + " labels");
  std::vector<std::optional<std::string>> psi;
  std::vector<Label> core;
  psi.reserve(labels.size());
  core.reserve(labels.size());
  for (const auto& l : labels) {
    psi.push_back(l.leaf_unary);
    core.push_back(Label{l.level, l.nonterminal, std::nullopt});
  }
  auto enriched = merge_psi(tokens, psi);
  return uncollapse_unaries(CollapsedTree{decode(enriched, core, scheme)});
}

// Full inverse for either unary strategy: collapsed labels -> original tree.
inline Tree decode_and_uncollapse(const LabeledSentence& s,
                                  const Scheme& scheme) {
  if (scheme.unaries == UnaryStrategy::Extended)
    return decode_extended(s.tokens, s.labels, scheme);
  return uncollapse_unaries(CollapsedTree{decode(s, scheme)});
}

}  // namespace treeseq
