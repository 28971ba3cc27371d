#pragma once

// Constituent trees, the single-line bracketed notation, and the structural
// transforms the label encodings depend on: unary-chain collapsing and
// right-branching binarization.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeseq/error.hpp"

namespace treeseq {

// Separator used when a unary chain is folded into one symbol, top-down.
inline constexpr char kChainSep = '+';
// Suffix marking nodes introduced by binarize().
inline constexpr char kAuxSuffix = '*';

struct Token {
  std::string word;
  std::string pos;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Tree {
  std::string label;           // nonterminal, or the PoS tag of a leaf
  std::string word;            // leaves only
  std::vector<Tree> children;  // empty iff leaf

  static Tree leaf(std::string word, std::string pos) {
    return Tree{std::move(pos), std::move(word), {}};
  }
  static Tree leaf(const Token& tok) { return leaf(tok.word, tok.pos); }
  static Tree node(std::string label, std::vector<Tree> children) {
    return Tree{std::move(label), {}, std::move(children)};
  }

  bool is_leaf() const { return children.empty(); }
  Token token() const { return Token{word, label}; }

  friend bool operator==(const Tree&, const Tree&) = default;
};

// A tree produced by collapse_unaries(): no internal node has one child.
struct CollapsedTree {
  Tree tree;

  friend bool operator==(const CollapsedTree&, const CollapsedTree&) = default;
};

namespace detail {

inline void collect_tokens(const Tree& t, std::vector<Token>& out) {
  if (t.is_leaf()) {
    out.push_back(t.token());
    return;
  }
  for (const auto& c : t.children) collect_tokens(c, out);
}

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline std::vector<std::string> split_chain(std::string_view s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(kChainSep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string join_chain(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += kChainSep;
    out += parts[i];
  }
  return out;
}

}  // namespace detail

inline std::vector<Token> leaves(const Tree& t) {
  std::vector<Token> out;
  detail::collect_tokens(t, out);
  return out;
}

inline std::size_t leaf_count(const Tree& t) {
  if (t.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : t.children) n += leaf_count(c);
  return n;
}

// True for a nonterminal/PoS symbol that the bracketed reader accepts. With
// `allow_chains`, "+"-joined chains of valid symbols are accepted too.
inline bool valid_symbol(std::string_view s, bool allow_chains = false) {
  if (s.empty()) return false;
  if (allow_chains && s.find(kChainSep) != std::string_view::npos) {
    for (const auto& part : detail::split_chain(s))
      if (!valid_symbol(part, false)) return false;
    return true;
  }
  return std::none_of(s.begin(), s.end(), [](char c) {
    return detail::is_space(c) || c == kChainSep || c == '|' || c == '(' ||
           c == ')';
  });
}

inline bool valid_word(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return detail::is_space(c) || c == '(' || c == ')';
  });
}

struct ParseOptions {
  // Accept "X+Y" symbols, as written by serialize_bracketed on collapsed trees.
  bool allow_chains = false;
};

namespace detail {

class BracketReader {
 public:
  BracketReader(std::string_view text, ParseOptions opts)
      : text_(text), opts_(opts) {}

  Tree read() {
    skip_space();
    if (at_end()) throw Error(ErrorKind::EmptyTree, "no tree on line", pos_);
    if (peek() != '(')
      throw Error(ErrorKind::MalformedTree, "tree must start with '('", pos_);
    Tree t = read_node(/*outermost=*/true);
    skip_space();
    if (!at_end()) {
      if (peek() == ')')
        throw Error(ErrorKind::UnbalancedBrackets, "unmatched ')'", pos_);
      throw Error(ErrorKind::MalformedTree, "trailing text after tree", pos_);
    }
    return t;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_space() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  void expect_more(std::size_t open_at) {
    if (at_end())
      throw Error(ErrorKind::UnbalancedBrackets, "'(' is never closed",
                  open_at);
  }

  std::string_view read_atom() {
    std::size_t start = pos_;
    while (!at_end() && !is_space(peek()) && peek() != '(' && peek() != ')')
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Tree read_node(bool outermost) {
    const std::size_t open_at = pos_;
    ++pos_;  // '('
    skip_space();
    expect_more(open_at);

    // PTB files often wrap each tree in an unlabeled bracket: "( (S ...) )".
    if (outermost && peek() == '(') {
      Tree inner = read_node(false);
      skip_space();
      expect_more(open_at);
      if (peek() != ')')
        throw Error(ErrorKind::MalformedTree,
                    "unlabeled wrapper must hold exactly one tree", pos_);
      ++pos_;
      return inner;
    }
    if (peek() == ')')
      throw Error(ErrorKind::LeafWithoutWord, "empty brackets", open_at);

    const std::size_t label_at = pos_;
    std::string_view label = read_atom();
    skip_space();
    expect_more(open_at);

    if (peek() == ')') {
      throw Error(ErrorKind::LeafWithoutWord,
                  "'" + std::string(label) + "' has neither word nor children",
                  open_at);
    }

    if (peek() != '(') {
      const std::size_t word_at = pos_;
      std::string_view word = read_atom();
      skip_space();
      expect_more(open_at);
      if (peek() != ')')
        throw Error(ErrorKind::MalformedTree,
                    "a leaf holds exactly one word", pos_);
      ++pos_;
      check_symbol(label, label_at);
      if (!valid_word(word))
        throw Error(ErrorKind::InvalidSymbol, "bad word", word_at);
      return Tree::leaf(std::string(word), std::string(label));
    }

    check_symbol(label, label_at);
    std::vector<Tree> children;
    while (true) {
      skip_space();
      expect_more(open_at);
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (peek() != '(')
        throw Error(ErrorKind::MalformedTree,
                    "bare word among subtrees of '" + std::string(label) + "'",
                    pos_);
      children.push_back(read_node(false));
    }
    return Tree::node(std::string(label), std::move(children));
  }

  void check_symbol(std::string_view s, std::size_t at) const {
    if (!valid_symbol(s, opts_.allow_chains))
      throw Error(ErrorKind::InvalidSymbol,
                  "symbol '" + std::string(s) + "' is not allowed", at);
  }

  std::string_view text_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
};

inline void write_bracketed(const Tree& t, std::string& out) {
  out += '(';
  out += t.label;
  if (t.is_leaf()) {
    out += ' ';
    out += t.word;
  } else {
    for (const auto& c : t.children) {
      out += ' ';
      write_bracketed(c, out);
    }
  }
  out += ')';
}

}  // namespace detail

inline Tree parse_bracketed(std::string_view line, ParseOptions opts = {}) {
  return detail::BracketReader(line, opts).read();
}

inline std::string serialize_bracketed(const Tree& t) {
  std::string out;
  detail::write_bracketed(t, out);
  return out;
}

inline bool validate_no_unaries(const Tree& t) {
  if (t.is_leaf()) return true;
  if (t.children.size() == 1) return false;
  return std::all_of(t.children.begin(), t.children.end(),
                     [](const Tree& c) { return validate_no_unaries(c); });
}

namespace detail {

inline Tree collapse(const Tree& t) {
  if (t.is_leaf()) return t;
  std::vector<std::string> chain{t.label};
  const Tree* cur = &t;
  while (!cur->is_leaf() && cur->children.size() == 1) {
    cur = &cur->children.front();
    chain.push_back(cur->label);
  }
  if (cur->is_leaf()) return Tree::leaf(cur->word, join_chain(chain));
  std::vector<Tree> kids;
  kids.reserve(cur->children.size());
  for (const auto& c : cur->children) kids.push_back(collapse(c));
  return Tree::node(join_chain(chain), std::move(kids));
}

inline Tree uncollapse(const Tree& t) {
  auto chain = split_chain(t.label);
  Tree bottom;
  if (t.is_leaf()) {
    bottom = Tree::leaf(t.word, chain.back());
  } else {
    std::vector<Tree> kids;
    kids.reserve(t.children.size());
    for (const auto& c : t.children) kids.push_back(uncollapse(c));
    bottom = Tree::node(chain.back(), std::move(kids));
  }
  for (std::size_t i = chain.size() - 1; i-- > 0;) {
    std::vector<Tree> one;
    one.push_back(std::move(bottom));
    bottom = Tree::node(chain[i], std::move(one));
  }
  return bottom;
}

inline bool is_aux(const std::string& label) {
  return !label.empty() && label.back() == kAuxSuffix;
}

}  // namespace detail

// Folds every unary chain into one "+"-joined symbol. Chains that end in a
// PoS tag are absorbed into the leaf, PoS last.
inline CollapsedTree collapse_unaries(const Tree& t) {
  return CollapsedTree{detail::collapse(t)};
}

inline Tree uncollapse_unaries(const CollapsedTree& t) {
  return detail::uncollapse(t.tree);
}

// Right-branching: (L c1 c2 ... cn) becomes (L c1 (L* c2 (L* ... cn))).
inline Tree binarize(const Tree& t) {
  if (t.is_leaf()) return t;
  std::vector<Tree> kids;
  kids.reserve(t.children.size());
  for (const auto& c : t.children) kids.push_back(binarize(c));
  if (kids.size() <= 2) return Tree::node(t.label, std::move(kids));

  const std::string aux =
      detail::is_aux(t.label) ? t.label : t.label + kAuxSuffix;
  auto pair = [](std::string label, Tree left, Tree right) {
    std::vector<Tree> two;
    two.reserve(2);
    two.push_back(std::move(left));
    two.push_back(std::move(right));
    return Tree::node(std::move(label), std::move(two));
  };
  const std::size_t n = kids.size();
  Tree right = pair(aux, std::move(kids[n - 2]), std::move(kids[n - 1]));
  for (std::size_t j = n - 2; j-- > 1;)
    right = pair(aux, std::move(kids[j]), std::move(right));
  return pair(t.label, std::move(kids[0]), std::move(right));
}

inline Tree debinarize(const Tree& t) {
  if (t.is_leaf()) return t;
  std::vector<Tree> kids;
  for (const auto& c : t.children) {
    Tree d = debinarize(c);
    if (!d.is_leaf() && detail::is_aux(d.label)) {
      for (auto& g : d.children) kids.push_back(std::move(g));
    } else {
      kids.push_back(std::move(d));
    }
  }
  return Tree::node(t.label, std::move(kids));
}

}  // namespace treeseq
