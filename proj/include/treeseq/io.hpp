#pragma once

// Line-oriented file formats.
//
//   treebank   one bracketed tree per line, blank lines ignored
//   labels     word<TAB>pos<TAB>label per line, blank line between sentences
//   psi        word<TAB>pos<TAB>u per line (u = leaf chain or NONE)
//   tagged     word<TAB>pos per line; further columns are ignored

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "treeseq/encoding.hpp"
#include "treeseq/error.hpp"
#include "treeseq/tree.hpp"

namespace treeseq {

// Reads one sentence block. Returns nullopt at end of input. `line_no`
// tracks the 1-based number of the last line consumed.
class BlockReader {
 public:
  explicit BlockReader(std::istream& in) : in_(in) {}

  struct Row {
    std::size_t line = 0;
    std::vector<std::string> fields;
  };

  std::optional<std::vector<Row>> next() {
    std::vector<Row> rows;
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        if (rows.empty()) continue;
        return rows;
      }
      rows.push_back({line_no_, split_tabs(line)});
    }
    if (rows.empty()) return std::nullopt;
    return rows;
  }

  std::size_t line_no() const { return line_no_; }

 private:
  static std::vector<std::string> split_tabs(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto tab = s.find('\t', start);
      if (tab == std::string_view::npos) {
        out.emplace_back(s.substr(start));
        return out;
      }
      out.emplace_back(s.substr(start, tab - start));
      start = tab + 1;
    }
  }

  std::istream& in_;
  std::size_t line_no_ = 0;
};

namespace detail {

inline Token row_token(const BlockReader::Row& r) {
  if (r.fields.size() < 2 || !valid_word(r.fields[0]) ||
      !valid_symbol(r.fields[1], true))
    throw Error(ErrorKind::MalformedInput,
                "line " + std::to_string(r.line) + ": expected word<TAB>pos");
  return Token{r.fields[0], r.fields[1]};
}

inline std::string with_line(const Error& e, std::size_t line) {
  return "line " + std::to_string(line) + ": " + e.what();
}

}  // namespace detail

inline std::optional<LabeledSentence> read_labeled_sentence(BlockReader& in) {
  auto rows = in.next();
  if (!rows) return std::nullopt;
  LabeledSentence s;
  for (const auto& r : *rows) {
    s.tokens.push_back(detail::row_token(r));
    if (r.fields.size() != 3)
      throw Error(ErrorKind::MalformedInput,
                  "line " + std::to_string(r.line) +
                      ": expected word<TAB>pos<TAB>label");
    try {
      s.labels.push_back(parse_label(r.fields[2]));
    } catch (const Error& e) {
      throw Error(e.kind(), detail::with_line(e, r.line));
    }
  }
  return s;
}

inline std::vector<LabeledSentence> read_labeled(std::istream& in) {
  BlockReader reader(in);
  std::vector<LabeledSentence> out;
  while (auto s = read_labeled_sentence(reader)) out.push_back(std::move(*s));
  return out;
}

inline void write_labeled(std::ostream& out, const LabeledSentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    out << s.tokens[i].word << '\t' << s.tokens[i].pos << '\t'
        << to_string(s.labels[i]) << '\n';
  out << '\n';
}

inline std::optional<std::vector<Token>> read_tagged_sentence(BlockReader& in) {
  auto rows = in.next();
  if (!rows) return std::nullopt;
  std::vector<Token> tokens;
  for (const auto& r : *rows) tokens.push_back(detail::row_token(r));
  return tokens;
}

// A sentence paired with one string tag per token (used for the leaf-unary
// pass and as the tagger's generic training unit).
struct TaggedSentence {
  std::vector<Token> tokens;
  std::vector<std::string> tags;

  friend bool operator==(const TaggedSentence&, const TaggedSentence&) = default;
};

inline std::optional<std::string> parse_psi_tag(std::string_view u) {
  if (u == kNoneSymbol) return std::nullopt;
  return std::string(u);
}

inline std::string psi_tag(const std::optional<std::string>& u) {
  return u ? *u : std::string(kNoneSymbol);
}

inline std::optional<TaggedSentence> read_psi_sentence(BlockReader& in) {
  auto rows = in.next();
  if (!rows) return std::nullopt;
  TaggedSentence s;
  for (const auto& r : *rows) {
    s.tokens.push_back(detail::row_token(r));
    if (r.fields.size() != 3 || !valid_symbol(r.fields[2], true))
      throw Error(ErrorKind::MalformedInput,
                  "line " + std::to_string(r.line) +
                      ": expected word<TAB>pos<TAB>leaf-chain");
    s.tags.push_back(r.fields[2]);
  }
  return s;
}

inline void write_tagged(std::ostream& out, const TaggedSentence& s) {
  for (std::size_t i = 0; i < s.tokens.size(); ++i)
    out << s.tokens[i].word << '\t' << s.tokens[i].pos << '\t' << s.tags[i]
        << '\n';
  out << '\n';
}

// Calls `fn(line_number, tree)` for every tree in a treebank stream.
template <typename Fn>
void for_each_tree(std::istream& in, Fn&& fn, ParseOptions opts = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Tree t;
    try {
      t = parse_bracketed(line, opts);
    } catch (const Error& e) {
      throw Error(e.kind(), detail::with_line(e, line_no), e.offset());
    }
    fn(line_no, std::move(t));
  }
}

inline std::vector<Tree> read_treebank(std::istream& in, ParseOptions opts = {}) {
  std::vector<Tree> out;
  for_each_tree(in, [&](std::size_t, Tree t) { out.push_back(std::move(t)); },
                opts);
  return out;
}

}  // namespace treeseq
