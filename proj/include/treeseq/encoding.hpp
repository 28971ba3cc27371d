#pragma once

// Tree -> label sequence. Each word w_i (i < |w|) gets a label (n_i, c_i):
// n_i describes how many ancestors w_i shares with w_{i+1}, c_i is the
// nonterminal of their lowest common ancestor. The last word always gets
// the end-of-sentence dummy.

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeseq/error.hpp"
#include "treeseq/tree.hpp"

namespace treeseq {

enum class LevelKind { Absolute, Relative, Root, Neg, Eos };

// The n component of a label.
struct Level {
  LevelKind kind = LevelKind::Eos;
  int value = 0;  // meaningful for Absolute and Relative only

  static constexpr Level absolute(int k) { return {LevelKind::Absolute, k}; }
  static constexpr Level relative(int d) { return {LevelKind::Relative, d}; }
  static constexpr Level root() { return {LevelKind::Root, 0}; }
  static constexpr Level neg() { return {LevelKind::Neg, 0}; }
  static constexpr Level eos() { return {LevelKind::Eos, 0}; }

  friend bool operator==(const Level&, const Level&) = default;
};

inline constexpr std::string_view kEosSymbol = "EOS";
inline constexpr std::string_view kNoneSymbol = "NONE";

struct Label {
  Level level;
  std::string nonterminal;
  // Collapsed leaf unary chain of this label's own word (extended scheme).
  std::optional<std::string> leaf_unary;

  static Label eos(std::optional<std::string> u = std::nullopt) {
    return Label{Level::eos(), std::string(kEosSymbol), std::move(u)};
  }
  bool is_eos() const { return level.kind == LevelKind::Eos; }

  friend bool operator==(const Label&, const Label&) = default;
};

struct LabeledSentence {
  std::vector<Token> tokens;
  std::vector<Label> labels;

  friend bool operator==(const LabeledSentence&,
                         const LabeledSentence&) = default;
};

enum class Scale { Absolute, Relative, RelativeWithRoot, KAry };
enum class UnaryStrategy { TwoPass, Extended };

struct Scheme {
  Scale scale = Scale::RelativeWithRoot;
  int k = 2;  // KAry only
  UnaryStrategy unaries = UnaryStrategy::TwoPass;

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

// ---------------------------------------------------------------------------
// Label text: "n|c" or "n|c|u".

inline std::string to_string(const Level& n) {
  switch (n.kind) {
    case LevelKind::Absolute: return std::to_string(n.value);
    case LevelKind::Relative:
      return n.value > 0 ? "+" + std::to_string(n.value)
                         : std::to_string(n.value);
    case LevelKind::Root: return "ROOT";
    case LevelKind::Neg: return "NEG";
    case LevelKind::Eos: return std::string(kEosSymbol);
  }
  return {};
}

inline std::string to_string(const Label& l) {
  std::string out = to_string(l.level);
  out += '|';
  out += l.nonterminal;
  if (l.leaf_unary) {
    out += '|';
    out += *l.leaf_unary;
  }
  return out;
}

// Bare positive integers are absolute counts; signed integers and "0" are
// relative offsets.
inline Level parse_level(std::string_view s) {
  if (s == "ROOT") return Level::root();
  if (s == "NEG") return Level::neg();
  if (s == kEosSymbol) return Level::eos();
  if (s.empty()) throw Error(ErrorKind::MalformedLabel, "empty level");

  const bool has_sign = s.front() == '+' || s.front() == '-';
  std::string_view digits = s.front() == '+' ? s.substr(1) : s;
  int value = 0;
  auto [end, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (digits.empty() || (s.front() == '+' && digits.front() == '-') ||
      ec != std::errc{} || end != digits.data() + digits.size())
    throw Error(ErrorKind::MalformedLabel,
                "bad level '" + std::string(s) + "'");
  if (has_sign || value == 0) return Level::relative(value);
  return Level::absolute(value);
}

inline Label parse_label(std::string_view s) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto bar = s.find('|', start);
    fields.push_back(s.substr(start, bar == std::string_view::npos
                                         ? std::string_view::npos
                                         : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (fields.size() < 2 || fields.size() > 3)
    throw Error(ErrorKind::MalformedLabel,
                "expected n|c or n|c|u, got '" + std::string(s) + "'");
  Label l;
  l.level = parse_level(fields[0]);
  if (!valid_symbol(fields[1], true))
    throw Error(ErrorKind::MalformedLabel,
                "bad nonterminal in '" + std::string(s) + "'");
  l.nonterminal = std::string(fields[1]);
  if (fields.size() == 3 && fields[2] != kNoneSymbol) {
    if (!valid_symbol(fields[2], true))
      throw Error(ErrorKind::MalformedLabel,
                  "bad leaf unary in '" + std::string(s) + "'");
    l.leaf_unary = std::string(fields[2]);
  }
  return l;
}

inline std::string_view scale_name(Scale s) {
  switch (s) {
    case Scale::Absolute: return "abs";
    case Scale::Relative: return "rel";
    case Scale::RelativeWithRoot: return "rel-root";
    case Scale::KAry: return "kary";
  }
  return {};
}

inline Scale parse_scale(std::string_view s) {
  if (s == "abs") return Scale::Absolute;
  if (s == "rel") return Scale::Relative;
  if (s == "rel-root") return Scale::RelativeWithRoot;
  if (s == "kary") return Scale::KAry;
  throw Error(ErrorKind::MalformedInput, "unknown scale '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Common ancestors.

struct AncestorInfo {
  int count = 0;
  std::string lca_label;

  friend bool operator==(const AncestorInfo&, const AncestorInfo&) = default;
};

namespace detail {

// Visits the tree once; the boundary between the last leaf of child j and
// the first leaf of child j+1 has this node as lowest common ancestor.
inline void boundaries(const Tree& t, int depth,
                       std::vector<AncestorInfo>& out) {
  if (t.is_leaf()) return;
  for (std::size_t j = 0; j < t.children.size(); ++j) {
    boundaries(t.children[j], depth + 1, out);
    if (j + 1 < t.children.size()) out.push_back({depth, t.label});
  }
}

inline void require_no_unaries(const Tree& t) {
  if (!validate_no_unaries(t))
    throw Error(ErrorKind::UnaryBranchPresent,
                "collapse unary chains before encoding");
}

inline bool strictly_kary(const Tree& t, std::size_t k) {
  if (t.is_leaf()) return true;
  if (t.children.size() != k) return false;
  for (const auto& c : t.children)
    if (!strictly_kary(c, k)) return false;
  return true;
}

}  // namespace detail

// Ancestor count and LCA label for every adjacent leaf pair, in order.
inline std::vector<AncestorInfo> all_common_ancestors(const Tree& t) {
  std::vector<AncestorInfo> out;
  detail::boundaries(t, 1, out);
  return out;
}

// `i` is 1-based: the pair (w_i, w_{i+1}).
inline AncestorInfo common_ancestors(const Tree& t, std::size_t i) {
  auto all = all_common_ancestors(t);
  if (i < 1 || i > all.size())
    throw Error(ErrorKind::IndexOutOfRange,
                "pair index " + std::to_string(i) + " outside 1.." +
                    std::to_string(all.size()));
  return all[i - 1];
}

// ---------------------------------------------------------------------------
// Encoders.

inline LabeledSentence encode_absolute(const Tree& t) {
  detail::require_no_unaries(t);
  LabeledSentence out{leaves(t), {}};
  for (auto& a : all_common_ancestors(t))
    out.labels.push_back({Level::absolute(a.count), std::move(a.lca_label), {}});
  out.labels.push_back(Label::eos());
  return out;
}

inline std::vector<Label> abs_to_rel(std::vector<Label> seq) {
  int prev = 0;
  for (auto& l : seq) {
    if (l.level.kind != LevelKind::Absolute) continue;
    int count = l.level.value;
    l.level = Level::relative(count - prev);
    prev = count;
  }
  return seq;
}

inline std::vector<Label> rel_to_abs(std::vector<Label> seq) {
  int running = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto& l = seq[i];
    switch (l.level.kind) {
      case LevelKind::Relative:
        running += l.level.value;
        if (running < 1)
          throw Error(ErrorKind::NonPositivePrefixSum,
                      "running count " + std::to_string(running) +
                          " at position " + std::to_string(i + 1));
        l.level = Level::absolute(running);
        break;
      case LevelKind::Root:
        running = 1;
        l.level = Level::absolute(1);
        break;
      case LevelKind::Absolute: running = l.level.value; break;
      case LevelKind::Neg:
        throw Error(ErrorKind::MalformedLabel,
                    "NEG cannot be resolved without the tree");
      case LevelKind::Eos: break;
    }
  }
  return seq;
}

inline LabeledSentence encode_relative(const Tree& t) {
  auto s = encode_absolute(t);
  s.labels = abs_to_rel(std::move(s.labels));
  return s;
}

// Positions whose lowest common ancestor is the root become (ROOT, root).
inline LabeledSentence apply_root_links(LabeledSentence seq, const Tree& t) {
  auto info = all_common_ancestors(t);
  for (std::size_t i = 0; i < info.size() && i < seq.labels.size(); ++i) {
    if (info[i].count == 1) {
      seq.labels[i].level = Level::root();
      seq.labels[i].nonterminal = t.label;
    }
  }
  return seq;
}

inline LabeledSentence encode_kary(const Tree& t, int k) {
  if (k < 2 || !detail::strictly_kary(t, static_cast<std::size_t>(k)))
    throw Error(ErrorKind::NotStrictlyKary,
                "every internal node must have exactly " + std::to_string(k) +
                    " children");
  auto s = encode_relative(t);
  for (auto& l : s.labels)
    if (l.level.kind == LevelKind::Relative && l.level.value < 0)
      l.level = Level::neg();
  return s;
}

inline LabeledSentence encode_core(const Tree& t, const Scheme& scheme) {
  switch (scheme.scale) {
    case Scale::Absolute: return encode_absolute(t);
    case Scale::Relative: return encode_relative(t);
    case Scale::RelativeWithRoot: return apply_root_links(encode_relative(t), t);
    case Scale::KAry: return encode_kary(t, scheme.k);
  }
  return {};
}

// One entry per token: the leaf unary chain without its PoS, if any.
inline std::vector<std::optional<std::string>> encode_leaf_unaries_psi(
    const std::vector<Token>& tokens) {
  std::vector<std::optional<std::string>> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto cut = tok.pos.rfind(kChainSep);
    if (cut == std::string::npos)
      out.emplace_back();
    else
      out.emplace_back(tok.pos.substr(0, cut));
  }
  return out;
}

inline std::vector<std::optional<std::string>> encode_leaf_unaries_psi(
    const Tree& t) {
  return encode_leaf_unaries_psi(leaves(t));
}

// PoS tag with any collapsed leaf chain removed.
inline std::string base_pos(const std::string& pos) {
  auto cut = pos.rfind(kChainSep);
  return cut == std::string::npos ? pos : pos.substr(cut + 1);
}

// 3-tuple labels: each label also carries the leaf chain of its own word,
// tokens carry bare PoS tags.
inline LabeledSentence encode_extended(const Tree& t, const Scheme& scheme) {
  auto s = encode_core(t, scheme);
  auto psi = encode_leaf_unaries_psi(s.tokens);
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    s.labels[i].leaf_unary = psi[i];
    s.tokens[i].pos = base_pos(s.tokens[i].pos);
  }
  return s;
}

inline LabeledSentence encode(const Tree& t, const Scheme& scheme) {
  if (scheme.unaries == UnaryStrategy::Extended)
    return encode_extended(t, scheme);
  return encode_core(t, scheme);
}

}  // namespace treeseq
