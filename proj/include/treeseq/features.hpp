#pragma once

// Discrete feature templates over a +-1 word window.
//
// For each j in {i-1, i, i+1}: lowercased word, PoS, PoS prefix of length 2
// and, for real (non-sentinel) words, the binary flags first/last/number/
// capitalized/uppercased. For i alone: word suffixes of length 3 and 2.
// A constant "bias" feature is always present.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeseq/tree.hpp"

namespace treeseq {

inline constexpr std::string_view kBosSymbol = "<s>";
inline constexpr std::string_view kEosSentinel = "</s>";

inline std::vector<Token> pad_sentence(std::span<const Token> tokens) {
  std::vector<Token> out;
  out.reserve(tokens.size() + 2);
  out.push_back({std::string(kBosSymbol), std::string(kBosSymbol)});
  out.insert(out.end(), tokens.begin(), tokens.end());
  out.push_back({std::string(kEosSentinel), std::string(kEosSentinel)});
  return out;
}

namespace text {

inline std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

inline bool is_cont_byte(char c) {
  return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

// Last `n` code points of a UTF-8 string (the whole string if shorter).
inline std::string utf8_suffix(std::string_view s, std::size_t n) {
  std::size_t pos = s.size();
  for (std::size_t taken = 0; taken < n && pos > 0; ++taken) {
    --pos;
    while (pos > 0 && is_cont_byte(s[pos])) --pos;
  }
  return std::string(s.substr(pos));
}

// First `n` code points of a UTF-8 string.
inline std::string utf8_prefix(std::string_view s, std::size_t n) {
  std::size_t pos = 0;
  for (std::size_t taken = 0; taken < n && pos < s.size(); ++taken) {
    ++pos;
    while (pos < s.size() && is_cont_byte(s[pos])) ++pos;
  }
  return std::string(s.substr(0, pos));
}

inline bool is_number(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return (c >= '0' && c <= '9') || c == ',' || c == '.';
  });
}

inline bool is_capitalized(std::string_view w) {
  return !w.empty() && w.front() >= 'A' && w.front() <= 'Z';
}

// At least one cased letter, none of them lowercase.
inline bool is_uppercased(std::string_view w) {
  bool cased = false;
  for (char c : w) {
    if (c >= 'a' && c <= 'z') return false;
    if (c >= 'A' && c <= 'Z') cased = true;
  }
  return cased;
}

}  // namespace text

// `padded` comes from pad_sentence(); `i` indexes a real word in it
// (1 <= i <= padded.size() - 2).
inline std::vector<std::string> extract_features(std::span<const Token> padded,
                                                 std::size_t i) {
  static constexpr std::string_view kOffsetTag[] = {"-1", "0", "+1"};
  const std::size_t n = padded.size() - 2;

  std::vector<std::string> f;
  f.reserve(24);
  f.emplace_back("bias");
  for (int off = -1; off <= 1; ++off) {
    const std::size_t j = i + off;
    const Token& tok = padded[j];
    const std::string tag(kOffsetTag[off + 1]);
    f.push_back("w" + tag + "=" + text::ascii_lower(tok.word));
    f.push_back("p" + tag + "=" + tok.pos);
    f.push_back("p" + tag + "pre2=" + text::utf8_prefix(tok.pos, 2));
    if (j == 0 || j > n) continue;
    if (j == 1) f.push_back("first" + tag + "=true");
    if (j == n) f.push_back("last" + tag + "=true");
    if (text::is_number(tok.word)) f.push_back("num" + tag + "=true");
    if (text::is_capitalized(tok.word)) f.push_back("cap" + tag + "=true");
    if (text::is_uppercased(tok.word)) f.push_back("upper" + tag + "=true");
  }
  const std::string lw = text::ascii_lower(padded[i].word);
  f.push_back("suf3=" + text::utf8_suffix(lw, 3));
  f.push_back("suf2=" + text::utf8_suffix(lw, 2));
  return f;
}

}  // namespace treeseq
