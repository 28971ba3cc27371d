#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace treeseq {

enum class ErrorKind {
  UnbalancedBrackets,
  EmptyTree,
  LeafWithoutWord,
  InvalidSymbol,
  MalformedTree,
  IndexOutOfRange,
  UnaryBranchPresent,
  NotStrictlyKary,
  NonPositivePrefixSum,
  LengthMismatch,
  MalformedLabel,
  MalformedInput,
  TokenMismatch,
  EmptyCorpus,
  MixedSchemes,
  UnreadableFile,
  VersionMismatch,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnbalancedBrackets: return "UnbalancedBrackets";
    case ErrorKind::EmptyTree: return "EmptyTree";
    case ErrorKind::LeafWithoutWord: return "LeafWithoutWord";
    case ErrorKind::InvalidSymbol: return "InvalidSymbol";
    case ErrorKind::MalformedTree: return "MalformedTree";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::UnaryBranchPresent: return "UnaryBranchPresent";
    case ErrorKind::NotStrictlyKary: return "NotStrictlyKary";
    case ErrorKind::NonPositivePrefixSum: return "NonPositivePrefixSum";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::MalformedLabel: return "MalformedLabel";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::TokenMismatch: return "TokenMismatch";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::MixedSchemes: return "MixedSchemes";
    case ErrorKind::UnreadableFile: return "UnreadableFile";
    case ErrorKind::VersionMismatch: return "VersionMismatch";
  }
  return "Unknown";
}

// Every failure in the library is reported through this type. `offset` is
// a byte offset into the offending input line when one is meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(format(kind, message, offset)),
        kind_(kind),
        offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message,
                            std::optional<std::size_t> offset) {
    std::string out{to_string(kind)};
    out += ": ";
    out += message;
    if (offset) out += " (at byte " + std::to_string(*offset) + ")";
    return out;
  }

  ErrorKind kind_;
  std::optional<std::size_t> offset_;
};

}  // namespace treeseq
