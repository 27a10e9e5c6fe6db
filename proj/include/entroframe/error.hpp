#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entroframe {

enum class ErrorKind {
  SectorViolation,
  DegenerateDirections,
  WeightOutOfRange,
  CompatibilityViolation,
  InvalidExponents,
  NotSPD,
  DomainTruncation,
  ReferenceMismatch,
  Singular,
  ZeroScale,
  Normalization,
  InvalidGrid,
  InvalidArgument,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace entroframe
