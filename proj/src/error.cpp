#include "entroframe/error.hpp"

namespace entroframe {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SectorViolation: return "SectorViolation";
    case ErrorKind::DegenerateDirections: return "DegenerateDirections";
    case ErrorKind::WeightOutOfRange: return "WeightOutOfRange";
    case ErrorKind::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorKind::InvalidExponents: return "InvalidExponents";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::DomainTruncation: return "DomainTruncation";
    case ErrorKind::ReferenceMismatch: return "ReferenceMismatch";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::ZeroScale: return "ZeroScale";
    case ErrorKind::Normalization: return "Normalization";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace entroframe
