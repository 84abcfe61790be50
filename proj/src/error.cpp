#include "fracosc/error.hpp"

namespace fracosc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "domain";
    case ErrorCode::GeneralizedOnly: return "generalized-only";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Regime: return "regime";
    case ErrorCode::Quadrature: return "quadrature";
    case ErrorCode::Embedding: return "embedding";
    case ErrorCode::Truncation: return "truncation";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::Divergence: return "divergence";
    case ErrorCode::Range: return "range";
  }
  return "unknown";
}

}  // namespace fracosc
