#include "weil/error.hpp"

namespace weil {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::OrderMismatch: return "order-mismatch";
    case ErrorKind::Degenerate: return "degenerate";
    case ErrorKind::NotWeilIndex: return "not-a-weil-index";
    case ErrorKind::WellDefinedness: return "ill-defined";
    case ErrorKind::Size: return "size";
    case ErrorKind::Precision: return "precision";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::RelationViolation: return "relation-violation";
  }
  return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotWeilIndex:
    case ErrorKind::RelationViolation:
      return 1;
    case ErrorKind::Size:
    case ErrorKind::Precision:
      return 3;
    default:
      return 2;
  }
}

}  // namespace weil
