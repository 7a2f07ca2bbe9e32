#pragma once

#include <stdexcept>
#include <string>

namespace weil {

/// Failure categories. The CLI maps each category onto an exit code.
enum class ErrorKind {
  OrderMismatch,
  Degenerate,
  NotWeilIndex,
  WellDefinedness,
  Size,
  Precision,
  Unsupported,
  Domain,
  Validation,
  RelationViolation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

/// 1 for verification failures, 2 for bad input, 3 for precision/size limits.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace weil
