#pragma once

#include <stdexcept>
#include <string>

namespace zetalab {

enum class ErrorCode {
  UnsupportedHeight = 1,
  BudgetExceeded,
  CapacityExceeded,
  TableTooSmall,
  DomainError,
  IllConditioned,
  TailDiverges,
  InvalidArgument,
  ConfigInvalid,
  SchemaMismatch,
  IoError,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const char* message) {
  if (!condition) fail(code, message);
}

}  // namespace zetalab
