#include "error.hpp"

namespace zetalab {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnsupportedHeight: return "UnsupportedHeight";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::TableTooSmall: return "TableTooSmall";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::TailDiverges: return "TailDiverges";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(error_name(code)) + ": " + message);
}

}  // namespace zetalab
