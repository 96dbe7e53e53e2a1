#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jsr {

enum class ErrorCode {
    InvalidArgument,
    BudgetExceeded,
    HypothesisUnmet,
    Indeterminate,
    NumericalFailure,
    NotFound,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` lets callers map
/// failures onto exit statuses without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace jsr
