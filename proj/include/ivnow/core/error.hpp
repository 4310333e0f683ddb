#pragma once

#include <stdexcept>
#include <string>

namespace ivnow {

// Error taxonomy. `input` errors map to CLI exit code 2 (bad files, bad
// config, degenerate data the caller handed us); `numeric` errors map to
// exit code 3 (a computation could not proceed).
enum class Err {
    parse_error,
    config_error,
    unknown_symbol,
    schema_mismatch,
    series_too_short,
    calendar_mismatch,
    empty_side,
    no_paired_strike,
    no_expiries,
    empty_data,
    too_few_observations,
    not_enough_data,
    insufficient_stocks,
    single_class,
    degenerate_model,
    numeric_failure,
};

enum class ErrorKind { input, numeric };

constexpr ErrorKind error_kind(Err e) {
    switch (e) {
        case Err::degenerate_model:
        case Err::numeric_failure:
            return ErrorKind::numeric;
        default:
            return ErrorKind::input;
    }
}

const char* error_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message),
          code_(code) {}

    Err code() const { return code_; }
    ErrorKind kind() const { return error_kind(code_); }

private:
    Err code_;
};

[[noreturn]] inline void raise(Err code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace ivnow
