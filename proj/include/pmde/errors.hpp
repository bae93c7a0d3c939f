// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the pmde authors

#pragma once

#include <stdexcept>
#include <string>

namespace pmde {

enum class ErrorCode {
    parse_error,
    validation_error,
    invalid_config,
    arity_mismatch,
    non_unitary_input,
    grid_too_coarse,
    degenerate_pmd,
    step_too_large,
    neutral_unavailable,
    length_mismatch,
    io_error,
    internal_error,
};

inline const char* name_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::validation_error: return "ValidationError";
        case ErrorCode::invalid_config: return "InvalidConfig";
        case ErrorCode::arity_mismatch: return "ArityMismatch";
        case ErrorCode::non_unitary_input: return "NonUnitaryInput";
        case ErrorCode::grid_too_coarse: return "GridTooCoarse";
        case ErrorCode::degenerate_pmd: return "DegeneratePmd";
        case ErrorCode::step_too_large: return "StepTooLarge";
        case ErrorCode::neutral_unavailable: return "NeutralUnavailable";
        case ErrorCode::length_mismatch: return "LengthMismatch";
        case ErrorCode::io_error: return "IoError";
        case ErrorCode::internal_error: return "InternalError";
    }
    return "UnknownError";
}

/// Exception carrying a machine-readable error code next to the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(name_of(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with the source position that caused it.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error(ErrorCode::parse_error,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace pmde
