// Copyright 2026 The Dialectic Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace dialectic {

enum class ErrorCode {
    kOutOfRange,
    kInvalidReplacement,
    kInvalidExcision,
    kParse,
    kSchema,
    kValidationScope,
    kRejectedTable,
    kMissingReplacement,
    kCyclicReplacement,
    kInvariant,
    kDomain,
    kTranslation,
    kUndefinedPosition,
    kAlignmentScope,
    kRejectedInput,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the C
/// API maps them onto dl_status values one to one.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failures keep the 1-based line and column of the offending token.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorCode::kParse, "line " + std::to_string(line) + ", column " +
                                       std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace dialectic
