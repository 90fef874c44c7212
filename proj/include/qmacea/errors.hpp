// Copyright 2026 The qmacea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qmacea {

enum class ErrorCode {
    DimensionCap,
    DimensionMismatch,
    FactorError,
    NotHermitian,
    InvalidState,
    BadDistribution,
    LabelError,
    AlphabetError,
    IndexError,
    DegenerateDecoder,
    BadOperands,
    NotDephasing,
    ParseError,
};

inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionCap: return "DimensionCap";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::FactorError: return "FactorError";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::InvalidState: return "InvalidState";
        case ErrorCode::BadDistribution: return "BadDistribution";
        case ErrorCode::LabelError: return "LabelError";
        case ErrorCode::AlphabetError: return "AlphabetError";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::DegenerateDecoder: return "DegenerateDecoder";
        case ErrorCode::BadOperands: return "BadOperands";
        case ErrorCode::NotDephasing: return "NotDephasing";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (notably the CLI exit-code contract) can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace qmacea
