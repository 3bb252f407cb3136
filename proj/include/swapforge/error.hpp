// Copyright 2026 The swapforge Authors
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
#include <string_view>

namespace swapforge {

enum class ErrorCode {
    ShapeMismatch,
    BadIndex,
    NotHermitian,
    NotPsd,
    DivisionByZero,
    DegenerateDenominator,
    ZeroTrace,
    BadDimension,
    BadParameter,
    IncompletePovm,
    InvalidPovm,
    IncompleteBranchSet,
    TooManyBranches,
    ConfigParse,
    FileFormat,
    IO,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::IncompletePovm: return "IncompletePovm";
    case ErrorCode::InvalidPovm: return "InvalidPovm";
    case ErrorCode::IncompleteBranchSet: return "IncompleteBranchSet";
    case ErrorCode::TooManyBranches: return "TooManyBranches";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::FileFormat: return "FileFormat";
    case ErrorCode::IO: return "IO";
    }
    return "Unknown";
}

/// Library exception. Every failure path carries a machine-readable code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

} // namespace swapforge
