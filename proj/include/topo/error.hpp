#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace topo {

enum class ErrorCode {
    EmptySimplex,
    DuplicateVertex,
    NoFaces,
    IndexOutOfRange,
    EmptyInput,
    InvalidFiltration,
    InsufficientSamples,
    NonFinitePhase,
    StateDimensionMismatch,
    SectionShapeMismatch,
    NotSimpleLoop,
    InvalidArgument,
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptySimplex: return "EmptySimplex";
    case ErrorCode::DuplicateVertex: return "DuplicateVertex";
    case ErrorCode::NoFaces: return "NoFaces";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidFiltration: return "InvalidFiltration";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonFinitePhase: return "NonFinitePhase";
    case ErrorCode::StateDimensionMismatch: return "StateDimensionMismatch";
    case ErrorCode::SectionShapeMismatch: return "SectionShapeMismatch";
    case ErrorCode::NotSimpleLoop: return "NotSimpleLoop";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace topo
