#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace causalgap {

enum class ErrorCode {
    CycleDetected,
    DanglingEdge,
    DuplicateLabel,
    DuplicateEdge,
    SelfLoop,
    UnknownNode,
    OverlappingSets,
    EmptySet,
    UnknownVariable,
    MissingVariable,
    VariableMismatch,
    DomainMismatch,
    ZeroProbabilityEvent,
    NotExogenous,
    NotNormalized,
    TooManyVariables,
    IncompleteVector,
    InvalidTable,
    InvalidCertificate,
    NodeMismatch,
    TooLarge,
    UnknownEntry,
    ParseError,
};

inline std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::OverlappingSets: return "OverlappingSets";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::MissingVariable: return "MissingVariable";
    case ErrorCode::VariableMismatch: return "VariableMismatch";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case ErrorCode::NotExogenous: return "NotExogenous";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TooManyVariables: return "TooManyVariables";
    case ErrorCode::IncompleteVector: return "IncompleteVector";
    case ErrorCode::InvalidTable: return "InvalidTable";
    case ErrorCode::InvalidCertificate: return "InvalidCertificate";
    case ErrorCode::NodeMismatch: return "NodeMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnknownEntry: return "UnknownEntry";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// All library failures are reported through this exception; `code()` names
/// the failure class so callers can branch without parsing the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    /// The text without the code prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorCode code_;
    std::string message_;
};

} // namespace causalgap
