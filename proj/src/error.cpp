#include "commentrisk/error.hpp"

namespace commentrisk {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::RepoNotFound: return "RepoNotFound";
    case ErrorKind::EmptyRepo: return "EmptyRepo";
    case ErrorKind::UnknownCommit: return "UnknownCommit";
    case ErrorKind::PathAbsentAtRevision: return "PathAbsentAtRevision";
    case ErrorKind::NoParent: return "NoParent";
    case ErrorKind::GitFailure: return "GitFailure";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ZeroCell: return "ZeroCell";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::MalformedResponse: return "MalformedResponse";
    case ErrorKind::EndpointUnavailable: return "EndpointUnavailable";
    case ErrorKind::RateLimited: return "RateLimited";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::OutputExists: return "OutputExists";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace commentrisk
