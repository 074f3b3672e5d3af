#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace commentrisk {

enum class ErrorKind {
    RepoNotFound,
    EmptyRepo,
    UnknownCommit,
    PathAbsentAtRevision,
    NoParent,
    GitFailure,
    InvalidParameter,
    DivisionByZero,
    ZeroCell,
    LengthMismatch,
    EmptyInput,
    ParseError,
    MalformedResponse,
    EndpointUnavailable,
    RateLimited,
    ConfigError,
    OutputExists,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// ParseError carrying the 1-based line number of the offending input line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace commentrisk
