#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ar {

enum class ErrorCode {
    InvalidDeclaration,
    MetricMismatch,
    NotEnumerable,
    OutOfDomain,
    SpaceMismatch,
    NotInstantiable,
    MissingInstantiation,
    EmptyDomain,
    TheoryNotValidated,
    NotProductSpace,
    TooLarge,
    SyntaxError,
    UnknownReference,
    DuplicateIdentifier,
    VersionUnsupported,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above, so
/// callers (the CLI, the Python bindings) can map them without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse diagnostics: a location inside the scenario text plus the identifier at fault.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, const std::string& message, std::size_t line, std::size_t column,
               std::string identifier = {})
        : Error(code, message + " (line " + std::to_string(line) + ", column " +
                          std::to_string(column) + ")"),
          line_(line), column_(column), identifier_(std::move(identifier))
    {
    }

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& identifier() const noexcept { return identifier_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string identifier_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

}  // namespace ar
