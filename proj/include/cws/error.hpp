#pragma once

#include <stdexcept>
#include <string>

namespace cws {

enum class Errc {
    OutOfRange,
    EmptyInput,
    DegenerateInput,
    InvalidParameter,
    UndefinedSimilarity,
    IncomparableFingerprints,
    ParseError,
    DomainError,
    FormatError,
    IncompatibleFormat,
    IntegrityError,
    IoError,
    UsageError,
};

const char* errc_name(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers which contract was broken.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

/// Parse failure carrying the 1-based line number of the offending input line.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error(Errc::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

} // namespace cws
