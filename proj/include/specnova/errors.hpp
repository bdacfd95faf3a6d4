#pragma once

#include <stdexcept>
#include <string>

namespace specnova {

/// Thrown when a caller hands an operation a value outside its domain
/// (unknown residue, invalid modification site, non-positive mass, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unrecoverable parse failure of a whole stream or file.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Remote proteome retrieval failed; nothing was returned.
class FetchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A serialized artifact (index cache) cannot be used with this build.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace specnova
