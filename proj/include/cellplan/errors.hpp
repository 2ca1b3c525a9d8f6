#pragma once

#include <stdexcept>
#include <string>

namespace cellplan {

/// Structured error for malformed input files. Carries the 1-based line
/// number where parsing failed; the message already embeds it.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    explicit ParseError(const std::string& what) : std::runtime_error(what), line_(0) {}

    int line() const { return line_; }

private:
    int line_;
};

} // namespace cellplan
