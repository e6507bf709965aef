#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nilinv {

/// A computation was refused because its predicted cost exceeds the
/// configured budget (CLI exit code 4).
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed user input (spec strings, files); carries a 0-based position
/// into the offending text when known (CLI exit code 3).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg, std::size_t position = npos)
        : std::runtime_error(msg), pos(position) {}
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t pos;
};

} // namespace nilinv
