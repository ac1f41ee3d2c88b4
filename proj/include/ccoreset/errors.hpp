#pragma once

#include <stdexcept>
#include <string>

namespace ccoreset {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An enumeration or candidate-generation step would exceed its configured cap.
struct CapExceeded : Error {
    using Error::Error;
};

/// Malformed input file or stream record. Carries a 1-based line number when known.
struct FormatError : Error {
    explicit FormatError(const std::string& msg, long line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_number(line) {}
    long line_number = 0;
};

}  // namespace ccoreset
