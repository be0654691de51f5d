#pragma once

#include <stdexcept>
#include <string>

namespace specfid {

// Error taxonomy maps 1:1 onto CLI exit codes: validation = 1,
// provider failure = 2, frozen-set violation = 3.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FrozenSetViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse errors carry the offending source line (1-based).
struct ParseError : ValidationError {
    ParseError(const std::string& msg, int line_no)
        : ValidationError(msg + " (line " + std::to_string(line_no) + ")"),
          line(line_no) {}
    int line;
};

}  // namespace specfid
