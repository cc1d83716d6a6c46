#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gvf {

// Error raised by the front end for malformed input text.
struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line, int col, const std::string &msg)
      : std::runtime_error(msg), line(line), col(col) {}
};

// Error raised when the program text parses but violates a language
// invariant (duplicate SSA definition, unknown callee, missing return, ...).
struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the complete solver when a configured resource cap is hit.
// The solver never returns a wrong verdict; it fails loudly instead.
struct SolverOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by demand clients for malformed queries (unknown seed, ...).
struct QueryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the reference interpreter when the atom budget is exceeded.
struct OracleLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace gvf
