#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clonek {

// Raised for malformed input text or input files. Carries a byte offset
// into the source; line/column are derived when the source is available.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& message, std::size_t pos)
      : std::runtime_error(message), position(pos) {}
};

// Base class for errors detected after parsing: evaluation against a
// structure, bound checks, symbol resolution.
struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EnvTooShort : SemanticError {
  using SemanticError::SemanticError;
};

struct UnknownSymbol : SemanticError {
  using SemanticError::SemanticError;
};

struct BoundExceeded : SemanticError {
  using SemanticError::SemanticError;
};

struct DomainMismatch : SemanticError {
  using SemanticError::SemanticError;
};

}  // namespace clonek
