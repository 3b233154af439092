#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bmep {

/// Precondition violation on a documented argument range.
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed textual input; position is a 0-based byte offset when known.
struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// Vertex recognition failed: the vector is not the coordinate vector of any tree.
struct NotAVertex : std::runtime_error {
  explicit NotAVertex(const std::string& reason)
      : std::runtime_error("not a tree vertex: " + reason) {}
};

/// A constraint that must hold at every vertex was violated by one.
struct ValidityError : std::runtime_error {
  explicit ValidityError(const std::string& what) : std::runtime_error(what) {}
};

/// A step/node/time budget ran out; state may have been checkpointed.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bmep
