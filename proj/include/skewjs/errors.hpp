#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skewjs {

/// Two operands live on simplices of different dimension.
class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t lhs, std::size_t rhs)
      : std::invalid_argument("dimension mismatch: " + std::to_string(lhs) + " vs " +
                              std::to_string(rhs)) {}
};

/// Malformed input file or text.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_same_dimension(std::size_t lhs, std::size_t rhs) {
  if (lhs != rhs) throw DimensionMismatch(lhs, rhs);
}

}  // namespace skewjs
