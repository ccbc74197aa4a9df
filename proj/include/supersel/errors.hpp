#ifndef SUPERSEL_ERRORS_HPP
#define SUPERSEL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace supersel {

/// Mismatched site counts, site dimensions, or matrix shapes.
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// A requested object exceeds a configured size cap (kept-dimension cap,
/// realization cap, branch-count cap).
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A state with zero norm where a normalizable state is required.
struct DegenerateStateError : std::runtime_error {
  explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

/// Parameter outside its admissible range (overlaps beyond 1, negative rates,
/// truncation dimension out of range, labels out of range).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Operator-text syntax error; `offset` is the byte position in the input.
struct SyntaxError : std::runtime_error {
  SyntaxError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

}  // namespace supersel

#endif
