#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace symkron {

// A request would materialize more data than the configured cap allows,
// or an exact integer result does not fit 64 bits.
class SizeError : public std::runtime_error {
 public:
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// Dimensions, orders, or lengths of operands do not match.
class ShapeError : public std::runtime_error {
 public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// A vector claimed to lie in the symmetric subspace fails the component
// equality test; carries the first offending index pair (1-based).
class SymmetryError : public std::runtime_error {
 public:
  SymmetryError(const std::string& what, std::int64_t j, std::int64_t jprime)
      : std::runtime_error(what), index_a(j), index_b(jprime) {}
  std::int64_t index_a;
  std::int64_t index_b;
};

// Wave packet parameter matrices fail the compatibility conditions.
class ParamError : public std::runtime_error {
 public:
  explicit ParamError(const std::string& what) : std::runtime_error(what) {}
};

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what)
      : std::runtime_error(what) {}
};

// Redundant computation routes that must coincide do not.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace symkron
