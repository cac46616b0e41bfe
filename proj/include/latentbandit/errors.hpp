#pragma once

#include <stdexcept>
#include <string>

namespace latentbandit {

/// Malformed or contradictory configuration (graph spec, partition, policy).
class InvalidConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact combinatorial search refused because the graph exceeds the limit.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A probability vector that does not lie in the simplex.
class InvalidDistribution : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical routine failed to reach the requested accuracy.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latentbandit
