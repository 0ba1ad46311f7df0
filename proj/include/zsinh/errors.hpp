#pragma once

#include <stdexcept>
#include <string>

namespace zsinh {

// Parameters outside the mathematical domain of an operation: bad model
// parameters, a contour leaving the region of analyticity, n <= m, a branch
// cut hit by a quadrature node.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The requested feature exists in the model family but is not implemented.
class unsupported_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Malformed configuration or incompatible option combination.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The computation ran but its result cannot be trusted: winding of ln A,
// overflow of z^{-n-1}, oracle stagnation.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zsinh
