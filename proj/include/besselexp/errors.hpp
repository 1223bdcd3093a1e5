#ifndef BESSELEXP_ERRORS_HPP
#define BESSELEXP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace besselexp {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure (root bracket, quadrature) failed to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observed data and prior produce a non-normalizable posterior.
class InvalidPosterior : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace besselexp

#endif  // BESSELEXP_ERRORS_HPP
