#pragma once

#include <stdexcept>
#include <string>

namespace liberation {

/// Bad user input: out-of-range parameters, malformed configs, inconsistent measures.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A formula was evaluated outside the region where it is defined
/// (negative radicand, point on a cut, seed outside the flow domain).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Something that cannot happen for valid input did happen: non-finite
/// integrator state, non-real traces, Newton divergence.
class NumericalHealthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace liberation
