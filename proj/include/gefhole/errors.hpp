#pragma once

#include <stdexcept>
#include <string>

namespace gefhole {

/// Bad arguments or configuration. The CLI maps this to exit code 2.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical precondition or assertion failed. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateLeadingCoefficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NearCircleRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InfiniteEnergy : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NegativeDiscriminant : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CoincidentZeros : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InfeasibleStart : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

}  // namespace gefhole
