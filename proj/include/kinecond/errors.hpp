#pragma once

#include <stdexcept>
#include <string>

namespace kinecond {

/// Malformed arguments: dimension mismatches, non-finite values, bad counts.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on the inputs does not hold (e.g. a model set
/// that is not isotropic, union of sets with different centroids).
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unusable search / grid configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Threshold below the grid minimum: nothing to measure.
class EmptyRegion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Base for failures caused by the numbers themselves rather than the inputs'
/// shape. The CLI maps these to exit code 3.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sum of projections of r_j onto the (rotated) model vectors is not positive,
/// so the conditioning length is undefined or nonpositive.
class DegenerateAlignment : public NumericalDegeneracy {
 public:
  using NumericalDegeneracy::NumericalDegeneracy;
};

/// Both sums defining the optimal model rotation vanish; every angle is
/// stationary.
class IndeterminateRotation : public NumericalDegeneracy {
 public:
  using NumericalDegeneracy::NumericalDegeneracy;
};

}  // namespace kinecond
