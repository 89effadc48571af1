#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace kinecond {

struct NelderMeadOptions {
  /// Edge length of the initial axis-aligned simplex.
  double initial_step = 1e-2;
  /// Stop when max f - min f over the simplex falls below this...
  double f_tolerance = 1e-12;
  /// ...and the simplex diameter below this, or the diameter alone below
  /// `x_floor`.
  double x_tolerance = 1e-9;
  double x_floor = 1e-10;
  std::size_t max_iterations = 200;
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization (standard coefficients 1, 2, 1/2,
/// 1/2). Deterministic: ties are broken by vertex index.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options);

}  // namespace kinecond
