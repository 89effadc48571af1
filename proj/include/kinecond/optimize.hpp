#pragma once

// Global search for the posture whose normalized Jacobian lies closest to the
// isotropic model matrix. theta_1 only rotates the chain rigidly and leaves z
// unchanged, so the search runs over theta_2..theta_n: a dense grid on the
// torus [0, 2pi)^(n-1), then Nelder-Mead from every grid local minimum.

#include "kinecond/kinematics.hpp"
#include "kinecond/planar_geom.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace kinecond {

struct OptimizationConfig {
  /// Grid spacing in radians per axis. Unset: 2pi/720 for up to two
  /// conditioning joints, 2pi/180 for three. Four or more conditioning joints
  /// require an explicit value.
  std::optional<double> grid_resolution;
  double refine_tolerance = 1e-12;
  std::size_t max_refine_iters = 200;
  double theta1 = 0.0;
  /// 0 = hardware concurrency. Results do not depend on this.
  std::size_t threads = 0;
  /// Upper bound on grid samples.
  std::size_t max_grid_points = 40'000'000;
  /// Minima within this z of the best are reported as equivalent optima.
  double tie_tolerance = 1e-9;
};

struct LocalMinimum {
  Posture theta;
  double z = 0.0;
};

struct OptimumPosture {
  Posture theta{{}};
  double z_min = 0.0;
  /// The characteristic length when the optimum is global.
  double l_P = 0.0;
  double alpha_opt = 0.0;
  /// Grid no coarser than 2 degrees per axis, every grid local minimum refined.
  bool is_global = false;
  /// Distinct refined minima sorted by (z, theta), angles in [0, 2pi).
  std::vector<LocalMinimum> all_local_minima;
  /// Postures within tie_tolerance of z_min (includes `theta`).
  std::vector<Posture> equivalent_optima;
  std::size_t grid_samples_per_axis = 0;
};

/// Samples per axis implied by the config for `conditioning_joints` axes.
/// Throws ConfigError when the grid is unusable or too large.
std::size_t grid_samples_per_axis(const OptimizationConfig& cfg, std::size_t conditioning_joints);

OptimumPosture optimum_posture(const Manipulator& m, const PointSet2& s, const OptimizationConfig& cfg = {});

/// l_P at the globally optimum posture.
double characteristic_length(const Manipulator& m, const PointSet2& s, const OptimizationConfig& cfg = {});

/// z at the posture. z reaches its global maximum at rank-two singularities,
/// so larger z means closer to singular in this index's sense.
double singularity_proximity(const Manipulator& m, const Posture& p, const PointSet2& s);

}  // namespace kinecond
