#pragma once

// z over the (theta_2, theta_3) torus: grid evaluation, workspace area below a
// threshold, and marching-squares isocontours.

#include "kinecond/kinematics.hpp"
#include "kinecond/planar_geom.hpp"
#include "kinecond/types.hpp"

#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

namespace kinecond {

struct GridExtremum {
  double value = 0.0;
  std::size_t i = 0;  ///< theta_2 index
  std::size_t j = 0;  ///< theta_3 index
  double theta2 = 0.0;
  double theta3 = 0.0;
};

/// values are row-major: values[i * resolution + j] = z(theta2_axis[i], theta3_axis[j]).
struct ZGrid {
  std::size_t resolution = 0;
  std::vector<double> theta2_axis;
  std::vector<double> theta3_axis;
  std::vector<double> values;
  GridExtremum z_min;
  GridExtremum z_max;

  double at(std::size_t i, std::size_t j) const { return values[i * resolution + j]; }
  double step() const { return kTwoPi / static_cast<double>(resolution); }
};

struct GridOptions {
  double theta1 = 0.0;
  /// theta_4..theta_n for chains with more than three joints; zeros if empty.
  std::vector<double> fixed_trailing;
  std::size_t threads = 0;
};

/// Throws ConfigError for resolution < 8 or fewer than 3 joints.
ZGrid evaluate_grid(const Manipulator& m, const PointSet2& s, std::size_t resolution, const GridOptions& options = {});

/// Wraps precomputed values (row-major, resolution^2 finite entries).
ZGrid make_grid(std::size_t resolution, std::vector<double> values);

struct WorkspaceMeasure {
  double z_M = 0.0;
  double area_fraction = 0.0;
  std::size_t cell_count = 0;
};

/// Fraction of lattice cells with z <= z_M. Throws EmptyRegion if
/// z_M <= z_min.
WorkspaceMeasure workspace_area(const ZGrid& g, double z_M);

struct Contour {
  double level = 0.0;
  /// Closed and contractible on the torus. Curves that wrap around the torus
  /// (periodic) or run off the window in no-wrap mode are open.
  bool closed = false;
  /// Unwrapped (theta2, theta3) coordinates: consecutive points never jump by
  /// a period, so coordinates may leave [0, 2pi).
  std::vector<Vec2> points;
};

struct ContourOptions {
  /// Treat the grid as a torus. false: flat [0, 2pi) x [0, 2pi) window, no
  /// cells across the seam.
  bool wrap = true;
};

/// Marching squares with the cell-centre average resolving saddles. Levels
/// outside the open interval (z_min, z_max) produce no curves. Throws
/// ConfigError for an empty level list or a non-finite level.
std::vector<Contour> extract_isocontours(const ZGrid& g, std::span<const double> levels,
                                         const ContourOptions& options = {});

struct EllipseFit {
  Vec2 center = Vec2::Zero();
  double semi_major = 0.0;
  double semi_minor = 0.0;
  /// Angle of the major axis.
  double orientation = 0.0;
  /// semi_major / semi_minor >= 1
  double axis_ratio = 1.0;
  double eccentricity = 0.0;
};

/// Ellipse with the same area moments (up to second order) as the closed
/// polygon. Throws InvalidArgument for fewer than 3 vertices or zero area.
EllipseFit fit_ellipse(std::span<const Vec2> polygon);

/// Ellipse with the same second moments as the lattice cells with z <= z_M
/// in the connected region containing the grid minimum (torus adjacency).
EllipseFit fit_region_ellipse(const ZGrid& g, double z_M);

/// `theta2_rad,theta3_rad,z` header, row-major, LF, 17 significant digits.
void write_grid_csv(std::ostream& os, const ZGrid& g);

}  // namespace kinecond
