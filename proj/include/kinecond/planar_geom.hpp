#pragma once

// Isotropic point sets in the dimensionless plane: moments, isotropy checks
// and the rigid transformations that preserve isotropy.

#include "kinecond/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace kinecond {

using Point2 = Vec2;

/// Ordered planar point set, n >= 2, all coordinates finite. Order matters:
/// a relabeled set is a different value with the same moment statistics.
class PointSet2 {
 public:
  explicit PointSet2(std::vector<Point2> points);

  std::size_t size() const { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point2> points() const { return points_; }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  friend bool operator==(const PointSet2& a, const PointSet2& b) { return a.points_ == b.points_; }

 private:
  std::vector<Point2> points_;
};

struct IsotropyReport {
  Mat2 second_moment;
  double eigenvalue_low = 0.0;
  double eigenvalue_high = 0.0;
  /// (high - low) / max(high, eps)
  double relative_spread = 0.0;
  bool is_isotropic = false;
};

inline constexpr double kDefaultIsotropyTolerance = 1e-9;

Point2 centroid(const PointSet2& s);

/// Sum of (p_k - c)(p_k - c)^T about the centroid.
Mat2 second_moment(const PointSet2& s);

/// Root-mean-square distance of the points from `about`.
double d_rms(const PointSet2& s, const Point2& about);

/// tr(M) 1 - M.
Mat2 geometric_inertia(const PointSet2& s);

/// Eigen-decomposes the second moment; isotropic iff the relative eigenvalue
/// spread is at most `tol`. Throws InvalidArgument for tol <= 0.
IsotropyReport check_isotropy(const PointSet2& s, double tol = kDefaultIsotropyTolerance);

/// Phase that reproduces the standard 3-point model set for n = 3 and puts
/// the last vertex at -pi/2 for every n.
double default_trivial_phase(std::size_t n);

/// Vertices of a regular n-gon of radius sqrt(2), counterclockwise from
/// `phase`, so that sum k k^T = n 1 and sum k = 0. Throws for n < 3.
PointSet2 trivial_set(std::size_t n, double phase);
PointSet2 trivial_set(std::size_t n);

/// Rigid rotation of every point by `alpha` about `about`.
PointSet2 rotate_set(const PointSet2& s, double alpha, const Point2& about);

/// Concatenation of two sets sharing a centroid (within `tol`, absolute).
/// Throws PreconditionViolation otherwise.
PointSet2 union_sets(const PointSet2& s1, const PointSet2& s2, double tol = 1e-9);

/// Mirror image about the line through the centroid at `axis_angle`.
PointSet2 reflect_set(const PointSet2& s, double axis_angle);

/// Point i of the result is point perm[i] of `s`. `perm` must be a
/// permutation of 0..n-1.
PointSet2 relabel(const PointSet2& s, std::span<const std::size_t> perm);

/// trivial_set(n) for n >= 3. For n = 2, where no isotropic set exists, the
/// antipodal pair (0, +-sqrt 2), which keeps sum |k|^2 = 2n.
PointSet2 default_model_set(std::size_t n);

/// Translates to zero centroid and rescales so that sum k k^T = n 1.
/// A two-point set is only centred and scaled to sum |k|^2 = 2n.
/// `rescaled` reports whether anything beyond rounding changed.
/// Throws PreconditionViolation if the set is not isotropic within `tol`.
struct NormalizedSet {
  PointSet2 set;
  bool rescaled = false;
};
NormalizedSet normalize_model_set(const PointSet2& s, double tol = kDefaultIsotropyTolerance);

/// Throws InvalidArgument unless `perm` is a permutation of 0..n-1.
void validate_permutation(std::span<const std::size_t> perm, std::size_t n);

}  // namespace kinecond
