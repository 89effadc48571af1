#include "kinecond/planar_geom.hpp"

#include "kinecond/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kinecond {

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double wrap_pi(double angle) {
  double w = wrap_two_pi(angle);
  if (w > kPi) w -= kTwoPi;
  return w;
}

PointSet2::PointSet2(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 2) {
    throw InvalidArgument("point set needs at least 2 points, got " + std::to_string(points_.size()));
  }
  for (const auto& p : points_) {
    if (!p.allFinite()) throw InvalidArgument("point set contains a non-finite coordinate");
  }
}

Point2 centroid(const PointSet2& s) {
  Point2 sum = Point2::Zero();
  for (const auto& p : s) sum += p;
  return sum / static_cast<double>(s.size());
}

Mat2 second_moment(const PointSet2& s) {
  const Point2 c = centroid(s);
  Mat2 m = Mat2::Zero();
  for (const auto& p : s) {
    const Vec2 d = p - c;
    m.noalias() += d * d.transpose();
  }
  // exact symmetry
  m(1, 0) = m(0, 1);
  return m;
}

double d_rms(const PointSet2& s, const Point2& about) {
  double sum = 0.0;
  for (const auto& p : s) sum += (p - about).squaredNorm();
  return std::sqrt(sum / static_cast<double>(s.size()));
}

Mat2 geometric_inertia(const PointSet2& s) {
  const Mat2 m = second_moment(s);
  return m.trace() * Mat2::Identity() - m;
}

IsotropyReport check_isotropy(const PointSet2& s, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("isotropy tolerance must be positive");
  IsotropyReport report;
  report.second_moment = second_moment(s);
  Eigen::SelfAdjointEigenSolver<Mat2> eig(report.second_moment, Eigen::EigenvaluesOnly);
  report.eigenvalue_low = eig.eigenvalues()(0);
  report.eigenvalue_high = eig.eigenvalues()(1);
  const double denom = std::max(report.eigenvalue_high, std::numeric_limits<double>::min());
  report.relative_spread = (report.eigenvalue_high - report.eigenvalue_low) / denom;
  report.is_isotropic = report.eigenvalue_high > 0.0 && report.relative_spread <= tol;
  return report;
}

double default_trivial_phase(std::size_t n) {
  return -kPi / 2.0 + kTwoPi / static_cast<double>(n);
}

PointSet2 trivial_set(std::size_t n, double phase) {
  if (n < 3) throw InvalidArgument("trivial isotropic set needs n >= 3, got " + std::to_string(n));
  const double radius = std::sqrt(2.0);
  std::vector<Point2> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = phase + kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    pts.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
  }
  return PointSet2(std::move(pts));
}

PointSet2 trivial_set(std::size_t n) { return trivial_set(n, default_trivial_phase(n)); }

PointSet2 rotate_set(const PointSet2& s, double alpha, const Point2& about) {
  const Mat2 r = rotation(alpha);
  std::vector<Point2> pts;
  pts.reserve(s.size());
  for (const auto& p : s) pts.emplace_back(about + r * (p - about));
  return PointSet2(std::move(pts));
}

PointSet2 union_sets(const PointSet2& s1, const PointSet2& s2, double tol) {
  const Point2 c1 = centroid(s1);
  const Point2 c2 = centroid(s2);
  if ((c1 - c2).norm() > tol) {
    throw PreconditionViolation("union of point sets requires a common centroid; centroids differ by " +
                                std::to_string((c1 - c2).norm()));
  }
  std::vector<Point2> pts(s1.begin(), s1.end());
  pts.insert(pts.end(), s2.begin(), s2.end());
  return PointSet2(std::move(pts));
}

PointSet2 reflect_set(const PointSet2& s, double axis_angle) {
  const Point2 c = centroid(s);
  const double c2 = std::cos(2.0 * axis_angle);
  const double s2 = std::sin(2.0 * axis_angle);
  Mat2 h;
  h << c2, s2, s2, -c2;
  std::vector<Point2> pts;
  pts.reserve(s.size());
  for (const auto& p : s) pts.emplace_back(c + h * (p - c));
  return PointSet2(std::move(pts));
}

void validate_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) {
    throw InvalidArgument("permutation has " + std::to_string(perm.size()) + " entries, expected " +
                          std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t idx : perm) {
    if (idx >= n || seen[idx]) throw InvalidArgument("not a permutation of 0..n-1");
    seen[idx] = true;
  }
}

PointSet2 relabel(const PointSet2& s, std::span<const std::size_t> perm) {
  validate_permutation(perm, s.size());
  std::vector<Point2> pts;
  pts.reserve(s.size());
  for (std::size_t idx : perm) pts.push_back(s[idx]);
  return PointSet2(std::move(pts));
}

PointSet2 default_model_set(std::size_t n) {
  if (n == 2) {
    const double r = std::sqrt(2.0);
    return PointSet2({{0.0, r}, {0.0, -r}});
  }
  return trivial_set(n);
}

NormalizedSet normalize_model_set(const PointSet2& s, double tol) {
  const IsotropyReport report = check_isotropy(s, tol);
  // Two points are never isotropic; any distinct pair is accepted and scaled
  // to sum |k|^2 = 2n.
  if (s.size() == 2 && !(report.eigenvalue_high > 0.0)) {
    throw PreconditionViolation("model point pair must have two distinct points");
  }
  if (s.size() > 2 && !report.is_isotropic) {
    throw PreconditionViolation("model point set is not isotropic (relative eigenvalue spread " +
                                std::to_string(report.relative_spread) + ")");
  }
  const auto n = static_cast<double>(s.size());
  const Point2 c = centroid(s);
  const double mean_eig = 0.5 * report.second_moment.trace();
  const double scale = std::sqrt(n / mean_eig);

  const double radius = std::sqrt(report.second_moment.trace() / n);
  const bool shifted = c.norm() > 1e-12 * std::max(1.0, radius);
  const bool scaled = std::abs(scale - 1.0) > 1e-12;
  if (!shifted && !scaled) return {s, false};

  std::vector<Point2> pts;
  pts.reserve(s.size());
  for (const auto& p : s) pts.emplace_back((p - c) * scale);
  return {PointSet2(std::move(pts)), true};
}

}  // namespace kinecond
