#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>

namespace kinecond {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Matrix3X = Eigen::Matrix<double, 3, Eigen::Dynamic>;
using Matrix2X = Eigen::Matrix<double, 2, Eigen::Dynamic>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Counterclockwise quarter turn [[0,-1],[1,0]].
inline Mat2 quarter_turn() {
  Mat2 e;
  e << 0.0, -1.0, 1.0, 0.0;
  return e;
}

/// R(a) = cos(a) 1 + sin(a) E.
inline Mat2 rotation(double alpha) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

/// Applies E without forming the matrix: (x, y) -> (-y, x).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

/// Wraps an angle into [0, 2pi).
double wrap_two_pi(double angle);

/// Wraps an angle into (-pi, pi].
double wrap_pi(double angle);

}  // namespace kinecond
