#pragma once

// Planar n-revolute serial chain: joint centers, operation point, and the
// 3 x n Jacobian [1 ... 1; E r_1 ... E r_n].

#include "kinecond/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace kinecond {

/// Link lengths a_1..a_n (length units). n >= 2, every a_i finite and > 0.
class Manipulator {
 public:
  explicit Manipulator(std::vector<double> link_lengths);

  std::size_t joint_count() const { return link_lengths_.size(); }
  std::span<const double> link_lengths() const { return link_lengths_; }

  /// Same chain with every link multiplied by `factor` > 0.
  Manipulator scaled(double factor) const;

  friend bool operator==(const Manipulator&, const Manipulator&) = default;

 private:
  std::vector<double> link_lengths_;
};

/// Relative joint angles in radians, stored as given (not wrapped).
class Posture {
 public:
  explicit Posture(std::vector<double> theta);

  static Posture from_degrees(std::span<const double> theta_deg);

  std::size_t size() const { return theta_.size(); }
  std::span<const double> theta() const { return theta_; }
  double operator[](std::size_t i) const { return theta_[i]; }

  friend bool operator==(const Posture&, const Posture&) = default;

 private:
  std::vector<double> theta_;
};

/// Entrywise comparison modulo 2pi.
bool equivalent_postures(const Posture& a, const Posture& b, double tol);

struct ChainGeometry {
  /// centers[0] is the base joint at the origin.
  std::vector<Vec2> centers;
  Vec2 operation_point = Vec2::Zero();
};

struct JacobianBlocks {
  Eigen::RowVectorXd A;  ///< all ones
  Matrix2X B;            ///< column j = E r_j
  std::vector<Vec2> r;   ///< r_j = P - center_j

  std::size_t size() const { return r.size(); }
  Matrix3X stacked() const;
};

/// Throws InvalidArgument when the posture size differs from the joint count.
ChainGeometry joint_centers(const Manipulator& m, const Posture& p);

std::vector<Vec2> r_vectors(const Manipulator& m, const Posture& p);

JacobianBlocks jacobian(const Manipulator& m, const Posture& p);

/// Jacobian blocks built directly from given r_j vectors.
JacobianBlocks jacobian_from_r(std::vector<Vec2> r);

}  // namespace kinecond
