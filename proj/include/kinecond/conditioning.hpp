#pragma once

// Distance of the dimensionally homogeneous Jacobian to an isotropic model
// matrix K, with the conditioning length and the model-set rotation chosen in
// closed form to minimize it.
//
// Notation used throughout: for joint j, r_j runs from the joint center to the
// operation point and k_j is the matching model point. With
//   N = sum r_j^T E k_j,  D = sum r_j^T k_j,  S(alpha) = sum (R(alpha) k_j)^T r_j,
// the optimal rotation satisfies tan(alpha) = N / D, lambda = S / (n d_rms^2),
// and z = (1/2n) sum |k_j|^2 - (1/2) (lambda d_rms)^2.

#include "kinecond/kinematics.hpp"
#include "kinecond/planar_geom.hpp"
#include "kinecond/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace kinecond {

/// 3 x n dimensionless isotropic reference: row 0 is ones, column j of rows
/// 1-2 is E R(alpha) k_j. K K^T = n 1.
struct ModelMatrix {
  Matrix3X K;
  PointSet2 source_set;
  double alpha = 0.0;

  /// R(alpha) k_j
  Vec2 rotated_point(std::size_t j) const;
};

struct NormalizedJacobian {
  Matrix3X Jbar;
  double lambda = 0.0;
  double l_P = 0.0;
};

struct ConditioningLength {
  double lambda = 0.0;
  double l_P = 0.0;
};

struct ConditioningResult {
  double z = 0.0;
  double l_P = 0.0;
  double alpha_opt = 0.0;
  /// +inf when the normalized Jacobian is rank deficient.
  double kappa = 1.0;
  double d_rms = 0.0;

  // Not part of the serialized record.
  double lambda = 0.0;
  /// z from the moment form; agrees with `z` (trace form) to rounding.
  double z_moment_form = 0.0;
  /// The model set had to be recentred or rescaled to sum k k^T = n 1.
  bool model_rescaled = false;

  friend bool operator==(const ConditioningResult& a, const ConditioningResult& b) {
    return a.z == b.z && a.l_P == b.l_P && a.alpha_opt == b.alpha_opt && a.kappa == b.kappa &&
           a.d_rms == b.d_rms;
  }
};

/// sqrt((1/n) tr[(A - B)(A - B)^T]) with n the column count.
/// Throws InvalidArgument on shape mismatch.
double frobenius_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Weighted Frobenius norm sqrt((1/n) tr(A A^T)).
double weighted_norm(const Eigen::MatrixXd& a);

/// Requires s centred at the origin and sum k k^T = n 1 (relative 1e-9), or
/// for n = 2 sum |k|^2 = 2n;
/// throws PreconditionViolation otherwise.
ModelMatrix model_matrix(const PointSet2& s, double alpha);

/// lambda = S(alpha) / (n d_rms^2), l_P = 1 / lambda. Throws
/// DegenerateAlignment if S is not positive. Throws InvalidArgument on a
/// joint-count mismatch.
ConditioningLength conditioning_length(const JacobianBlocks& jb, const ModelMatrix& K);

/// Rows 1-2 of the Jacobian divided by l_P.
NormalizedJacobian normalize_jacobian(const JacobianBlocks& jb, const ConditioningLength& len);

/// Rotation of the model set minimizing z, in (-pi, pi]. Both roots of
/// cos(a) N - sin(a) D = 0 are evaluated, with the conditioning length
/// restricted to positive values, and the smaller z wins.
/// Throws IndeterminateRotation if N = D = 0.
double optimal_alpha(const JacobianBlocks& jb, const PointSet2& s);

/// (1/2n) tr(Jbar Jbar^T - 2 K Jbar^T + K K^T)
double z_trace_form(const Matrix3X& jbar, const Matrix3X& k);

/// kappa = ||A|| ||A^+|| with both norms weighted by 1/3, i.e.
/// sqrt(tr(A A^T) tr((A A^T)^-1)) / 3. Equals 1 for isotropic A, >= 1
/// otherwise, +inf when rank(A) < 3.
double condition_number(const Matrix3X& a);

struct ZOptions {
  /// Joint j is matched with model point permutation[j]; identity if empty.
  std::vector<std::size_t> permutation;
  double isotropy_tolerance = kDefaultIsotropyTolerance;
};

/// Full pipeline for one posture: normalize the model set, optimal alpha,
/// conditioning length, z, kappa.
ConditioningResult z_value(const JacobianBlocks& jb, const PointSet2& s, const ZOptions& options = {});

ConditioningResult z_value(const Manipulator& m, const Posture& p, const PointSet2& s,
                           const ZOptions& options = {});

/// Closed-form sums for one posture. Used by the grid sweeps, which need z
/// only and must not throw at singular or indeterminate postures.
struct ConditioningSums {
  double N = 0.0;
  double D = 0.0;
  double sum_r2 = 0.0;
  double sum_k2 = 0.0;
  std::size_t n = 0;

  /// Minimal z with the optimal alpha and lambda; 1 when N = D = 0 for a
  /// normalized model set.
  double z() const;
  double lambda() const;
};

ConditioningSums conditioning_sums(std::span<const Vec2> r, const PointSet2& model_set);

/// Evaluates z for a posture given as angles. `model_set` must already be
/// normalized (see normalize_model_set). Non-throwing except on size mismatch.
class ZEvaluator {
 public:
  ZEvaluator(const Manipulator& m, const PointSet2& normalized_model_set);

  std::size_t joint_count() const { return links_.size(); }
  double operator()(std::span<const double> theta) const;

 private:
  std::vector<double> links_;
  std::vector<Vec2> model_;
  double sum_k2_ = 0.0;
};

}  // namespace kinecond
