#include "kinecond/conditioning.hpp"

#include "kinecond/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

namespace kinecond {
namespace {

constexpr double kSumR2Floor = 1e-30;

void require_same_count(std::size_t joints, std::size_t points) {
  if (joints != points) {
    throw InvalidArgument("model set has " + std::to_string(points) + " points for " + std::to_string(joints) +
                          " joints");
  }
}

double sum_squared_norms(std::span<const Vec2> v) {
  double s = 0.0;
  for (const auto& x : v) s += x.squaredNorm();
  return s;
}

}  // namespace

Vec2 ModelMatrix::rotated_point(std::size_t j) const { return rotation(alpha) * source_set[j]; }

double weighted_norm(const Eigen::MatrixXd& a) {
  if (a.cols() == 0) return 0.0;
  return std::sqrt(a.squaredNorm() / static_cast<double>(a.cols()));
}

double frobenius_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument("frobenius_distance: shape mismatch");
  }
  return weighted_norm(a - b);
}

ModelMatrix model_matrix(const PointSet2& s, double alpha) {
  const auto n = static_cast<double>(s.size());
  const Point2 c = centroid(s);
  if (c.norm() > 1e-9 * std::sqrt(n)) {
    throw PreconditionViolation("model set must be centred at the origin");
  }
  Mat2 moment = Mat2::Zero();
  for (const auto& k : s) moment.noalias() += k * k.transpose();
  const bool pair_ok = s.size() == 2 && std::abs(moment.trace() - 2.0 * n) <= 1e-9 * n;
  if (!pair_ok && (moment - n * Mat2::Identity()).norm() > 1e-9 * n) {
    throw PreconditionViolation("model set must be isotropic with sum k k^T = n 1");
  }

  ModelMatrix mm{Matrix3X(3, static_cast<Eigen::Index>(s.size())), s, alpha};
  const Mat2 r = rotation(alpha);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    mm.K(0, col) = 1.0;
    mm.K.block<2, 1>(1, col) = perp(r * s[j]);
  }
  return mm;
}

ConditioningLength conditioning_length(const JacobianBlocks& jb, const ModelMatrix& K) {
  require_same_count(jb.size(), K.source_set.size());
  const Mat2 rot = rotation(K.alpha);
  double projection = 0.0;
  for (std::size_t j = 0; j < jb.size(); ++j) projection += (rot * K.source_set[j]).dot(jb.r[j]);
  const double sum_r2 = std::max(sum_squared_norms(jb.r), kSumR2Floor);
  if (!(projection > 0.0)) {
    throw DegenerateAlignment("sum of projections of r_j onto the model vectors is " + std::to_string(projection) +
                              "; conditioning length undefined");
  }
  const double lambda = projection / sum_r2;
  return {lambda, 1.0 / lambda};
}

NormalizedJacobian normalize_jacobian(const JacobianBlocks& jb, const ConditioningLength& len) {
  NormalizedJacobian nj;
  nj.Jbar.resize(3, static_cast<Eigen::Index>(jb.size()));
  nj.Jbar.row(0) = jb.A;
  nj.Jbar.bottomRows<2>() = jb.B * len.lambda;
  nj.lambda = len.lambda;
  nj.l_P = len.l_P;
  return nj;
}

ConditioningSums conditioning_sums(std::span<const Vec2> r, const PointSet2& model_set) {
  require_same_count(r.size(), model_set.size());
  ConditioningSums sums;
  sums.n = r.size();
  for (std::size_t j = 0; j < r.size(); ++j) {
    const Vec2& k = model_set[j];
    sums.N += r[j].dot(perp(k));
    sums.D += r[j].dot(k);
    sums.sum_r2 += r[j].squaredNorm();
    sums.sum_k2 += k.squaredNorm();
  }
  return sums;
}

double ConditioningSums::lambda() const {
  return std::hypot(N, D) / std::max(sum_r2, kSumR2Floor);
}

double ConditioningSums::z() const {
  const auto nd = static_cast<double>(n);
  const double s2 = N * N + D * D;
  const double z = sum_k2 / (2.0 * nd) - s2 / (2.0 * nd * std::max(sum_r2, kSumR2Floor));
  return std::max(z, 0.0);
}

double optimal_alpha(const JacobianBlocks& jb, const PointSet2& s) {
  const ConditioningSums sums = conditioning_sums(jb.r, s);
  double scale = 0.0;
  for (std::size_t j = 0; j < jb.size(); ++j) scale += jb.r[j].norm() * s[j].norm();
  if (std::hypot(sums.N, sums.D) <= 1e-14 * scale) {
    throw IndeterminateRotation("N = D = 0: every model-set rotation is stationary");
  }

  const auto n = static_cast<double>(sums.n);
  const double sum_r2 = std::max(sums.sum_r2, kSumR2Floor);
  auto z_at = [&](double alpha) {
    const double projection = sums.D * std::cos(alpha) + sums.N * std::sin(alpha);
    const double lambda = std::max(projection, 0.0) / sum_r2;
    return (lambda * lambda * sum_r2 - 2.0 * lambda * projection + sums.sum_k2) / (2.0 * n);
  };

  const double root = wrap_pi(std::atan2(sums.N, sums.D));
  const double other = wrap_pi(root + kPi);
  return z_at(other) < z_at(root) ? other : root;
}

double z_trace_form(const Matrix3X& jbar, const Matrix3X& k) {
  if (jbar.cols() != k.cols()) throw InvalidArgument("z_trace_form: shape mismatch");
  const auto n = static_cast<double>(jbar.cols());
  const double t = (jbar * jbar.transpose()).trace() - 2.0 * (k * jbar.transpose()).trace() +
                   (k * k.transpose()).trace();
  return t / (2.0 * n);
}

double condition_number(const Matrix3X& a) {
  const Mat3 g = a * a.transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(g, Eigen::EigenvaluesOnly);
  const Eigen::Vector3d e = eig.eigenvalues();
  if (!(e(0) > 1e-13 * e(2))) return std::numeric_limits<double>::infinity();
  const double kappa = std::sqrt(e.sum() * e.cwiseInverse().sum()) / 3.0;
  return std::max(kappa, 1.0);
}

ConditioningResult z_value(const JacobianBlocks& jb, const PointSet2& s, const ZOptions& options) {
  require_same_count(jb.size(), s.size());
  const PointSet2 labelled = options.permutation.empty() ? s : relabel(s, options.permutation);
  const NormalizedSet normalized = normalize_model_set(labelled, options.isotropy_tolerance);
  const PointSet2& set = normalized.set;

  const double alpha = optimal_alpha(jb, set);
  const ModelMatrix K = model_matrix(set, alpha);
  const ConditioningLength len = conditioning_length(jb, K);
  const NormalizedJacobian nj = normalize_jacobian(jb, len);

  const auto n = static_cast<double>(jb.size());
  ConditioningResult out;
  out.alpha_opt = alpha;
  out.lambda = len.lambda;
  out.l_P = len.l_P;
  out.d_rms = std::sqrt(sum_squared_norms(jb.r) / n);
  out.z = std::max(z_trace_form(nj.Jbar, K.K), 0.0);

  double sum_k2 = 0.0;
  for (const auto& k : set) sum_k2 += k.squaredNorm();
  const double ratio = out.d_rms / out.l_P;
  out.z_moment_form = sum_k2 / (2.0 * n) - 0.5 * ratio * ratio;
  assert(std::abs(out.z - std::max(out.z_moment_form, 0.0)) <= 1e-8);

  out.kappa = condition_number(nj.Jbar);
  out.model_rescaled = normalized.rescaled;
  return out;
}

ConditioningResult z_value(const Manipulator& m, const Posture& p, const PointSet2& s, const ZOptions& options) {
  return z_value(jacobian(m, p), s, options);
}

ZEvaluator::ZEvaluator(const Manipulator& m, const PointSet2& normalized_model_set)
    : links_(m.link_lengths().begin(), m.link_lengths().end()),
      model_(normalized_model_set.begin(), normalized_model_set.end()) {
  require_same_count(links_.size(), model_.size());
  for (const auto& k : model_) sum_k2_ += k.squaredNorm();
}

double ZEvaluator::operator()(std::span<const double> theta) const {
  const std::size_t n = links_.size();
  if (theta.size() != n) throw InvalidArgument("ZEvaluator: posture size mismatch");

  // Forward prefix sums as in r_vectors(), r built from the tip.
  std::array<double, 16> small{};
  std::vector<double> large;
  double* cumulative = small.data();
  if (n > small.size()) {
    large.resize(n);
    cumulative = large.data();
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += theta[i];
    cumulative[i] = acc;
  }

  double N = 0.0, D = 0.0, sum_r2 = 0.0;
  Vec2 r = Vec2::Zero();
  for (std::size_t k = n; k-- > 0;) {
    r += links_[k] * Vec2(std::cos(cumulative[k]), std::sin(cumulative[k]));
    N += r.dot(perp(model_[k]));
    D += r.dot(model_[k]);
    sum_r2 += r.squaredNorm();
  }
  ConditioningSums sums{N, D, sum_r2, sum_k2_, n};
  return sums.z();
}

}  // namespace kinecond
