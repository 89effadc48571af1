#include "kinecond/kinematics.hpp"

#include "kinecond/errors.hpp"

#include <cmath>
#include <string>

namespace kinecond {

Manipulator::Manipulator(std::vector<double> link_lengths) : link_lengths_(std::move(link_lengths)) {
  if (link_lengths_.size() < 2) {
    throw InvalidArgument("manipulator needs at least 2 links, got " + std::to_string(link_lengths_.size()));
  }
  for (double a : link_lengths_) {
    if (!std::isfinite(a) || a <= 0.0) throw InvalidArgument("link lengths must be finite and positive");
  }
}

Manipulator Manipulator::scaled(double factor) const {
  std::vector<double> a(link_lengths_);
  for (double& v : a) v *= factor;
  return Manipulator(std::move(a));
}

Posture::Posture(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double t : theta_) {
    if (!std::isfinite(t)) throw InvalidArgument("joint angles must be finite");
  }
}

Posture Posture::from_degrees(std::span<const double> theta_deg) {
  std::vector<double> t;
  t.reserve(theta_deg.size());
  for (double d : theta_deg) t.push_back(deg2rad(d));
  return Posture(std::move(t));
}

bool equivalent_postures(const Posture& a, const Posture& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(wrap_pi(a[i] - b[i])) > tol) return false;
  }
  return true;
}

Matrix3X JacobianBlocks::stacked() const {
  Matrix3X j(3, static_cast<Eigen::Index>(size()));
  j.row(0) = A;
  j.bottomRows<2>() = B;
  return j;
}

ChainGeometry joint_centers(const Manipulator& m, const Posture& p) {
  const std::size_t n = m.joint_count();
  if (p.size() != n) {
    throw InvalidArgument("posture has " + std::to_string(p.size()) + " angles for a " + std::to_string(n) +
                          "-joint manipulator");
  }
  ChainGeometry g;
  g.centers.reserve(n);
  Vec2 c = Vec2::Zero();
  double cumulative = 0.0;
  const auto a = m.link_lengths();
  for (std::size_t i = 0; i < n; ++i) {
    g.centers.push_back(c);
    cumulative += p[i];
    c += a[i] * Vec2(std::cos(cumulative), std::sin(cumulative));
  }
  g.operation_point = c;
  return g;
}

std::vector<Vec2> r_vectors(const Manipulator& m, const Posture& p) {
  const std::size_t n = m.joint_count();
  if (p.size() != n) {
    throw InvalidArgument("posture has " + std::to_string(p.size()) + " angles for a " + std::to_string(n) +
                          "-joint manipulator");
  }
  // Accumulate from the tip so that r_n = a_n (cos theta_1..n, sin theta_1..n)
  // holds without cancellation.
  const auto a = m.link_lengths();
  std::vector<double> cumulative(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += p[i];
    cumulative[i] = sum;
  }
  std::vector<Vec2> r(n);
  Vec2 acc = Vec2::Zero();
  for (std::size_t k = n; k-- > 0;) {
    acc += a[k] * Vec2(std::cos(cumulative[k]), std::sin(cumulative[k]));
    r[k] = acc;
  }
  return r;
}

JacobianBlocks jacobian_from_r(std::vector<Vec2> r) {
  JacobianBlocks jb;
  const auto n = static_cast<Eigen::Index>(r.size());
  jb.A = Eigen::RowVectorXd::Ones(n);
  jb.B.resize(2, n);
  for (Eigen::Index j = 0; j < n; ++j) jb.B.col(j) = perp(r[static_cast<std::size_t>(j)]);
  jb.r = std::move(r);
  return jb;
}

JacobianBlocks jacobian(const Manipulator& m, const Posture& p) { return jacobian_from_r(r_vectors(m, p)); }

}  // namespace kinecond
