#pragma once

// Fixtures and brute-force oracles shared by the test suites. Oracles here
// build matrices entry by entry and search numerically; they do not call the
// closed forms they are used to check.

#include "kinecond/kinematics.hpp"
#include "kinecond/planar_geom.hpp"
#include "kinecond/types.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testing {

using kinecond::Vec2;

inline kinecond::Manipulator isotropic_arm(double l = 1.0) {
  return kinecond::Manipulator({l, l, std::sqrt(3.0) / 3.0 * l});
}

inline kinecond::Manipulator equilateral_arm(double l = 1.0) { return kinecond::Manipulator({l, l, l}); }

/// The three-point model set (k_1, k_2, k_3) with k^2 = 3.
inline kinecond::PointSet2 standard_set3() {
  const double s6 = std::sqrt(6.0), s2 = std::sqrt(2.0);
  return kinecond::PointSet2({{s6 / 2, s2 / 2}, {-s6 / 2, s2 / 2}, {0.0, -s2}});
}

/// Three- and four-point sets whose union has second moment 7 1.
inline kinecond::PointSet2 union_part_3() {
  const double s6 = std::sqrt(6.0), s2 = std::sqrt(2.0);
  return kinecond::PointSet2({{-s6 / 2, -s2 / 2}, {s6 / 2, -s2 / 2}, {0.0, s2}});
}
inline kinecond::PointSet2 union_part_4() {
  const double s2 = std::sqrt(2.0);
  return kinecond::PointSet2({{0.0, -s2}, {-s2, 0.0}, {0.0, s2}, {s2, 0.0}});
}

/// Joint centers by forward accumulation, r_j = P - c_j.
inline std::vector<Vec2> oracle_r(const std::vector<double>& a, const std::vector<double>& theta) {
  std::vector<Vec2> centers;
  Vec2 c(0.0, 0.0);
  double phi = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    centers.push_back(c);
    phi += theta[i];
    c += a[i] * Vec2(std::cos(phi), std::sin(phi));
  }
  std::vector<Vec2> r;
  for (const auto& ci : centers) r.push_back(c - ci);
  return r;
}

/// z = (1/2n) sum of squared entries of (Jbar - K), Jbar and K assembled
/// explicitly for a given lambda and model rotation alpha.
inline double oracle_z(const std::vector<Vec2>& r, const std::vector<Vec2>& k, double lambda, double alpha) {
  const std::size_t n = r.size();
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    // Jbar column: (1, lambda * E r_j); K column: (1, E R(alpha) k_j)
    const double jx = -lambda * r[j].y();
    const double jy = lambda * r[j].x();
    const double kx_rot = ca * k[j].x() - sa * k[j].y();
    const double ky_rot = sa * k[j].x() + ca * k[j].y();
    const double kx = -ky_rot;
    const double ky = kx_rot;
    sum += (jx - kx) * (jx - kx) + (jy - ky) * (jy - ky);
  }
  return sum / (2.0 * static_cast<double>(n));
}

/// Golden-section minimization on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 120) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// One vertex step of the parabola through f(x - h), f(x), f(x + h).
inline double parabolic_polish(const std::function<double(double)>& f, double x, double h) {
  const double fm = f(x - h), f0 = f(x), fp = f(x + h);
  const double curv = fm - 2.0 * f0 + fp;
  if (!(curv > 0.0)) return x;
  const double step = 0.5 * h * (fm - fp) / curv;
  return std::abs(step) <= h ? x + step : x;
}

struct ScanOptimum {
  double lambda = 0.0;
  double alpha = 0.0;
  double z = 0.0;
};

/// Dense alpha scan with an inner golden-section search over lambda in
/// [0, lambda_hi], then golden-section refinement of alpha around the best
/// sample. Both searches finish with a parabolic step, since golden section
/// alone resolves a quadratic minimum only to about sqrt(eps).
inline ScanOptimum scan_optimum(const std::vector<Vec2>& r, const std::vector<Vec2>& k, std::size_t alpha_samples = 720) {
  double sum_r = 0.0, sum_k = 0.0;
  for (const auto& v : r) sum_r += v.norm();
  for (const auto& v : k) sum_k += v.norm();
  const double lambda_hi = 4.0 * sum_k / std::max(sum_r, 1e-300) + 1.0;

  auto best_lambda = [&](double alpha) {
    const auto z_of = [&](double lam) { return oracle_z(r, k, lam, alpha); };
    const double lam = golden_min(z_of, 0.0, lambda_hi);
    return lam > 0.0 ? parabolic_polish(z_of, lam, 1e-3 * lam) : lam;
  };
  auto profile = [&](double alpha) { return oracle_z(r, k, best_lambda(alpha), alpha); };

  const double step = 2.0 * kinecond::kPi / static_cast<double>(alpha_samples);
  double best_alpha = 0.0, best_z = profile(0.0);
  for (std::size_t s = 1; s < alpha_samples; ++s) {
    const double alpha = step * static_cast<double>(s);
    const double z = profile(alpha);
    if (z < best_z) {
      best_z = z;
      best_alpha = alpha;
    }
  }
  double alpha = golden_min(profile, best_alpha - step, best_alpha + step, 80);
  alpha = parabolic_polish(profile, alpha, 1e-4);
  double lambda = best_lambda(alpha);
  lambda = parabolic_polish([&](double lam) { return oracle_z(r, k, lam, alpha); }, lambda, 1e-3 * lambda);
  return {lambda, alpha, oracle_z(r, k, lambda, alpha)};
}

inline double angle_distance(double a, double b) {
  double d = std::fmod(a - b, 2.0 * kinecond::kPi);
  if (d > kinecond::kPi) d -= 2.0 * kinecond::kPi;
  if (d < -kinecond::kPi) d += 2.0 * kinecond::kPi;
  return std::abs(d);
}

struct RandomCase {
  kinecond::Manipulator arm;
  kinecond::Posture posture;
};

class CaseGenerator {
 public:
  explicit CaseGenerator(std::uint64_t seed) : rng_(seed) {}

  RandomCase next(std::size_t min_joints = 2, std::size_t max_joints = 6) {
    std::uniform_int_distribution<std::size_t> joints(min_joints, max_joints);
    std::uniform_real_distribution<double> length(0.2, 2.0);
    std::uniform_real_distribution<double> angle(-kinecond::kPi, kinecond::kPi);
    const std::size_t n = joints(rng_);
    std::vector<double> a(n), t(n);
    for (auto& v : a) v = length(rng_);
    for (auto& v : t) v = angle(rng_);
    return {kinecond::Manipulator(std::move(a)), kinecond::Posture(std::move(t))};
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline std::vector<Vec2> points_of(const kinecond::PointSet2& s) { return {s.begin(), s.end()}; }

inline std::vector<double> lengths_of(const kinecond::Manipulator& m) {
  return {m.link_lengths().begin(), m.link_lengths().end()};
}

inline std::vector<double> angles_of(const kinecond::Posture& p) { return {p.theta().begin(), p.theta().end()}; }

}  // namespace testing
