#include "kinecond/conditioning.hpp"
#include "kinecond/errors.hpp"
#include "kinecond/optimize.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace kinecond;

namespace {

double deg(double rad) { return rad2deg(rad); }

double grad_norm(const Manipulator& m, const Posture& p, const PointSet2& s) {
  const double h = 1e-5;
  const auto th = testing::angles_of(p);
  double sq = 0.0;
  for (std::size_t j = 1; j < th.size(); ++j) {
    auto plus = th, minus = th;
    plus[j] += h;
    minus[j] -= h;
    const double d = (z_value(m, Posture(plus), s).z - z_value(m, Posture(minus), s).z) / (2 * h);
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

TEST_CASE("isotropic manipulator optimum") {
  const auto m = testing::isotropic_arm();
  const auto s = trivial_set(3);
  const auto opt = optimum_posture(m, s);
  CHECK(opt.is_global);
  CHECK(opt.grid_samples_per_axis == 720);
  CHECK(opt.theta.theta()[0] == 0.0);
  CHECK(deg(opt.theta.theta()[1]) == doctest::Approx(120.0).epsilon(1e-6));
  CHECK(deg(opt.theta.theta()[2]) == doctest::Approx(150.0).epsilon(1e-6));
  CHECK(opt.z_min <= 1e-10);
  CHECK(opt.l_P == doctest::Approx(std::sqrt(6.0) / 6.0).epsilon(1e-9));
  CHECK(characteristic_length(m, s) == doctest::Approx(std::sqrt(6.0) / 6.0).epsilon(1e-9));
  REQUIRE_FALSE(opt.all_local_minima.empty());
  CHECK(opt.all_local_minima.front().z == opt.z_min);
}

TEST_CASE("equilateral manipulator optimum") {
  const auto m = testing::equilateral_arm();
  const auto s = trivial_set(3);
  const auto opt = optimum_posture(m, s);
  CHECK(opt.z_min == doctest::Approx(0.178).epsilon(0.002 / 0.178));
  CHECK(std::abs(deg(opt.theta.theta()[1]) - 81.8) < 0.5);
  CHECK(std::abs(deg(opt.theta.theta()[2]) - 155.2) < 0.5);
  CHECK(opt.l_P == doctest::Approx(0.563).epsilon(0.002 / 0.563));
  CHECK(grad_norm(m, opt.theta, s) <= 1e-6);

  // every grid sample is at least z_min
  const ZEvaluator eval(m, s);
  for (int i = 0; i < 360; ++i) {
    for (int j = 0; j < 360; ++j) {
      const std::vector<double> th{0.0, kTwoPi * i / 360.0, kTwoPi * j / 360.0};
      CHECK_MESSAGE(eval(th) >= opt.z_min, "grid sample below z_min");
      if (eval(th) < opt.z_min) return;
    }
  }
}

TEST_CASE("mirrored posture with the reflected model set") {
  const auto m = testing::isotropic_arm();
  const auto s = trivial_set(3);
  const auto mirrored = reflect_set(s, 0.0);
  const auto r = z_value(m, Posture::from_degrees(std::vector<double>{0.0, -120.0, -150.0}), mirrored);
  CHECK(r.z < 1e-12);
  const auto opt = optimum_posture(m, mirrored);
  CHECK(opt.z_min <= 1e-10);
  CHECK(deg(opt.theta.theta()[1]) == doctest::Approx(240.0).epsilon(1e-6));
  CHECK(deg(opt.theta.theta()[2]) == doctest::Approx(210.0).epsilon(1e-6));
}

TEST_CASE("stationarity on random manipulators") {
  testing::CaseGenerator gen(61);
  OptimizationConfig cfg;
  cfg.grid_resolution = kTwoPi / 180;
  for (int t = 0; t < 8; ++t) {
    const auto c = gen.next(3, 3);
    const auto s = trivial_set(3);
    const auto opt = optimum_posture(c.arm, s, cfg);
    if (opt.z_min < 1e-9) continue;  // kink of the clamp at z = 0
    CHECK(grad_norm(c.arm, opt.theta, s) <= 1e-6);
  }
}

TEST_CASE("randomized audit") {
  const auto m = testing::equilateral_arm();
  const auto s = trivial_set(3);
  const auto opt = optimum_posture(m, s);
  testing::CaseGenerator gen(62);
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100000; ++t) {
    const Posture p({gen.uniform(-kPi, kPi), gen.uniform(0, kTwoPi), gen.uniform(0, kTwoPi)});
    best = std::min(best, z_value(m, p, s).z);
  }
  CHECK(opt.z_min <= best);
}

TEST_CASE("theta1 invariance and determinism") {
  const auto m = Manipulator({1.0, 0.7, 0.45});
  const auto s = trivial_set(3);
  OptimizationConfig a;
  a.threads = 1;
  OptimizationConfig b;
  b.theta1 = deg2rad(37.0);
  b.threads = 3;
  const auto ra = optimum_posture(m, s, a);
  const auto rb = optimum_posture(m, s, b);
  CHECK(std::abs(ra.z_min - rb.z_min) <= 1e-9);
  CHECK(std::abs(ra.l_P - rb.l_P) <= 1e-9);
  CHECK(rb.theta.theta()[0] == deg2rad(37.0));

  OptimizationConfig c = a;
  c.threads = 4;
  const auto rc = optimum_posture(m, s, c);
  CHECK(rc.z_min == ra.z_min);
  CHECK(rc.l_P == ra.l_P);
  CHECK(rc.alpha_opt == ra.alpha_opt);
  CHECK(rc.theta == ra.theta);
  CHECK(rc.all_local_minima.size() == ra.all_local_minima.size());
}

TEST_CASE("scale covariance of the characteristic length") {
  const auto m = testing::equilateral_arm();
  const auto s = trivial_set(3);
  OptimizationConfig cfg;
  cfg.grid_resolution = kTwoPi / 180;
  const double l1 = characteristic_length(m, s, cfg);
  const double l3 = characteristic_length(m.scaled(3.0), s, cfg);
  CHECK(l3 == doctest::Approx(3.0 * l1).epsilon(1e-9));
}

TEST_CASE("two-link arm against a 1-D scan") {
  const Manipulator m({1.0, 1.0});
  const auto s = default_model_set(2);
  const auto opt = optimum_posture(m, s);
  CHECK(opt.grid_samples_per_axis == 720);

  // Oracle: brute-force profile over theta2 with alpha and lambda scanned.
  const auto k = testing::points_of(s);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3600; ++i) {
    const double t2 = kTwoPi * i / 3600.0;
    const auto r = testing::oracle_r({1.0, 1.0}, {0.0, t2});
    best = std::min(best, testing::scan_optimum(r, k, 90).z);
  }
  CHECK(opt.z_min <= best + 1e-12);
  CHECK(opt.z_min >= best - 1e-5);
  CHECK(opt.l_P > 0.0);
}

TEST_CASE("equal optima are reported with a lexicographic choice") {
  // The symmetric two-link arm has mirror-image optima theta2 and 2pi - theta2.
  const Manipulator m({1.0, 1.0});
  const auto opt = optimum_posture(m, default_model_set(2));
  CHECK(opt.equivalent_optima.size() >= 1);
  for (const auto& p : opt.equivalent_optima) CHECK(p.theta()[1] >= opt.theta.theta()[1]);
  for (const auto& lm : opt.all_local_minima) CHECK(lm.z >= opt.z_min);
}

TEST_CASE("four joints need an explicit grid") {
  const Manipulator m({1.0, 0.8, 0.6, 0.4});
  const auto s = trivial_set(4);
  OptimizationConfig cfg;
  CHECK(grid_samples_per_axis(cfg, 2) == 720);
  CHECK(grid_samples_per_axis(cfg, 3) == 180);
  CHECK_THROWS_AS(grid_samples_per_axis(cfg, 4), ConfigError);
  const Manipulator five({1.0, 0.9, 0.8, 0.6, 0.4});
  CHECK_THROWS_AS(optimum_posture(five, trivial_set(5), cfg), ConfigError);

  cfg.grid_resolution = kTwoPi / 24;
  const auto opt = optimum_posture(five, trivial_set(5), cfg);
  CHECK(opt.grid_samples_per_axis == 24);
  CHECK_FALSE(opt.is_global);

  cfg.grid_resolution = kTwoPi / 36;
  const auto four = optimum_posture(m, s, cfg);
  CHECK(four.z_min >= 0.0);
  CHECK(grad_norm(m, four.theta, s) <= 1e-5);

  cfg.grid_resolution = 0.0;
  CHECK_THROWS_AS(optimum_posture(m, s, cfg), ConfigError);
  cfg.grid_resolution = 2.0;
  CHECK_THROWS_AS(optimum_posture(m, s, cfg), ConfigError);
  cfg.grid_resolution = kTwoPi / 36;
  cfg.refine_tolerance = 0.0;
  CHECK_THROWS_AS(optimum_posture(m, s, cfg), ConfigError);
}

TEST_CASE("singularity proximity") {
  const auto m = testing::equilateral_arm();
  const auto s = trivial_set(3);
  const double stretched = singularity_proximity(m, Posture({0.0, 0.0, 0.0}), s);
  const double optimum = singularity_proximity(m, Posture::from_degrees(std::vector<double>{0.0, 81.8, 155.2}), s);
  CHECK(stretched > optimum);
  CHECK(stretched > 0.5);
  CHECK(optimum == doctest::Approx(0.178).epsilon(0.001 / 0.178));
}
