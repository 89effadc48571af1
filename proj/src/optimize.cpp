#include "kinecond/optimize.hpp"

#include "kinecond/conditioning.hpp"
#include "kinecond/errors.hpp"
#include "kinecond/nelder_mead.hpp"
#include "kinecond/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kinecond {
namespace {

constexpr std::size_t kMaxConditioningJoints = 5;
constexpr double kSameMinimumTolerance = 1e-6;

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > limit / base) return limit + 1;
    out *= base;
  }
  return out;
}

double torus_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = wrap_pi(a[i] - b[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

struct Candidate {
  std::vector<double> angles;  // theta_2..theta_n in [0, 2pi)
  double z = 0.0;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.z != b.z) return a.z < b.z;
  return a.angles < b.angles;
}

}  // namespace

std::size_t grid_samples_per_axis(const OptimizationConfig& cfg, std::size_t conditioning_joints) {
  if (conditioning_joints == 0) throw ConfigError("nothing to optimize: no conditioning joints");
  if (conditioning_joints > kMaxConditioningJoints) {
    throw ConfigError("search over " + std::to_string(conditioning_joints) +
                      " conditioning joints is not supported (at most 5)");
  }
  if (!(cfg.refine_tolerance > 0.0)) throw ConfigError("refine_tolerance must be positive");

  double step = 0.0;
  if (cfg.grid_resolution) {
    step = *cfg.grid_resolution;
    if (!(step > 0.0) || !std::isfinite(step)) throw ConfigError("grid_resolution must be positive");
  } else if (conditioning_joints <= 2) {
    step = kTwoPi / 720.0;
  } else if (conditioning_joints == 3) {
    step = kTwoPi / 180.0;
  } else {
    throw ConfigError("more than 3 conditioning joints: set an explicit coarse grid_resolution");
  }
  const auto samples = static_cast<std::size_t>(std::llround(kTwoPi / step));
  if (samples < 4) throw ConfigError("grid_resolution too coarse: fewer than 4 samples per axis");
  if (checked_pow(samples, conditioning_joints, cfg.max_grid_points) > cfg.max_grid_points) {
    throw ConfigError(std::to_string(samples) + " samples per axis over " + std::to_string(conditioning_joints) +
                      " axes exceeds max_grid_points; use a coarser grid_resolution");
  }
  return samples;
}

OptimumPosture optimum_posture(const Manipulator& m, const PointSet2& s, const OptimizationConfig& cfg) {
  const std::size_t n = m.joint_count();
  if (s.size() != n) {
    throw InvalidArgument("model set has " + std::to_string(s.size()) + " points for " + std::to_string(n) +
                          " joints");
  }
  if (!std::isfinite(cfg.theta1)) throw ConfigError("theta1 must be finite");
  const std::size_t dim = n - 1;
  const std::size_t samples = grid_samples_per_axis(cfg, dim);
  const double step = kTwoPi / static_cast<double>(samples);

  const PointSet2 model = normalize_model_set(s).set;
  const ZEvaluator evaluate(m, model);

  auto z_of = [&](std::span<const double> angles) {
    std::vector<double> theta(n);
    theta[0] = cfg.theta1;
    std::copy(angles.begin(), angles.end(), theta.begin() + 1);
    return evaluate(theta);
  };

  // Flat index: theta_2 is the most significant digit.
  const std::size_t total = checked_pow(samples, dim, cfg.max_grid_points);
  auto decode = [&](std::size_t idx, std::vector<std::size_t>& digits) {
    for (std::size_t d = dim; d-- > 0;) {
      digits[d] = idx % samples;
      idx /= samples;
    }
  };

  std::vector<double> grid(total);
  parallel_for(total, cfg.threads, [&](std::size_t idx) {
    std::vector<std::size_t> digits(dim);
    std::vector<double> angles(dim);
    decode(idx, digits);
    for (std::size_t d = 0; d < dim; ++d) angles[d] = step * static_cast<double>(digits[d]);
    grid[idx] = z_of(angles);
  });

  // Discrete local minima on the torus. Plateaus yield one representative:
  // strict comparison against neighbours with a smaller flat index.
  std::vector<std::size_t> strides(dim);
  {
    std::size_t st = 1;
    for (std::size_t d = dim; d-- > 0;) {
      strides[d] = st;
      st *= samples;
    }
  }
  std::size_t neighbour_count = 1;
  for (std::size_t d = 0; d < dim; ++d) neighbour_count *= 3;

  std::vector<char> is_min(total, 0);
  parallel_for(total, cfg.threads, [&](std::size_t idx) {
    std::vector<std::size_t> digits(dim);
    decode(idx, digits);
    const double z = grid[idx];
    for (std::size_t code = 0; code < neighbour_count; ++code) {
      std::size_t c = code;
      std::size_t nb = 0;
      bool self = true;
      for (std::size_t d = dim; d-- > 0;) {
        const std::size_t offset = c % 3;  // 0 -> -1, 1 -> 0, 2 -> +1
        c /= 3;
        if (offset != 1) self = false;
        const std::size_t digit = (digits[d] + samples + offset - 1) % samples;
        nb += digit * strides[d];
      }
      if (self || nb == idx) continue;
      const double other = grid[nb];
      if (other < z || (other == z && nb < idx)) return;
    }
    is_min[idx] = 1;
  });

  std::vector<std::size_t> seeds;
  for (std::size_t idx = 0; idx < total; ++idx) {
    if (is_min[idx]) seeds.push_back(idx);
  }
  std::stable_sort(seeds.begin(), seeds.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });

  NelderMeadOptions nm;
  nm.f_tolerance = cfg.refine_tolerance;
  nm.max_iterations = cfg.max_refine_iters;
  nm.initial_step = step;

  std::vector<Candidate> refined(seeds.size());
  parallel_for(seeds.size(), cfg.threads, [&](std::size_t i) {
    std::vector<std::size_t> digits(dim);
    decode(seeds[i], digits);
    std::vector<double> start(dim);
    for (std::size_t d = 0; d < dim; ++d) start[d] = step * static_cast<double>(digits[d]);

    auto objective = [&](const std::vector<double>& x) { return z_of(x); };
    NelderMeadResult r = nelder_mead(objective, start, nm);
    // Restart once with a small simplex; a collapsed simplex can stall short
    // of the minimum.
    NelderMeadOptions restart = nm;
    restart.initial_step = step * 1e-2;
    NelderMeadResult r2 = nelder_mead(objective, r.x, restart);
    if (r2.f <= r.f) r = std::move(r2);

    std::vector<double> wrapped = r.x;
    for (double& a : wrapped) a = wrap_two_pi(a);
    // Re-evaluate after wrapping so that z matches the reported angles; never
    // report worse than the grid seed.
    const double z_wrapped = z_of(wrapped);
    Candidate c;
    if (z_wrapped <= grid[seeds[i]]) {
      c = {std::move(wrapped), z_wrapped};
    } else {
      c = {start, grid[seeds[i]]};
    }
    refined[i] = std::move(c);
  });

  std::stable_sort(refined.begin(), refined.end(), candidate_less);
  std::vector<Candidate> distinct;
  for (auto& c : refined) {
    const bool seen = std::any_of(distinct.begin(), distinct.end(), [&](const Candidate& d) {
      return torus_distance(d.angles, c.angles) < kSameMinimumTolerance;
    });
    if (!seen) distinct.push_back(std::move(c));
  }

  auto to_posture = [&](const std::vector<double>& angles) {
    std::vector<double> theta(n);
    theta[0] = cfg.theta1;
    std::copy(angles.begin(), angles.end(), theta.begin() + 1);
    return Posture(std::move(theta));
  };

  OptimumPosture out;
  out.grid_samples_per_axis = samples;
  const double best_z = distinct.front().z;
  const Candidate* chosen = nullptr;
  for (const auto& c : distinct) {
    if (c.z > best_z + cfg.tie_tolerance) continue;
    out.equivalent_optima.push_back(to_posture(c.angles));
    if (chosen == nullptr || c.angles < chosen->angles) chosen = &c;
  }
  for (const auto& c : distinct) out.all_local_minima.push_back({to_posture(c.angles), c.z});

  out.theta = to_posture(chosen->angles);
  out.z_min = chosen->z;
  const ConditioningResult at_optimum = z_value(m, out.theta, model);
  out.l_P = at_optimum.l_P;
  out.alpha_opt = at_optimum.alpha_opt;
  out.is_global = samples >= 180;
  return out;
}

double characteristic_length(const Manipulator& m, const PointSet2& s, const OptimizationConfig& cfg) {
  return optimum_posture(m, s, cfg).l_P;
}

double singularity_proximity(const Manipulator& m, const Posture& p, const PointSet2& s) {
  return z_value(m, p, s).z;
}

}  // namespace kinecond
