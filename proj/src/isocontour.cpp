#include "kinecond/isocontour.hpp"

#include "kinecond/conditioning.hpp"
#include "kinecond/errors.hpp"
#include "kinecond/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace kinecond {
namespace {

constexpr std::size_t kMinResolution = 8;
constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

void locate_extrema(ZGrid& g) {
  const std::size_t res = g.resolution;
  std::size_t lo = 0, hi = 0;
  for (std::size_t k = 1; k < g.values.size(); ++k) {
    if (g.values[k] < g.values[lo]) lo = k;
    if (g.values[k] > g.values[hi]) hi = k;
  }
  auto fill = [&](GridExtremum& e, std::size_t k) {
    e.value = g.values[k];
    e.i = k / res;
    e.j = k % res;
    e.theta2 = g.theta2_axis[e.i];
    e.theta3 = g.theta3_axis[e.j];
  };
  fill(g.z_min, lo);
  fill(g.z_max, hi);
}

std::vector<double> lattice_axis(std::size_t res) {
  std::vector<double> axis(res);
  const double h = kTwoPi / static_cast<double>(res);
  for (std::size_t k = 0; k < res; ++k) axis[k] = h * static_cast<double>(k);
  return axis;
}

// Marching squares on one level. Nodes are lattice edges carrying a crossing:
// node = 2 * (i * res + j) + dir, dir 0 joins (i, j)-(i+1, j), dir 1 joins
// (i, j)-(i, j+1). Every node lies on at most two segments.
class LevelTracer {
 public:
  LevelTracer(const ZGrid& g, double level, bool wrap)
      : g_(g), level_(level), wrap_(wrap), res_(g.resolution), h_(g.step()), links_(2 * res_ * res_) {
    for (auto& l : links_) l = {kNoNode, kNoNode};
  }

  std::vector<Contour> trace() {
    const std::size_t cells = wrap_ ? res_ : res_ - 1;
    for (std::size_t i = 0; i < cells; ++i) {
      for (std::size_t j = 0; j < cells; ++j) add_cell(i, j);
    }

    std::vector<Contour> out;
    std::vector<char> visited(links_.size(), 0);
    // Open chains start at nodes of degree one (window boundary, no-wrap).
    for (std::size_t node = 0; node < links_.size(); ++node) {
      if (!visited[node] && degree(node) == 1) out.push_back(walk(node, visited));
    }
    for (std::size_t node = 0; node < links_.size(); ++node) {
      if (!visited[node] && degree(node) == 2) out.push_back(walk(node, visited));
    }
    return out;
  }

 private:
  bool above(double v) const { return v >= level_; }
  double value(std::size_t i, std::size_t j) const { return g_.at(i % res_, j % res_); }

  std::size_t node_id(std::size_t i, std::size_t j, int dir) const {
    return 2 * ((i % res_) * res_ + (j % res_)) + static_cast<std::size_t>(dir);
  }

  // Crossing point in canonical coordinates, node's base corner in [0, 2pi).
  Vec2 position(std::size_t node) const {
    const std::size_t base = node / 2;
    const std::size_t i = base / res_;
    const std::size_t j = base % res_;
    const double v0 = g_.at(i, j);
    if (node % 2 == 0) {
      const double v1 = value(i + 1, j);
      const double t = (level_ - v0) / (v1 - v0);
      return {h_ * (static_cast<double>(i) + t), h_ * static_cast<double>(j)};
    }
    const double v1 = value(i, j + 1);
    const double t = (level_ - v0) / (v1 - v0);
    return {h_ * static_cast<double>(i), h_ * (static_cast<double>(j) + t)};
  }

  void connect(std::size_t a, std::size_t b) {
    auto attach = [&](std::size_t from, std::size_t to) {
      auto& slot = links_[from];
      if (slot[0] == kNoNode) {
        slot[0] = to;
      } else {
        slot[1] = to;
      }
    };
    attach(a, b);
    attach(b, a);
  }

  void add_cell(std::size_t i, std::size_t j) {
    const std::array<double, 4> v{value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
    const std::array<bool, 4> up{above(v[0]), above(v[1]), above(v[2]), above(v[3])};
    // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3).
    const std::array<std::size_t, 4> edge{node_id(i, j, 0), node_id(i + 1, j, 1), node_id(i, j + 1, 0),
                                          node_id(i, j, 1)};
    const std::array<bool, 4> crossed{up[0] != up[1], up[1] != up[2], up[3] != up[2], up[0] != up[3]};
    const int count = crossed[0] + crossed[1] + crossed[2] + crossed[3];
    if (count == 0) return;
    if (count == 2) {
      std::array<std::size_t, 2> ends{};
      int k = 0;
      for (int e = 0; e < 4; ++e) {
        if (crossed[e]) ends[k++] = edge[e];
      }
      connect(ends[0], ends[1]);
      return;
    }
    // Saddle: diagonal corners agree. The cell-centre average decides which
    // diagonal pair is joined.
    const bool centre_up = above(0.25 * (v[0] + v[1] + v[2] + v[3]));
    if (centre_up == up[0]) {
      connect(edge[0], edge[1]);  // isolate c1
      connect(edge[2], edge[3]);  // isolate c3
    } else {
      connect(edge[0], edge[3]);  // isolate c0
      connect(edge[1], edge[2]);  // isolate c2
    }
  }

  int degree(std::size_t node) const {
    return (links_[node][0] != kNoNode) + (links_[node][1] != kNoNode);
  }

  Vec2 nearest_image(const Vec2& canonical, const Vec2& previous) const {
    if (!wrap_) return canonical;
    Vec2 p = canonical;
    for (int axis = 0; axis < 2; ++axis) p(axis) += kTwoPi * std::round((previous(axis) - p(axis)) / kTwoPi);
    return p;
  }

  Contour walk(std::size_t start, std::vector<char>& visited) {
    Contour c;
    c.level = level_;
    Vec2 point = position(start);
    c.points.push_back(point);
    visited[start] = 1;
    std::size_t prev = kNoNode;
    std::size_t node = start;
    while (true) {
      const auto& l = links_[node];
      std::size_t next = kNoNode;
      if (l[0] != kNoNode && l[0] != prev) {
        next = l[0];
      } else if (l[1] != prev) {
        next = l[1];
      }
      if (next == kNoNode) break;
      if (next == start) {
        // Contractible iff the unwrapped walk ends where it began.
        const Vec2 end = nearest_image(position(start), point);
        c.closed = (end - c.points.front()).norm() < kPi;
        break;
      }
      if (visited[next]) break;
      point = nearest_image(position(next), point);
      c.points.push_back(point);
      visited[next] = 1;
      prev = node;
      node = next;
    }
    return c;
  }

  const ZGrid& g_;
  double level_;
  bool wrap_;
  std::size_t res_;
  double h_;
  std::vector<std::array<std::size_t, 2>> links_;
};

EllipseFit ellipse_from_moments(const Vec2& center, const Mat2& cov) {
  Eigen::SelfAdjointEigenSolver<Mat2> eig(cov);
  const double low = std::max(eig.eigenvalues()(0), 0.0);
  const double high = std::max(eig.eigenvalues()(1), 0.0);
  EllipseFit fit;
  fit.center = center;
  // Filled ellipse: covariance eigenvalues are a^2/4 and b^2/4.
  fit.semi_major = 2.0 * std::sqrt(high);
  fit.semi_minor = 2.0 * std::sqrt(low);
  const Vec2 axis = eig.eigenvectors().col(1);
  fit.orientation = std::atan2(axis.y(), axis.x());
  fit.axis_ratio = low > 0.0 ? fit.semi_major / fit.semi_minor : std::numeric_limits<double>::infinity();
  fit.eccentricity = high > 0.0 ? std::sqrt(std::max(0.0, 1.0 - low / high)) : 0.0;
  return fit;
}

}  // namespace

ZGrid make_grid(std::size_t resolution, std::vector<double> values) {
  if (resolution < kMinResolution) {
    throw ConfigError("grid resolution must be at least " + std::to_string(kMinResolution));
  }
  if (values.size() != resolution * resolution) throw InvalidArgument("grid value count does not match resolution");
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("grid values must be finite");
  }
  ZGrid g;
  g.resolution = resolution;
  g.theta2_axis = lattice_axis(resolution);
  g.theta3_axis = g.theta2_axis;
  g.values = std::move(values);
  locate_extrema(g);
  return g;
}

ZGrid evaluate_grid(const Manipulator& m, const PointSet2& s, std::size_t resolution, const GridOptions& options) {
  if (resolution < kMinResolution) {
    throw ConfigError("grid resolution must be at least " + std::to_string(kMinResolution));
  }
  const std::size_t n = m.joint_count();
  if (n < 3) throw ConfigError("isocontour grids need at least 3 joints (two conditioning joints)");
  if (!options.fixed_trailing.empty() && options.fixed_trailing.size() != n - 3) {
    throw InvalidArgument("fixed_trailing needs " + std::to_string(n - 3) + " angles");
  }
  if (s.size() != n) throw InvalidArgument("model set size does not match joint count");

  const ZEvaluator evaluate(m, normalize_model_set(s).set);
  const std::vector<double> axis = lattice_axis(resolution);
  std::vector<double> values(resolution * resolution);

  parallel_for(resolution, options.threads, [&](std::size_t i) {
    std::vector<double> theta(n, 0.0);
    theta[0] = options.theta1;
    theta[1] = axis[i];
    for (std::size_t k = 0; k < options.fixed_trailing.size(); ++k) theta[3 + k] = options.fixed_trailing[k];
    for (std::size_t j = 0; j < resolution; ++j) {
      theta[2] = axis[j];
      values[i * resolution + j] = evaluate(theta);
    }
  });
  return make_grid(resolution, std::move(values));
}

WorkspaceMeasure workspace_area(const ZGrid& g, double z_M) {
  if (!(z_M > g.z_min.value)) {
    throw EmptyRegion("z_M = " + fmt::format("{}", z_M) + " does not exceed the grid minimum " +
                      fmt::format("{}", g.z_min.value));
  }
  const auto count = static_cast<std::size_t>(
      std::count_if(g.values.begin(), g.values.end(), [z_M](double v) { return v <= z_M; }));
  return {z_M, static_cast<double>(count) / static_cast<double>(g.values.size()), count};
}

std::vector<Contour> extract_isocontours(const ZGrid& g, std::span<const double> levels,
                                         const ContourOptions& options) {
  if (levels.empty()) throw ConfigError("no contour levels requested");
  std::vector<Contour> out;
  for (double level : levels) {
    if (!std::isfinite(level)) throw ConfigError("contour levels must be finite");
    if (!(level > g.z_min.value && level < g.z_max.value)) continue;
    auto contours = LevelTracer(g, level, options.wrap).trace();
    for (auto& c : contours) out.push_back(std::move(c));
  }
  return out;
}

EllipseFit fit_ellipse(std::span<const Vec2> polygon) {
  if (polygon.size() < 3) throw InvalidArgument("ellipse fit needs a polygon with at least 3 vertices");
  // Shift to the first vertex for conditioning.
  const Vec2 origin = polygon.front();
  double area2 = 0.0, cx = 0.0, cy = 0.0, ixx = 0.0, iyy = 0.0, ixy = 0.0;
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const Vec2 p = polygon[k] - origin;
    const Vec2 q = polygon[(k + 1) % polygon.size()] - origin;
    const double cross = p.x() * q.y() - q.x() * p.y();
    area2 += cross;
    cx += (p.x() + q.x()) * cross;
    cy += (p.y() + q.y()) * cross;
    ixx += (p.x() * p.x() + p.x() * q.x() + q.x() * q.x()) * cross;
    iyy += (p.y() * p.y() + p.y() * q.y() + q.y() * q.y()) * cross;
    ixy += (p.x() * q.y() + 2.0 * p.x() * p.y() + 2.0 * q.x() * q.y() + q.x() * p.y()) * cross;
  }
  if (std::abs(area2) <= std::numeric_limits<double>::min()) throw InvalidArgument("polygon has zero area");
  const double area = 0.5 * area2;
  cx /= 6.0 * area;
  cy /= 6.0 * area;
  Mat2 cov;
  cov(0, 0) = ixx / (12.0 * area) - cx * cx;
  cov(1, 1) = iyy / (12.0 * area) - cy * cy;
  cov(0, 1) = cov(1, 0) = ixy / (24.0 * area) - cx * cy;

  return ellipse_from_moments(origin + Vec2(cx, cy), cov);
}

EllipseFit fit_region_ellipse(const ZGrid& g, double z_M) {
  if (!(z_M > g.z_min.value)) throw EmptyRegion("z_M does not exceed the grid minimum");
  const std::size_t res = g.resolution;
  const double h = g.step();
  // BFS over the torus, tracking unwrapped lattice coordinates.
  std::vector<char> seen(res * res, 0);
  std::deque<std::array<long, 2>> queue;
  queue.push_back({static_cast<long>(g.z_min.i), static_cast<long>(g.z_min.j)});
  seen[g.z_min.i * res + g.z_min.j] = 1;
  double count = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  const auto r = static_cast<long>(res);
  while (!queue.empty()) {
    const auto [ui, uj] = queue.front();
    queue.pop_front();
    const double x = h * static_cast<double>(ui);
    const double y = h * static_cast<double>(uj);
    count += 1.0;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    constexpr std::array<std::array<long, 2>, 4> steps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& st : steps) {
      const long ni = ui + st[0];
      const long nj = uj + st[1];
      const auto wi = static_cast<std::size_t>(((ni % r) + r) % r);
      const auto wj = static_cast<std::size_t>(((nj % r) + r) % r);
      const std::size_t k = wi * res + wj;
      if (seen[k] || g.values[k] > z_M) continue;
      seen[k] = 1;
      queue.push_back({ni, nj});
    }
  }
  const double mx = sx / count;
  const double my = sy / count;
  Mat2 cov;
  // Each lattice point stands for an h x h cell: add its own h^2/12 spread.
  cov(0, 0) = sxx / count - mx * mx + h * h / 12.0;
  cov(1, 1) = syy / count - my * my + h * h / 12.0;
  cov(0, 1) = cov(1, 0) = sxy / count - mx * my;

  return ellipse_from_moments({mx, my}, cov);
}

void write_grid_csv(std::ostream& os, const ZGrid& g) {
  os << "theta2_rad,theta3_rad,z\n";
  std::string line;
  for (std::size_t i = 0; i < g.resolution; ++i) {
    for (std::size_t j = 0; j < g.resolution; ++j) {
      line = fmt::format("{:.17g},{:.17g},{:.17g}\n", g.theta2_axis[i], g.theta3_axis[j], g.at(i, j));
      os << line;
    }
  }
}

}  // namespace kinecond
