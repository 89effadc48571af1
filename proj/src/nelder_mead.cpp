#include "kinecond/nelder_mead.hpp"

#include "kinecond/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kinecond {
namespace {

using Point = std::vector<double>;

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

Point affine(const Point& base, const Point& toward, double t) {
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  const std::size_t dim = x0.size();
  if (dim == 0) throw InvalidArgument("nelder_mead: empty starting point");
  if (!(options.initial_step > 0.0)) throw InvalidArgument("nelder_mead: initial step must be positive");

  std::vector<Point> simplex(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  NelderMeadResult result;

  for (std::size_t iter = 0;; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) diameter = std::max(diameter, distance(simplex[i], simplex[best]));
    const double spread = values[worst] - values[best];

    const bool done = (spread <= options.f_tolerance && diameter <= options.x_tolerance) || diameter <= options.x_floor;
    if (done || iter >= options.max_iterations) {
      result.x = simplex[best];
      result.f = values[best];
      result.iterations = iter;
      result.converged = done;
      return result;
    }

    Point centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    const Point reflected = affine(centroid, simplex[worst], -1.0);
    const double f_reflected = f(reflected);

    if (f_reflected < values[best]) {
      const Point expanded = affine(centroid, simplex[worst], -2.0);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    // Contraction: outside if the reflection improved on the worst vertex.
    const bool outside = f_reflected < values[worst];
    const Point contracted = outside ? affine(centroid, reflected, 0.5) : affine(centroid, simplex[worst], 0.5);
    const double f_contracted = f(contracted);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }

    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      simplex[i] = affine(simplex[best], simplex[i], 0.5);
      values[i] = f(simplex[i]);
    }
  }
}

}  // namespace kinecond
