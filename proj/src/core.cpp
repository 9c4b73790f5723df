#include "maxent/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace maxent {

Selection build_selection(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v))
      throw NonFiniteValue("sample contains a non-finite value");
  }
  if (values.size() < 2)
    throw EmptyOrDegenerateSample("need at least 2 sample values, got " +
                                  std::to_string(values.size()));
  std::sort(values.begin(), values.end());
  Selection sel;
  sel.x_min = values.front();
  sel.x_max = values.back();
  sel.delta_x = sel.x_max - sel.x_min;
  if (sel.delta_x <= 0.0)
    throw EmptyOrDegenerateSample("all sample values are identical");
  sel.n = values.size();
  sel.values = std::move(values);
  return sel;
}

Grid build_grid(double x_min, double x_max, std::size_t n_points) {
  if (n_points < 2)
    throw InvalidPointCount("grid needs at least 2 points, got " +
                            std::to_string(n_points));
  Grid g;
  g.n_points = n_points;
  const double span = x_max - x_min;
  g.bin_width = span / static_cast<double>(n_points - 1);
  g.points.resize(n_points);
  for (std::size_t j = 0; j < n_points; ++j) {
    g.points[j] = x_min + span * static_cast<double>(j) /
                              static_cast<double>(n_points - 1);
  }
  g.points.back() = x_max;  // guard against one-ulp drift in the last step
  return g;
}

Grid build_grid(const Selection& sel, std::size_t n_points) {
  return build_grid(sel.x_min, sel.x_max, n_points);
}

std::vector<double> density_from_weights(const WeightVector& w, const Grid& g) {
  if (w.size() != g.n_points)
    throw LengthMismatch("weight vector length " + std::to_string(w.size()) +
                         " does not match grid size " +
                         std::to_string(g.n_points));
  double sum = 0.0;
  for (double p : w.weights) sum += p;
  if (std::abs(sum - 1.0) > 1e-9)
    throw NotNormalized("weights sum to " + std::to_string(sum) +
                        ", expected 1");
  std::vector<double> density(w.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    density[j] = w.weights[j] / g.bin_width;
  return density;
}

}  // namespace maxent
