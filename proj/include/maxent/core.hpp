#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent {

// A univariate sample restricted to [x_min, x_max]. Values are stored
// sorted ascending, which makes construction permutation-invariant and
// downstream averaging reproducible.
struct Selection {
  std::vector<double> values;
  std::size_t n = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  double delta_x = 0.0;
};

// Equidistant discretization points of [x_min, x_max].
struct Grid {
  std::vector<double> points;
  std::size_t n_points = 0;
  double bin_width = 0.0;
};

// Nonnegative optimization weights aligned with a Grid. Raw weights are
// what the annealer works on; normalize() turns them into a discrete
// probability distribution.
struct WeightVector {
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
};

// Gaussian condition centers, per-condition widths, and the empirical
// averages computed from a Selection.
struct ConditionSet {
  std::vector<double> centers;
  std::vector<double> sigmas;
  std::vector<double> f_emp;

  std::size_t size() const { return centers.size(); }
};

// Simulated-annealing schedule. steps_per_temp == 0 means "auto", which
// resolves to 20 * n_points at run time. t_min must be deep enough that
// the frozen per-weight thermal noise sqrt(t_min / curvature) is small:
// single-weight cost curvature scales as 1 / n_points^2, so stopping too
// early leaves visible ripple that smoothing cannot fully remove.
struct AnnealSchedule {
  double t_initial = 1.0;
  double cooling = 0.95;
  std::size_t steps_per_temp = 0;
  double t_min = 1e-9;
  double step_size = 0.5;
  std::uint64_t seed = 1;
};

// How the entropy term of the cost is evaluated: on the raw weights or
// on weights normalized to unit sum. The estimator defaults to the
// normalized form: it is scale-free, so the entropy regularizes only
// the shape of the distribution while the overall weight scale stays
// free to satisfy the conditions. With the raw form the entropy pulls
// every weight toward 1/e, which biases the conditions at any fixed
// k_h (the raw form remains available as an explicit switch).
enum class EntropyMode { raw, normalized };

// Full estimator configuration.
struct EstimatorConfig {
  std::size_t n_points = 1000;
  std::size_t n_conditions = 101;
  double k_h = 1e-3;
  std::size_t smoothing_window = 10;
  EntropyMode entropy_mode = EntropyMode::normalized;
  AnnealSchedule sa_params{};
};

// Builds a Selection from raw values. Throws NonFiniteValue on NaN or
// infinity, EmptyOrDegenerateSample when fewer than 2 values are given
// or all values coincide.
Selection build_selection(std::vector<double> values);

// Equidistant grid over the selection span,
// x_j = x_min + delta_x * j / (n_points - 1) for j = 0..n_points-1.
Grid build_grid(const Selection& sel, std::size_t n_points);
Grid build_grid(double x_min, double x_max, std::size_t n_points);

// Converts a normalized weight vector into density values on the grid:
// probability mass per point divided by the bin width. Throws
// NotNormalized when the weights do not sum to 1 within 1e-9.
std::vector<double> density_from_weights(const WeightVector& w, const Grid& g);

}  // namespace maxent
