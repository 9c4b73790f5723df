#pragma once

#include <cstddef>
#include <vector>

#include "maxent/core.hpp"

namespace maxent {

// Standard Gaussian kernel without normalization, f(x) = exp(-x^2 / 2).
double gaussian(double x);

// Kernel centered at c with width sigma. Throws NonPositiveSigma.
double condition_value(double x, double c, double sigma);

// Empirical average of the kernel over a sample:
// (1/N) * sum_i f((X_i - c) / sigma).
double empirical_average(const std::vector<double>& sample, double c,
                         double sigma);

// Weighted average of the kernel over grid points:
// (1/N_p) * sum_j p_j f((x_j - c) / sigma), using the raw weights.
double simulated_average(const WeightVector& w, const Grid& g, double c,
                         double sigma);

// Shannon entropy -sum p ln p with the 0 ln 0 = 0 convention. Throws
// NegativeWeight. EntropyMode::normalized divides by sum p first (and
// throws AllZeroWeights when the sum vanishes).
double entropy(const WeightVector& w, EntropyMode mode = EntropyMode::raw);

// Builds condition centers c_k = x_min + delta_x * k / (n_c - 1) with
// the given per-condition widths and precomputes the empirical
// averages from the selection. Throws LengthMismatch when sigmas does
// not have n_conditions entries.
ConditionSet build_condition_set(const Selection& sel, std::size_t n_conditions,
                                 const std::vector<double>& sigmas);

// Every condition gets the same width.
ConditionSet build_condition_set(const Selection& sel, std::size_t n_conditions,
                                 double sigma);

// Precomputed kernel values f_k(x_j) laid out point-major: row j holds
// all condition values at grid point j, so a single-weight update walks
// one contiguous row.
struct ConditionMatrix {
  std::vector<double> values;  // n_points * n_conditions, point-major
  std::size_t n_points = 0;
  std::size_t n_conditions = 0;

  const double* row(std::size_t j) const {
    return values.data() + j * n_conditions;
  }
};

ConditionMatrix build_condition_matrix(const Grid& g, const ConditionSet& cs);

struct CostBreakdown {
  double condition_term = 0.0;  // sum over k of (F_sim - F_emp)^2
  double entropy = 0.0;
  double total = 0.0;  // condition_term - k_h * entropy
};

// Full cost of a weight vector against a condition set.
CostBreakdown cost(const WeightVector& w, const Grid& g,
                   const ConditionSet& cs, double k_h,
                   EntropyMode mode = EntropyMode::raw);

// Per-condition relative deviations |F_sim - F_emp| / F_emp. Throws
// ZeroEmpiricalAverage when some F_emp is zero.
std::vector<double> relative_condition_errors(const WeightVector& w,
                                              const Grid& g,
                                              const ConditionSet& cs);

}  // namespace maxent
