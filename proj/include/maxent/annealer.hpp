#pragma once

#include <cstddef>
#include <vector>

#include "maxent/core.hpp"
#include "maxent/objective.hpp"

namespace maxent {

// Optional per-run diagnostics filled by anneal().
struct AnnealDiagnostics {
  std::vector<double> cost_trace;  // total cost after each accepted move
  CostBreakdown final_cost;        // cost of the returned weights
  std::size_t accepted = 0;
  std::size_t proposed = 0;
  std::size_t n_temps = 0;
};

// Minimizes cost(w) = sum_k (F_sim - F_emp)^2 - k_h * H(w) over
// nonnegative raw weights: single-weight uniform perturbations with
// reflection at zero, Metropolis acceptance, geometric cooling.
// Returns the best weights seen. Throws InvalidSchedule on a malformed
// schedule (non-positive temperatures, t_min >= t_initial, cooling
// outside (0,1), non-positive step size).
WeightVector anneal(const Grid& g, const ConditionSet& cs,
                    const EstimatorConfig& config,
                    AnnealDiagnostics* diag = nullptr);

// Divides weights by their sum. Throws AllZeroWeights, NegativeWeight.
WeightVector normalize(const WeightVector& w);

// Centered moving average; the window shrinks symmetrically near the
// edges instead of padding. window == 1 is the identity; window may
// not exceed the series length (WindowTooLarge) or be zero.
std::vector<double> moving_average(const std::vector<double>& series,
                                   std::size_t window);

struct EstimateResult {
  Grid grid;
  ConditionSet conditions;
  WeightVector raw_weights;            // annealer output, pre-normalization
  std::vector<double> density;         // smoothed, renormalized to unit mass
  std::vector<double> epsilon;         // |F_sim - F_emp| / F_emp per center
  std::vector<double> cost_trace;      // accepted total-cost values
  CostBreakdown final_cost;
};

// End-to-end pipeline: grid + conditions from the selection, anneal,
// epsilon on the raw weights, normalize, convert to density, smooth,
// renormalize. sigmas carries one kernel width per condition.
EstimateResult estimate(const Selection& sel, const EstimatorConfig& config,
                        const std::vector<double>& sigmas);

// Same width for every condition.
EstimateResult estimate(const Selection& sel, const EstimatorConfig& config,
                        double sigma);

}  // namespace maxent
