#include "maxent/objective.hpp"

#include <cmath>
#include <string>

namespace maxent {

double gaussian(double x) { return std::exp(-0.5 * x * x); }

double condition_value(double x, double c, double sigma) {
  if (!(sigma > 0.0))
    throw NonPositiveSigma("sigma must be > 0, got " + std::to_string(sigma));
  return gaussian((x - c) / sigma);
}

double empirical_average(const std::vector<double>& sample, double c,
                         double sigma) {
  if (!(sigma > 0.0))
    throw NonPositiveSigma("sigma must be > 0, got " + std::to_string(sigma));
  if (sample.empty()) throw EmptyOrDegenerateSample("empty sample");
  double sum = 0.0;
  for (double x : sample) sum += gaussian((x - c) / sigma);
  return sum / static_cast<double>(sample.size());
}

double simulated_average(const WeightVector& w, const Grid& g, double c,
                         double sigma) {
  if (w.size() != g.n_points)
    throw LengthMismatch("weights/grid size mismatch: " +
                         std::to_string(w.size()) + " vs " +
                         std::to_string(g.n_points));
  if (!(sigma > 0.0))
    throw NonPositiveSigma("sigma must be > 0, got " + std::to_string(sigma));
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    sum += w.weights[j] * gaussian((g.points[j] - c) / sigma);
  return sum / static_cast<double>(w.size());
}

double entropy(const WeightVector& w, EntropyMode mode) {
  double sum = 0.0;
  for (double p : w.weights) {
    if (p < 0.0)
      throw NegativeWeight("negative weight " + std::to_string(p));
    sum += p;
  }
  double scale = 1.0;
  if (mode == EntropyMode::normalized) {
    if (sum <= 0.0) throw AllZeroWeights("cannot normalize zero weights");
    scale = 1.0 / sum;
  }
  double h = 0.0;
  for (double p : w.weights) {
    const double q = p * scale;
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

ConditionSet build_condition_set(const Selection& sel,
                                 std::size_t n_conditions,
                                 const std::vector<double>& sigmas) {
  if (sigmas.size() != n_conditions)
    throw LengthMismatch("expected " + std::to_string(n_conditions) +
                         " sigmas, got " + std::to_string(sigmas.size()));
  ConditionSet cs;
  cs.centers.resize(n_conditions);
  cs.sigmas = sigmas;
  cs.f_emp.resize(n_conditions);
  if (n_conditions == 0) return cs;
  if (n_conditions == 1) {
    // the equidistant rule degenerates; place the lone center midway
    cs.centers[0] = sel.x_min + 0.5 * sel.delta_x;
  } else {
    for (std::size_t k = 0; k < n_conditions; ++k)
      cs.centers[k] = sel.x_min + sel.delta_x * static_cast<double>(k) /
                                      static_cast<double>(n_conditions - 1);
    cs.centers.back() = sel.x_max;
  }
  for (std::size_t k = 0; k < n_conditions; ++k)
    cs.f_emp[k] = empirical_average(sel.values, cs.centers[k], cs.sigmas[k]);
  return cs;
}

ConditionSet build_condition_set(const Selection& sel,
                                 std::size_t n_conditions, double sigma) {
  return build_condition_set(sel, n_conditions,
                             std::vector<double>(n_conditions, sigma));
}

ConditionMatrix build_condition_matrix(const Grid& g, const ConditionSet& cs) {
  ConditionMatrix m;
  m.n_points = g.n_points;
  m.n_conditions = cs.size();
  m.values.resize(m.n_points * m.n_conditions);
  for (std::size_t j = 0; j < m.n_points; ++j) {
    double* row = m.values.data() + j * m.n_conditions;
    for (std::size_t k = 0; k < m.n_conditions; ++k)
      row[k] = condition_value(g.points[j], cs.centers[k], cs.sigmas[k]);
  }
  return m;
}

CostBreakdown cost(const WeightVector& w, const Grid& g, const ConditionSet& cs,
                   double k_h, EntropyMode mode) {
  if (!(k_h > 0.0))
    throw NonPositiveInput("k_h must be > 0, got " + std::to_string(k_h));
  CostBreakdown b;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const double diff =
        simulated_average(w, g, cs.centers[k], cs.sigmas[k]) - cs.f_emp[k];
    b.condition_term += diff * diff;
  }
  b.entropy = entropy(w, mode);
  b.total = b.condition_term - k_h * b.entropy;
  return b;
}

std::vector<double> relative_condition_errors(const WeightVector& w,
                                              const Grid& g,
                                              const ConditionSet& cs) {
  std::vector<double> eps(cs.size());
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (cs.f_emp[k] == 0.0)
      throw ZeroEmpiricalAverage("empirical average is zero at center " +
                                 std::to_string(cs.centers[k]));
    const double sim = simulated_average(w, g, cs.centers[k], cs.sigmas[k]);
    eps[k] = std::abs(sim - cs.f_emp[k]) / cs.f_emp[k];
  }
  return eps;
}

}  // namespace maxent
