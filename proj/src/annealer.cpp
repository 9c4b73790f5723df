#include "maxent/annealer.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "maxent/rng.hpp"

namespace maxent {

namespace {

void validate_schedule(const AnnealSchedule& s) {
  if (!(s.t_initial > 0.0))
    throw InvalidSchedule("t_initial must be > 0");
  if (!(s.t_min > 0.0)) throw InvalidSchedule("t_min must be > 0");
  if (!(s.t_min < s.t_initial))
    throw InvalidSchedule("t_min must be below t_initial");
  if (!(s.cooling > 0.0) || !(s.cooling < 1.0))
    throw InvalidSchedule("cooling factor must lie in (0, 1)");
  if (!(s.step_size > 0.0)) throw InvalidSchedule("step_size must be > 0");
}

double plnp(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Incrementally maintained cost state. fsim holds the simulated
// averages, pl the sum of p ln p terms, s the weight sum; recompute()
// rebuilds everything from scratch to shed accumulated rounding.
struct CostState {
  std::vector<double> fsim;
  double cond_term = 0.0;
  double pl = 0.0;
  double s = 0.0;

  void recompute(const std::vector<double>& w, const ConditionMatrix& cm,
                 const ConditionSet& cs) {
    const std::size_t np = cm.n_points;
    const std::size_t nc = cm.n_conditions;
    fsim.assign(nc, 0.0);
    for (std::size_t j = 0; j < np; ++j) {
      const double* row = cm.row(j);
      const double p = w[j];
      for (std::size_t k = 0; k < nc; ++k) fsim[k] += p * row[k];
    }
    cond_term = 0.0;
    for (std::size_t k = 0; k < nc; ++k) {
      fsim[k] /= static_cast<double>(np);
      const double diff = fsim[k] - cs.f_emp[k];
      cond_term += diff * diff;
    }
    pl = 0.0;
    s = 0.0;
    for (double p : w) {
      pl += plnp(p);
      s += p;
    }
  }

  double entropy_value(EntropyMode mode) const {
    if (mode == EntropyMode::raw) return -pl;
    if (s <= 0.0) return 0.0;
    return std::log(s) - pl / s;
  }

  double total(double k_h, EntropyMode mode) const {
    return cond_term - k_h * entropy_value(mode);
  }
};

}  // namespace

WeightVector anneal(const Grid& g, const ConditionSet& cs,
                    const EstimatorConfig& config, AnnealDiagnostics* diag) {
  validate_schedule(config.sa_params);
  if (!(config.k_h > 0.0))
    throw NonPositiveInput("k_h must be > 0, got " +
                           std::to_string(config.k_h));
  const AnnealSchedule& sched = config.sa_params;
  const std::size_t np = g.n_points;
  const std::size_t nc = cs.size();
  const std::size_t steps_per_temp =
      sched.steps_per_temp > 0 ? sched.steps_per_temp : 20 * np;
  const double k_h = config.k_h;
  const EntropyMode mode = config.entropy_mode;

  const ConditionMatrix cm = build_condition_matrix(g, cs);
  Rng rng(sched.seed);

  std::vector<double> w(np, 1.0);
  CostState st;
  st.recompute(w, cm, cs);
  double total = st.total(k_h, mode);

  std::vector<double> best_w = w;
  double best_total = total;

  AnnealDiagnostics local;
  AnnealDiagnostics& d = diag ? *diag : local;
  d = AnnealDiagnostics{};

  std::vector<double> new_fsim(nc);
  for (double t = sched.t_initial; t > sched.t_min; t *= sched.cooling) {
    ++d.n_temps;
    for (std::size_t step = 0; step < steps_per_temp; ++step) {
      ++d.proposed;
      const std::size_t j = static_cast<std::size_t>(rng.index(np));
      const double old_p = w[j];
      double new_p = old_p + rng.uniform(-sched.step_size, sched.step_size);
      if (new_p < 0.0) new_p = -new_p;  // reflect at zero
      const double delta = new_p - old_p;

      const double* row = cm.row(j);
      double new_cond = st.cond_term;
      for (std::size_t k = 0; k < nc; ++k) {
        const double f = st.fsim[k] + delta * row[k] / static_cast<double>(np);
        new_fsim[k] = f;
        const double od = st.fsim[k] - cs.f_emp[k];
        const double nd = f - cs.f_emp[k];
        new_cond += nd * nd - od * od;
      }
      const double new_pl = st.pl + plnp(new_p) - plnp(old_p);
      const double new_s = st.s + delta;
      double new_entropy;
      if (mode == EntropyMode::raw) {
        new_entropy = -new_pl;
      } else {
        new_entropy = new_s > 0.0 ? std::log(new_s) - new_pl / new_s : 0.0;
      }
      const double new_total = new_cond - k_h * new_entropy;

      const double diff_e = new_total - total;
      bool accept = diff_e <= 0.0;
      if (!accept) accept = rng.uniform01() < std::exp(-diff_e / t);
      if (!accept) continue;

      w[j] = new_p;
      st.fsim.swap(new_fsim);
      st.cond_term = new_cond;
      st.pl = new_pl;
      st.s = new_s;
      total = new_total;
      ++d.accepted;
      d.cost_trace.push_back(total);
      if (total < best_total) {
        best_total = total;
        best_w = w;
      }
    }
    // refresh from scratch once per temperature to stop rounding drift
    st.recompute(w, cm, cs);
    total = st.total(k_h, mode);
    if (total < best_total) {
      best_total = total;
      best_w = w;
    }
  }

  WeightVector out;
  out.weights = std::move(best_w);
  st.recompute(out.weights, cm, cs);
  d.final_cost.condition_term = st.cond_term;
  d.final_cost.entropy = st.entropy_value(mode);
  d.final_cost.total = d.final_cost.condition_term - k_h * d.final_cost.entropy;
  return out;
}

WeightVector normalize(const WeightVector& w) {
  long double sum = 0.0L;
  for (double p : w.weights) {
    if (p < 0.0) throw NegativeWeight("negative weight " + std::to_string(p));
    sum += p;
  }
  if (!(sum > 0.0L)) throw AllZeroWeights("weight sum is zero");
  WeightVector out;
  out.weights.resize(w.size());
  const double inv = static_cast<double>(1.0L / sum);
  for (std::size_t j = 0; j < w.size(); ++j)
    out.weights[j] = w.weights[j] * inv;
  return out;
}

std::vector<double> moving_average(const std::vector<double>& series,
                                   std::size_t window) {
  if (window == 0) throw NonPositiveInput("window must be >= 1");
  if (window > series.size())
    throw WindowTooLarge("window " + std::to_string(window) +
                         " exceeds series length " +
                         std::to_string(series.size()));
  // symmetric half-width; an even window therefore acts one point wider
  const std::size_t half = window / 2;
  if (half == 0) return series;
  const std::size_t n = series.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t h = half;
    if (i < h) h = i;
    if (n - 1 - i < h) h = n - 1 - i;
    double sum = 0.0;
    for (std::size_t j = i - h; j <= i + h; ++j) sum += series[j];
    out[i] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

EstimateResult estimate(const Selection& sel, const EstimatorConfig& config,
                        const std::vector<double>& sigmas) {
  if (!(config.k_h > 0.0))
    throw NonPositiveInput("k_h must be > 0, got " +
                           std::to_string(config.k_h));
  if (config.n_points < config.n_conditions)
    throw InvalidPointCount("n_points must be >= n_conditions");
  if (config.smoothing_window > config.n_points)
    throw WindowTooLarge("smoothing window exceeds grid size");
  if (sigmas.size() != config.n_conditions)
    throw LengthMismatch("expected " + std::to_string(config.n_conditions) +
                         " sigmas, got " + std::to_string(sigmas.size()));

  EstimateResult r;
  r.grid = build_grid(sel, config.n_points);
  r.conditions = build_condition_set(sel, config.n_conditions, sigmas);

  AnnealDiagnostics diag;
  r.raw_weights = anneal(r.grid, r.conditions, config, &diag);
  r.final_cost = diag.final_cost;
  r.cost_trace = std::move(diag.cost_trace);
  r.epsilon =
      relative_condition_errors(r.raw_weights, r.grid, r.conditions);

  const WeightVector normalized = normalize(r.raw_weights);
  std::vector<double> density = density_from_weights(normalized, r.grid);
  density = moving_average(density, config.smoothing_window);
  long double mass = 0.0L;
  for (double v : density) mass += v;
  mass *= r.grid.bin_width;
  if (!(mass > 0.0L)) throw AllZeroWeights("smoothed density has zero mass");
  const double inv = static_cast<double>(1.0L / mass);
  for (double& v : density) v *= inv;
  r.density = std::move(density);
  return r;
}

EstimateResult estimate(const Selection& sel, const EstimatorConfig& config,
                        double sigma) {
  return estimate(sel, config,
                  std::vector<double>(config.n_conditions, sigma));
}

}  // namespace maxent
