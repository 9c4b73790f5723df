#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxent/annealer.hpp"
#include "maxent/experiments.hpp"
#include "maxent/io.hpp"
#include "maxent/sigma_solver.hpp"

namespace {

using maxent::EstimatorConfig;
using maxent::RunReport;
using maxent::RunSpec;
using maxent::SigmaRule;

struct CliOptions {
  EstimatorConfig config;
  bool entropy_normalized = true;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  double window_fraction = 0.15;
};

void add_estimator_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--n-points", o.config.n_points,
                  "number of grid points (N_p)")
      ->capture_default_str();
  cmd->add_option("--n-conditions", o.config.n_conditions,
                  "number of Gaussian conditions (N_c)")
      ->capture_default_str();
  cmd->add_option("--k-h", o.config.k_h, "entropy weight k_H")
      ->capture_default_str();
  cmd->add_option("--smoothing-window", o.config.smoothing_window,
                  "moving-average window for the final density")
      ->capture_default_str();
  cmd->add_flag("--entropy-normalized,!--entropy-raw", o.entropy_normalized,
                "evaluate the cost's entropy on normalized weights "
                "(default) or on the raw weights");
  cmd->add_option("--t-initial", o.config.sa_params.t_initial,
                  "annealing start temperature")
      ->capture_default_str();
  cmd->add_option("--cooling", o.config.sa_params.cooling,
                  "geometric cooling factor")
      ->capture_default_str();
  cmd->add_option("--steps-per-temp", o.config.sa_params.steps_per_temp,
                  "proposals per temperature level (0 = 20 * n_points)")
      ->capture_default_str();
  cmd->add_option("--t-min", o.config.sa_params.t_min,
                  "temperature at which annealing stops")
      ->capture_default_str();
  cmd->add_option("--step-size", o.config.sa_params.step_size,
                  "max additive weight perturbation per move")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "base seed for sampling and annealing")
      ->capture_default_str();
  cmd->add_option("--replicates", o.replicates,
                  "independent annealing repetitions per run")
      ->capture_default_str();
  cmd->add_option("--window-fraction", o.window_fraction,
                  "window width for derived sigma rules, as span fraction")
      ->capture_default_str();
}

RunSpec make_spec(const CliOptions& o, std::size_t n_samples,
                  const SigmaRule& rule) {
  RunSpec spec;
  spec.n_samples = n_samples;
  spec.sigma_rule = rule;
  spec.config = o.config;
  spec.config.entropy_mode = o.entropy_normalized
                                 ? maxent::EntropyMode::normalized
                                 : maxent::EntropyMode::raw;
  spec.seed = o.seed;
  spec.replicates = o.replicates;
  spec.window_fraction = o.window_fraction;
  return spec;
}

SigmaRule parse_rule(const std::string& text) {
  if (text == "sigma0") return SigmaRule::s0();
  if (text == "sigma1") return SigmaRule::s1();
  if (text == "sigma4") return SigmaRule::s4();
  if (text.rfind("frac:", 0) == 0)
    return SigmaRule::fraction_of_span(std::stod(text.substr(5)));
  if (text.rfind("fixed:", 0) == 0)
    return SigmaRule::fixed(std::stod(text.substr(6)));
  throw CLI::ValidationError(
      "sigma rule must be sigma0|sigma1|sigma4|frac:<k>|fixed:<v>, got \"" +
      text + "\"");
}

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& writer) {
  std::ofstream out(path);
  if (!out) throw maxent::IoFailure("cannot open " + path);
  writer(out);
  if (!out) throw maxent::IoFailure("write failure on " + path);
}

void warn_sigma(const RunReport& report) {
  if (report.sigma_warning)
    std::cerr << "warning: resolved sigma " << maxent::format_double(
                     report.sigma_used)
              << " leaves the sanity corridor [0, span/10]\n";
}

int cmd_estimate(const CliOptions& o, const std::string& input,
                 std::size_t column, std::size_t skip_rows, double sigma_fixed,
                 double sigma_fraction, const std::string& out_density,
                 const std::string& out_epsilon) {
  maxent::ReadOptions ropts;
  ropts.column = column;
  ropts.skip_rows = skip_rows;
  const maxent::Selection sel = maxent::read_sample_file(input, ropts);
  const SigmaRule rule = sigma_fixed > 0.0
                             ? SigmaRule::fixed(sigma_fixed)
                             : SigmaRule::fraction_of_span(sigma_fraction);
  const RunSpec spec = make_spec(o, sel.n, rule);
  const RunReport report = maxent::run_on_selection(sel, spec);
  warn_sigma(report);
  write_file(out_density, [&](std::ostream& s) {
    maxent::write_density_csv(report, 0, s);
  });
  write_file(out_epsilon, [&](std::ostream& s) {
    maxent::write_epsilon_csv(report, 0, s);
  });
  std::cout << "density written to " << out_density << ", conditions to "
            << out_epsilon << "\n";
  return 0;
}

int cmd_fig1(double rho, double d, double c1, double c2, double rho2_min,
             double rho2_max, std::size_t steps, const std::string& out) {
  std::vector<double> range(steps);
  for (std::size_t i = 0; i < steps; ++i)
    range[i] = steps == 1 ? rho2_min
                          : rho2_min + (rho2_max - rho2_min) *
                                           static_cast<double>(i) /
                                           static_cast<double>(steps - 1);
  const auto rows = maxent::figure1_data(rho, d, c1, c2, range);
  write_file(out,
             [&](std::ostream& s) { maxent::write_figure1_csv(rows, s); });
  std::cout << "bandwidth table written to " << out << "\n";
  return 0;
}

int cmd_fig2(const CliOptions& o, const std::string& out_dir) {
  // benchmark grid: small-N runs under each sigma rule, then sample
  // growth at the span/30 width
  const std::vector<std::pair<std::size_t, SigmaRule>> cells = {
      {100, SigmaRule::s1()},
      {100, SigmaRule::s4()},
      {100, SigmaRule::fraction_of_span(30.0)},
      {1000, SigmaRule::fraction_of_span(30.0)},
      {10000, SigmaRule::fraction_of_span(30.0)},
  };
  std::vector<RunReport> reports;
  for (const auto& [n, rule] : cells) {
    reports.push_back(maxent::run(make_spec(o, n, rule)));
    warn_sigma(reports.back());
    std::cerr << "N=" << n << " rule=" << maxent::rule_tag(rule)
              << " sigma=" << maxent::format_double(reports.back().sigma_used)
              << " l1=" << maxent::format_double(reports.back().l1_mean)
              << "\n";
  }
  const std::vector<double> rho2_range = [] {
    std::vector<double> r(241);
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] = -3.0 + 6.0 * static_cast<double>(i) /
                        static_cast<double>(r.size() - 1);
    return r;
  }();
  const auto fig1 = maxent::figure1_data(1.0, 1.0, 1.0, 1.0, rho2_range);
  maxent::emit_figures(reports, fig1, out_dir);
  std::cout << "figure data written to " << out_dir << "\n";
  return 0;
}

int cmd_sweep(const CliOptions& o, const std::vector<std::size_t>& n_list,
              const std::vector<std::string>& rule_list, std::size_t n_seeds,
              const std::string& out) {
  std::vector<std::string> lines;
  std::ostringstream body;
  body << "n_samples,sigma_rule,seed,sigma,sigma_warning,l1,linf,"
          "cond_term,entropy,total\n";
  for (std::size_t n : n_list) {
    for (const std::string& rule_text : rule_list) {
      const SigmaRule rule = parse_rule(rule_text);
      for (std::size_t s = 0; s < n_seeds; ++s) {
        CliOptions run_opts = o;
        run_opts.seed = o.seed + s;
        const RunReport report = maxent::run(make_spec(run_opts, n, rule));
        for (const maxent::ReplicateResult& rep : report.replicates) {
          body << n << ',' << maxent::rule_tag(rule) << ',' << run_opts.seed
               << ',' << maxent::format_double(report.sigma_used) << ','
               << (report.sigma_warning ? '1' : '0') << ','
               << maxent::format_double(rep.l1) << ','
               << maxent::format_double(rep.linf) << ','
               << maxent::format_double(rep.est.final_cost.condition_term)
               << ',' << maxent::format_double(rep.est.final_cost.entropy)
               << ',' << maxent::format_double(rep.est.final_cost.total)
               << '\n';
        }
        std::cerr << "N=" << n << " rule=" << rule_text
                  << " seed=" << run_opts.seed
                  << " l1=" << maxent::format_double(report.l1_mean) << "\n";
      }
    }
  }
  write_file(out, [&](std::ostream& s) { s << body.str(); });
  std::cout << "sweep summary written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"maximum-entropy density estimation from a sample"};
  app.require_subcommand(1);

  CliOptions opts;

  // estimate
  std::string input;
  std::size_t column = 0;
  std::size_t skip_rows = 0;
  double sigma_fixed = 0.0;
  double sigma_fraction = 30.0;
  std::string out_density = "density.csv";
  std::string out_epsilon = "epsilon.csv";
  CLI::App* est = app.add_subcommand(
      "estimate", "estimate a density from a sample file");
  est->add_option("--input", input, "sample file (one value per line or CSV)")
      ->required();
  est->add_option("--column", column, "zero-based CSV column")
      ->capture_default_str();
  est->add_option("--skip-rows", skip_rows, "header rows to skip")
      ->capture_default_str();
  est->add_option("--sigma", sigma_fixed,
                  "fixed kernel width (overrides --sigma-fraction)");
  est->add_option("--sigma-fraction", sigma_fraction,
                  "kernel width as span/K")
      ->capture_default_str();
  est->add_option("--out-density", out_density, "density CSV path")
      ->capture_default_str();
  est->add_option("--out-epsilon", out_epsilon, "condition-error CSV path")
      ->capture_default_str();
  add_estimator_flags(est, opts);

  // paper-fig1
  double rho = 1.0, d = 1.0, c1 = 1.0, c2 = 1.0;
  double rho2_min = -3.0, rho2_max = 3.0;
  std::size_t rho2_steps = 241;
  std::string fig1_out = "fig1_sigma_vs_rho2.csv";
  CLI::App* fig1 = app.add_subcommand(
      "paper-fig1", "bandwidth-versus-curvature table");
  fig1->add_option("--rho", rho, "density value at the center")
      ->capture_default_str();
  fig1->add_option("--d", d, "window width")->capture_default_str();
  fig1->add_option("--c1", c1, "first truncation factor")
      ->capture_default_str();
  fig1->add_option("--c2", c2, "second truncation factor")
      ->capture_default_str();
  fig1->add_option("--rho2-min", rho2_min, "curvature range start")
      ->capture_default_str();
  fig1->add_option("--rho2-max", rho2_max, "curvature range end")
      ->capture_default_str();
  fig1->add_option("--rho2-steps", rho2_steps, "number of curvature values")
      ->capture_default_str();
  fig1->add_option("--out", fig1_out, "output CSV path")
      ->capture_default_str();

  // paper-fig2
  std::string fig2_dir = "fig2";
  CLI::App* fig2 = app.add_subcommand(
      "paper-fig2", "benchmark estimation runs and figure data");
  fig2->add_option("--out-dir", fig2_dir, "output directory")
      ->capture_default_str();
  add_estimator_flags(fig2, opts);

  // sweep
  std::vector<std::size_t> n_list{100, 1000};
  std::vector<std::string> rule_list{"frac:30"};
  std::size_t n_seeds = 1;
  std::string sweep_out = "sweep.csv";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "grid of runs over sample sizes, sigma rules and seeds");
  sweep->add_option("--n", n_list, "sample sizes")->capture_default_str();
  sweep->add_option("--rules", rule_list,
                    "sigma rules (sigma0|sigma1|sigma4|frac:<k>|fixed:<v>)")
      ->capture_default_str();
  sweep->add_option("--seeds", n_seeds, "number of consecutive seeds")
      ->capture_default_str();
  sweep->add_option("--out", sweep_out, "summary CSV path")
      ->capture_default_str();
  add_estimator_flags(sweep, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed())
      return cmd_estimate(opts, input, column, skip_rows, sigma_fixed,
                          sigma_fraction, out_density, out_epsilon);
    if (fig1->parsed())
      return cmd_fig1(rho, d, c1, c2, rho2_min, rho2_max, rho2_steps,
                      fig1_out);
    if (fig2->parsed()) return cmd_fig2(opts, fig2_dir);
    if (sweep->parsed())
      return cmd_sweep(opts, n_list, rule_list, n_seeds, sweep_out);
  } catch (const std::exception& e) {
    nlohmann::json err;
    err["error"] = e.what();
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
