#include "maxent/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>

#include "maxent/error_analysis.hpp"
#include "maxent/io.hpp"
#include "maxent/quadrature.hpp"
#include "maxent/rng.hpp"

namespace maxent {

namespace {

constexpr double kPolyRoots[6] = {0.1, 0.2, 0.3, 0.5, 0.8, 0.9};
constexpr double kPolyScale = 1e4;
constexpr std::size_t kCdfIntervals = 1u << 15;
constexpr double kSqrt2Pi = 2.5066282746310002;

double unnormalized_pdf(double x) {
  double poly = kPolyScale;
  for (double r : kPolyRoots) poly *= (x - r);
  return std::exp(-poly);
}

TestPdf build_test_pdf() {
  TestPdf pdf;
  pdf.z = integrate([](double x) { return unnormalized_pdf(x); }, 0.0, 1.0,
                    1e-12);
  pdf.cdf.resize(kCdfIntervals + 1);
  pdf.cdf[0] = 0.0;
  const double h = 1.0 / static_cast<double>(kCdfIntervals);
  double prev = unnormalized_pdf(0.0);
  long double acc = 0.0L;
  for (std::size_t i = 1; i <= kCdfIntervals; ++i) {
    const double cur = unnormalized_pdf(static_cast<double>(i) * h);
    acc += 0.5L * (prev + cur) * h;
    pdf.cdf[i] = static_cast<double>(acc);
    prev = cur;
  }
  const double total = pdf.cdf.back();
  for (double& v : pdf.cdf) v /= total;
  pdf.cdf.back() = 1.0;
  return pdf;
}

// splitmix64-style mix of a base seed with a replicate index, so each
// replicate gets an independent, reproducible stream
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double trapezoid_l1(const std::vector<double>& a, const std::vector<double>& b,
                    double bin_width) {
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    const double d0 = std::abs(a[j] - b[j]);
    const double d1 = std::abs(a[j + 1] - b[j + 1]);
    sum += 0.5 * (d0 + d1) * bin_width;
  }
  return sum;
}

std::string sanitize_number(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '.') out.push_back('p');
    else if (ch == '-') out.push_back('m');
    else if (ch == '+') continue;
    else out.push_back(ch);
  }
  return out;
}

std::vector<double> condition_centers(const Selection& sel, std::size_t n_c) {
  std::vector<double> centers(n_c);
  if (n_c == 0) return centers;
  if (n_c == 1) {
    centers[0] = sel.x_min + 0.5 * sel.delta_x;
    return centers;
  }
  for (std::size_t k = 0; k < n_c; ++k)
    centers[k] = sel.x_min + sel.delta_x * static_cast<double>(k) /
                                 static_cast<double>(n_c - 1);
  centers.back() = sel.x_max;
  return centers;
}

ReplicateResult run_replicate(const Selection& sel, const RunSpec& spec,
                              double sigma, std::uint64_t sa_seed,
                              bool with_truth) {
  EstimatorConfig config = spec.config;
  config.sa_params.seed = sa_seed;
  ReplicateResult rep;
  rep.seed = sa_seed;
  rep.est = estimate(sel, config, sigma);
  rep.est.cost_trace.clear();  // can hold millions of entries per run
  rep.est.cost_trace.shrink_to_fit();
  if (with_truth) {
    rep.true_density.resize(rep.est.grid.n_points);
    for (std::size_t j = 0; j < rep.est.grid.n_points; ++j)
      rep.true_density[j] = test_pdf_eval(rep.est.grid.points[j]);
    rep.l1 =
        trapezoid_l1(rep.est.density, rep.true_density, rep.est.grid.bin_width);
    rep.linf = 0.0;
    for (std::size_t j = 0; j < rep.est.grid.n_points; ++j)
      rep.linf = std::max(rep.linf,
                          std::abs(rep.est.density[j] - rep.true_density[j]));
  } else {
    rep.l1 = std::numeric_limits<double>::quiet_NaN();
    rep.linf = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

RunReport finish_report(RunSpec spec, double sigma, bool warning,
                        bool with_truth, std::vector<ReplicateResult> reps,
                        double wall_seconds) {
  RunReport report;
  report.spec = std::move(spec);
  report.sigma_used = sigma;
  report.sigma_warning = warning;
  report.has_truth = with_truth;
  report.replicates = std::move(reps);
  if (with_truth) {
    long double mean = 0.0L;
    for (const ReplicateResult& r : report.replicates) mean += r.l1;
    mean /= static_cast<long double>(report.replicates.size());
    report.l1_mean = static_cast<double>(mean);
    if (report.replicates.size() > 1) {
      long double ss = 0.0L;
      for (const ReplicateResult& r : report.replicates) {
        const long double d = r.l1 - mean;
        ss += d * d;
      }
      report.l1_sd = static_cast<double>(
          std::sqrt(ss / static_cast<long double>(report.replicates.size() - 1)));
    } else {
      report.l1_sd = 0.0;
    }
  } else {
    report.l1_mean = std::numeric_limits<double>::quiet_NaN();
    report.l1_sd = std::numeric_limits<double>::quiet_NaN();
  }
  report.wall_seconds = wall_seconds;
  return report;
}

}  // namespace

const TestPdf& test_pdf() {
  static const TestPdf instance = build_test_pdf();
  return instance;
}

double test_pdf_eval(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw OutOfSupport("x = " + std::to_string(x) + " outside [0, 1]");
  return unnormalized_pdf(x) / test_pdf().z;
}

Selection sample_test_pdf(std::size_t n, std::uint64_t seed) {
  if (n < 2)
    throw InvalidCount("need at least 2 draws, got " + std::to_string(n));
  const TestPdf& pdf = test_pdf();
  Rng rng(seed);
  std::vector<double> values(n);
  const double h = 1.0 / static_cast<double>(kCdfIntervals);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    const auto it = std::upper_bound(pdf.cdf.begin(), pdf.cdf.end(), u);
    const std::size_t hi = static_cast<std::size_t>(it - pdf.cdf.begin());
    const std::size_t lo = hi - 1;  // cdf[0]=0 <= u, so hi >= 1
    const double seg = pdf.cdf[hi] - pdf.cdf[lo];
    const double frac = seg > 0.0 ? (u - pdf.cdf[lo]) / seg : 0.0;
    values[i] = (static_cast<double>(lo) + frac) * h;
  }
  return build_selection(std::move(values));
}

std::string rule_tag(const SigmaRule& rule) {
  switch (rule.kind) {
    case SigmaRule::Kind::fixed:
      return "fixed" + sanitize_number(format_double(rule.value));
    case SigmaRule::Kind::fraction_of_span:
      return "dxover" + sanitize_number(format_double(rule.value));
    case SigmaRule::Kind::sigma0:
      return "sigma0";
    case SigmaRule::Kind::sigma1:
      return "sigma1";
    case SigmaRule::Kind::sigma4:
      return "sigma4";
  }
  return "unknown";
}

Curvature local_curvature(const std::function<double(double)>& pdf, double lo,
                          double hi, double c, double h) {
  if (!(h > 0.0)) throw NonPositiveInput("stencil width must be > 0");
  if (c - h < lo || c + h > hi)
    throw StencilOutOfSupport("stencil [" + std::to_string(c - h) + ", " +
                              std::to_string(c + h) + "] leaves [" +
                              std::to_string(lo) + ", " + std::to_string(hi) +
                              "]");
  Curvature out;
  out.rho_c = pdf(c);
  out.rho2_c = (pdf(c + h) - 2.0 * out.rho_c + pdf(c - h)) / (h * h);
  return out;
}

double resolve_sigma(const RunSpec& spec, const Selection& sel, bool* warning) {
  const double span = sel.delta_x;
  double sigma = 0.0;
  switch (spec.sigma_rule.kind) {
    case SigmaRule::Kind::fixed:
      if (!(spec.sigma_rule.value > 0.0))
        throw NonPositiveSigma("fixed sigma must be > 0");
      sigma = spec.sigma_rule.value;
      break;
    case SigmaRule::Kind::fraction_of_span:
      if (!(spec.sigma_rule.value > 0.0))
        throw NonPositiveInput("span divisor must be > 0");
      sigma = span / spec.sigma_rule.value;
      break;
    default: {
      // Derived rules: solve the bandwidth equations against the
      // benchmark density at each condition center, keep the centers
      // that carry appreciable mass, take the median admissible value.
      if (!(spec.window_fraction > 0.0))
        throw NonPositiveInput("window fraction must be > 0");
      const double d = spec.window_fraction * span;
      const double prov_sigma = span / 30.0;  // provisional width for C1, C2
      const TruncationFactors tf = truncation_factors(prov_sigma, d);
      const std::vector<double> centers =
          condition_centers(sel, spec.config.n_conditions);
      double max_rho = 0.0;
      std::vector<double> rho(centers.size());
      for (std::size_t k = 0; k < centers.size(); ++k) {
        rho[k] = test_pdf_eval(centers[k]);
        max_rho = std::max(max_rho, rho[k]);
      }
      const double stencil = 0.01;
      std::vector<double> candidates;
      for (std::size_t k = 0; k < centers.size(); ++k) {
        if (rho[k] < 0.1 * max_rho) continue;  // skip near-zero density
        const double c = centers[k];
        if (c - stencil < 0.0 || c + stencil > 1.0) continue;
        const Curvature cv = local_curvature(
            [](double x) { return test_pdf_eval(x); }, 0.0, 1.0, c, stencil);
        switch (spec.sigma_rule.kind) {
          case SigmaRule::Kind::sigma0:
            candidates.push_back(1.0 / (kSqrt2Pi * tf.c1 * cv.rho_c));
            break;
          case SigmaRule::Kind::sigma1: {
            const CubicSolution sol =
                pdf_error_sigma(cv.rho_c, cv.rho2_c, tf.c1, tf.c2);
            if (!sol.real_positive_roots.empty()) {
              // smallest positive root continues the rho''=0 branch
              candidates.push_back(*std::min_element(
                  sol.real_positive_roots.begin(),
                  sol.real_positive_roots.end()));
            }
            break;
          }
          default: {
            const std::optional<double> s4 =
                condition_error_sigma(cv.rho_c, cv.rho2_c, d, tf.c1, tf.c2);
            if (s4) candidates.push_back(*s4);
            break;
          }
        }
      }
      if (candidates.empty())
        throw NoAdmissibleBandwidth(
            "no admissible bandwidth at any condition center for rule " +
            rule_tag(spec.sigma_rule));
      std::sort(candidates.begin(), candidates.end());
      const std::size_t m = candidates.size();
      sigma = m % 2 == 1 ? candidates[m / 2]
                         : 0.5 * (candidates[m / 2 - 1] + candidates[m / 2]);
      break;
    }
  }
  if (warning) *warning = sigma > span / 10.0;
  return sigma;
}

RunReport run(const RunSpec& spec) {
  if (spec.replicates < 1) throw InvalidCount("replicates must be >= 1");
  const auto t0 = std::chrono::steady_clock::now();
  const Selection sel = sample_test_pdf(spec.n_samples, spec.seed);
  bool warning = false;
  const double sigma = resolve_sigma(spec, sel, &warning);
  std::vector<ReplicateResult> reps;
  reps.reserve(spec.replicates);
  for (std::size_t r = 0; r < spec.replicates; ++r)
    reps.push_back(
        run_replicate(sel, spec, sigma, derive_seed(spec.seed, r), true));
  const auto t1 = std::chrono::steady_clock::now();
  return finish_report(spec, sigma, warning, true, std::move(reps),
                       std::chrono::duration<double>(t1 - t0).count());
}

RunReport run_on_selection(const Selection& sel, const RunSpec& spec) {
  if (spec.replicates < 1) throw InvalidCount("replicates must be >= 1");
  if (spec.sigma_rule.kind != SigmaRule::Kind::fixed &&
      spec.sigma_rule.kind != SigmaRule::Kind::fraction_of_span)
    throw NoAdmissibleBandwidth(
        "derived sigma rules need the benchmark density; "
        "use a fixed width or a span fraction for external data");
  const auto t0 = std::chrono::steady_clock::now();
  bool warning = false;
  const double sigma = resolve_sigma(spec, sel, &warning);
  std::vector<ReplicateResult> reps;
  reps.reserve(spec.replicates);
  for (std::size_t r = 0; r < spec.replicates; ++r)
    reps.push_back(
        run_replicate(sel, spec, sigma, derive_seed(spec.seed, r), false));
  const auto t1 = std::chrono::steady_clock::now();
  return finish_report(spec, sigma, warning, false, std::move(reps),
                       std::chrono::duration<double>(t1 - t0).count());
}

std::vector<std::pair<std::string, std::string>> report_metadata(
    const RunReport& report) {
  const RunSpec& spec = report.spec;
  const EstimatorConfig& cfg = spec.config;
  const std::size_t steps = cfg.sa_params.steps_per_temp > 0
                                ? cfg.sa_params.steps_per_temp
                                : 20 * cfg.n_points;
  std::vector<std::pair<std::string, std::string>> md;
  md.emplace_back("n_samples", std::to_string(spec.n_samples));
  md.emplace_back("seed", std::to_string(spec.seed));
  md.emplace_back("replicates", std::to_string(spec.replicates));
  md.emplace_back("sigma_rule", rule_tag(spec.sigma_rule));
  md.emplace_back("sigma", format_double(report.sigma_used));
  md.emplace_back("window_fraction", format_double(spec.window_fraction));
  md.emplace_back("n_points", std::to_string(cfg.n_points));
  md.emplace_back("n_conditions", std::to_string(cfg.n_conditions));
  md.emplace_back("k_h", format_double(cfg.k_h));
  md.emplace_back("smoothing_window", std::to_string(cfg.smoothing_window));
  md.emplace_back("entropy_mode", cfg.entropy_mode == EntropyMode::raw
                                      ? "raw"
                                      : "normalized");
  md.emplace_back("t_initial", format_double(cfg.sa_params.t_initial));
  md.emplace_back("cooling", format_double(cfg.sa_params.cooling));
  md.emplace_back("steps_per_temp", std::to_string(steps));
  md.emplace_back("t_min", format_double(cfg.sa_params.t_min));
  md.emplace_back("step_size", format_double(cfg.sa_params.step_size));
  md.emplace_back("has_truth", report.has_truth ? "1" : "0");
  if (!report.replicates.empty()) {
    const Grid& g = report.replicates.front().est.grid;
    md.emplace_back("x_min", format_double(g.points.front()));
    md.emplace_back("x_max", format_double(g.points.back()));
  }
  return md;
}

void write_density_csv(const RunReport& report, std::size_t replicate,
                       std::ostream& out) {
  const ReplicateResult& rep = report.replicates.at(replicate);
  auto md = report_metadata(report);
  md.emplace_back("replicate", std::to_string(replicate));
  md.emplace_back("sa_seed", std::to_string(rep.seed));
  write_comment_header(out, md);
  out << (report.has_truth ? "x,density_est,density_true\n"
                           : "x,density_est\n");
  for (std::size_t j = 0; j < rep.est.grid.n_points; ++j) {
    out << format_double(rep.est.grid.points[j]) << ','
        << format_double(rep.est.density[j]);
    if (report.has_truth) out << ',' << format_double(rep.true_density[j]);
    out << '\n';
  }
}

void write_epsilon_csv(const RunReport& report, std::size_t replicate,
                       std::ostream& out) {
  const ReplicateResult& rep = report.replicates.at(replicate);
  auto md = report_metadata(report);
  md.emplace_back("replicate", std::to_string(replicate));
  md.emplace_back("sa_seed", std::to_string(rep.seed));
  write_comment_header(out, md);
  out << "c,epsilon\n";
  for (std::size_t k = 0; k < rep.est.conditions.size(); ++k) {
    out << format_double(rep.est.conditions.centers[k]) << ','
        << format_double(rep.est.epsilon[k]) << '\n';
  }
}

void emit_figures(const std::vector<RunReport>& reports,
                  const std::vector<Figure1Row>& fig1,
                  const std::string& out_dir) {
  if (reports.empty()) throw IoFailure("NoData: no run reports to emit");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoFailure("cannot create " + out_dir + ": " + ec.message());

  const auto open = [&](const std::string& name) {
    std::ofstream f(out_dir + "/" + name);
    if (!f) throw IoFailure("cannot open " + out_dir + "/" + name);
    return f;
  };

  if (!fig1.empty()) {
    std::ofstream f = open("fig1_sigma_vs_rho2.csv");
    write_figure1_csv(fig1, f);
    if (!f) throw IoFailure("write failure on fig1_sigma_vs_rho2.csv");
  }

  std::vector<std::string> used;
  for (const RunReport& report : reports) {
    std::string base = "N" + std::to_string(report.spec.n_samples) + "_sigma" +
                       rule_tag(report.spec.sigma_rule);
    std::size_t clash = 0;
    std::string name = base;
    while (std::find(used.begin(), used.end(), name) != used.end())
      name = base + "_" + std::to_string(++clash);
    used.push_back(name);
    {
      std::ofstream f = open("fig2_density_" + name + ".csv");
      write_density_csv(report, 0, f);
      if (!f) throw IoFailure("write failure on fig2_density_" + name);
    }
    {
      std::ofstream f = open("fig2_epsilon_" + name + ".csv");
      write_epsilon_csv(report, 0, f);
      if (!f) throw IoFailure("write failure on fig2_epsilon_" + name);
    }
  }
}

}  // namespace maxent
