#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "maxent/annealer.hpp"
#include "maxent/core.hpp"
#include "maxent/sigma_solver.hpp"

namespace maxent {

// Benchmark density on [0, 1]: a sixth-degree polynomial in the
// exponent with roots {0.1, 0.2, 0.3, 0.5, 0.8, 0.9}, scaled by 1e4
// and normalized to unit mass. The cdf table supports inverse-transform
// sampling: cdf[i] is the cumulative mass at x = i / (cdf.size() - 1).
struct TestPdf {
  double z = 0.0;  // normalization constant
  std::vector<double> cdf;
};

const TestPdf& test_pdf();

// Density value at x in [0, 1]. Throws OutOfSupport.
double test_pdf_eval(double x);

// n inverse-transform draws, deterministic per seed. Throws
// InvalidCount for n < 2.
Selection sample_test_pdf(std::size_t n, std::uint64_t seed);

// How the (shared) kernel width is chosen for a run.
struct SigmaRule {
  enum class Kind {
    fixed,             // sigma = value
    fraction_of_span,  // sigma = span / value
    sigma0,            // zero-curvature bandwidth, aggregated over centers
    sigma1,            // cubic-root bandwidth, aggregated over centers
    sigma4,            // condition-error bandwidth, aggregated over centers
  };
  Kind kind = Kind::fraction_of_span;
  double value = 30.0;

  static SigmaRule fixed(double v) { return {Kind::fixed, v}; }
  static SigmaRule fraction_of_span(double k) {
    return {Kind::fraction_of_span, k};
  }
  static SigmaRule s0() { return {Kind::sigma0, 0.0}; }
  static SigmaRule s1() { return {Kind::sigma1, 0.0}; }
  static SigmaRule s4() { return {Kind::sigma4, 0.0}; }
};

// Filename-safe tag for a rule, used in emitted CSV names.
std::string rule_tag(const SigmaRule& rule);

struct RunSpec {
  std::size_t n_samples = 1000;
  SigmaRule sigma_rule = SigmaRule::fraction_of_span(30.0);
  EstimatorConfig config{};
  std::uint64_t seed = 1;
  std::size_t replicates = 1;
  // Window width for the derived sigma rules, as a fraction of the span.
  double window_fraction = 0.15;
};

struct ReplicateResult {
  std::uint64_t seed = 0;
  EstimateResult est;
  std::vector<double> true_density;  // empty when the truth is unknown
  double l1 = 0.0;    // trapezoid integral of |estimate - truth|
  double linf = 0.0;  // max pointwise deviation
};

struct RunReport {
  RunSpec spec;
  double sigma_used = 0.0;
  bool sigma_warning = false;  // resolved sigma left [0, span/10]
  bool has_truth = false;      // l1/linf meaningful only when true
  std::vector<ReplicateResult> replicates;
  double l1_mean = 0.0;
  double l1_sd = 0.0;
  double wall_seconds = 0.0;  // in-memory diagnostic; never serialized
};

// Draws n_samples from the test pdf and runs the full pipeline once
// per replicate (seeds derived from spec.seed). l1/linf compare
// against the known truth.
RunReport run(const RunSpec& spec);

// Same pipeline on caller-supplied data; the truth is unknown, so the
// report keeps condition errors only. Derived sigma rules are not
// available here (they need a reference pdf).
RunReport run_on_selection(const Selection& sel, const RunSpec& spec);

// Resolves the rule to a concrete width for this selection. Derived
// rules solve the bandwidth equations at each condition center of the
// reference pdf and take the median admissible value.
double resolve_sigma(const RunSpec& spec, const Selection& sel,
                     bool* warning = nullptr);

struct Curvature {
  double rho_c = 0.0;
  double rho2_c = 0.0;
};

// Value and second central difference of pdf at c with stencil width h.
// Throws StencilOutOfSupport when c +- h leaves [lo, hi].
Curvature local_curvature(const std::function<double(double)>& pdf, double lo,
                          double hi, double c, double h);

// Parameter set serialized into every CSV header comment.
std::vector<std::pair<std::string, std::string>> report_metadata(
    const RunReport& report);

// x, estimated density, and (when known) true density.
void write_density_csv(const RunReport& report, std::size_t replicate,
                       std::ostream& out);

// Condition centers and relative condition errors.
void write_epsilon_csv(const RunReport& report, std::size_t replicate,
                       std::ostream& out);

// Writes fig1_sigma_vs_rho2.csv plus per-report density/epsilon CSVs
// into out_dir. Throws IoFailure on empty input or write failure.
void emit_figures(const std::vector<RunReport>& reports,
                  const std::vector<Figure1Row>& fig1,
                  const std::string& out_dir);

}  // namespace maxent
