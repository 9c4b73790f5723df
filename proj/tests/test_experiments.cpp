#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "maxent/experiments.hpp"
#include "oracles.hpp"

using namespace maxent;

namespace {

// the benchmark exponent polynomial, written out independently
double exponent_poly(double x) {
  return (x - 0.1) * (x - 0.2) * (x - 0.3) * (x - 0.5) * (x - 0.8) * (x - 0.9);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

EstimatorConfig tiny_config() {
  EstimatorConfig cfg;
  cfg.n_points = 64;
  cfg.n_conditions = 9;
  cfg.smoothing_window = 4;
  cfg.sa_params.steps_per_temp = 200;
  return cfg;
}

}  // namespace

TEST_CASE("benchmark pdf") {
  SUBCASE("normalization against quadrature") {
    CHECK(test_pdf().z == doctest::Approx(1.3805163768809578).epsilon(1e-10));
    const double mass =
        oracles::romberg([](double x) { return test_pdf_eval(x); }, 0.0, 1.0,
                         1e-11);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("polynomial roots pin the density to 1/z") {
    for (double r : {0.1, 0.2, 0.3, 0.5, 0.8, 0.9})
      CHECK(test_pdf_eval(r) * test_pdf().z ==
            doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("sign of the exponent decides which side of 1/z") {
    const double base = 1.0 / test_pdf().z;
    for (double x : {0.05, 0.15, 0.25, 0.4, 0.65, 0.85, 0.95}) {
      CAPTURE(x);
      CHECK((test_pdf_eval(x) > base) == (exponent_poly(x) < 0.0));
    }
  }
  SUBCASE("support is enforced") {
    CHECK_THROWS_AS(test_pdf_eval(-0.01), OutOfSupport);
    CHECK_THROWS_AS(test_pdf_eval(1.01), OutOfSupport);
    CHECK(test_pdf_eval(0.0) >= 0.0);
    CHECK(test_pdf_eval(1.0) >= 0.0);
  }
  SUBCASE("cdf table") {
    const std::vector<double>& cdf = test_pdf().cdf;
    REQUIRE(cdf.size() > 2);
    CHECK(cdf.front() == 0.0);
    CHECK(cdf.back() == 1.0);
    for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i] >= cdf[i - 1]);
    // strictly increasing wherever the density is appreciable; the far
    // tails may stall at double precision
    const double h = 1.0 / static_cast<double>(cdf.size() - 1);
    for (std::size_t i = 1; i < cdf.size(); ++i) {
      const double x = static_cast<double>(i) * h;
      if (x >= 0.05 && x <= 0.92) CHECK(cdf[i] > cdf[i - 1]);
    }
  }
}

TEST_CASE("inverse-transform sampler") {
  SUBCASE("draws stay inside the support") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const Selection sel = sample_test_pdf(200, seed);
      CHECK(sel.n == 200);
      CHECK(sel.x_min >= 0.0);
      CHECK(sel.x_max <= 1.0);
    }
  }
  SUBCASE("deterministic per seed") {
    const Selection a = sample_test_pdf(500, 7);
    const Selection b = sample_test_pdf(500, 7);
    const Selection c = sample_test_pdf(500, 8);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
  }
  SUBCASE("rejects degenerate counts") {
    CHECK_THROWS_AS(sample_test_pdf(0, 1), InvalidCount);
    CHECK_THROWS_AS(sample_test_pdf(1, 1), InvalidCount);
  }
  SUBCASE("kernel moment matches quadrature within sampling noise") {
    const double c = 0.5, sigma = 0.5;
    auto kernel = [&](double x) {
      return std::exp(-(x - c) * (x - c) / (2 * sigma * sigma));
    };
    const double want = oracles::romberg(
        [&](double x) { return test_pdf_eval(x) * kernel(x); }, 0.0, 1.0);
    const double want2 = oracles::romberg(
        [&](double x) { return test_pdf_eval(x) * kernel(x) * kernel(x); },
        0.0, 1.0);
    const double var = want2 - want * want;

    const std::size_t n = 1000000;
    const Selection sel = sample_test_pdf(n, 42);
    double sum = 0.0;
    for (double x : sel.values) sum += kernel(x);
    const double got = sum / static_cast<double>(n);
    CHECK(std::abs(got - want) <
          4.0 * std::sqrt(var / static_cast<double>(n)));
  }
}

TEST_CASE("local curvature probe") {
  SUBCASE("exact on quadratics") {
    auto q = [](double x) { return 1.25 - 3.0 * (x - 0.5) * (x - 0.5); };
    const Curvature cv = local_curvature(q, 0.0, 1.0, 0.4, 0.05);
    CHECK(cv.rho_c == doctest::Approx(q(0.4)).epsilon(1e-14));
    CHECK(cv.rho2_c == doctest::Approx(-6.0).epsilon(1e-10));
  }
  SUBCASE("second-order convergence on a smooth function") {
    auto f = [](double x) { return std::sin(3.0 * x); };
    const double truth = -9.0 * std::sin(2.1);
    const double e1 =
        std::abs(local_curvature(f, 0.0, 1.0, 0.7, 0.02).rho2_c - truth);
    const double e2 =
        std::abs(local_curvature(f, 0.0, 1.0, 0.7, 0.01).rho2_c - truth);
    const double e3 =
        std::abs(local_curvature(f, 0.0, 1.0, 0.7, 0.005).rho2_c - truth);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.15));
  }
  SUBCASE("benchmark pdf is concave at its main mode") {
    const Curvature cv = local_curvature(
        [](double x) { return test_pdf_eval(x); }, 0.0, 1.0,
        0.8589646599603102, 1e-3);
    CHECK(cv.rho_c == doctest::Approx(8.2125140860).epsilon(1e-6));
    CHECK(cv.rho2_c < 0.0);
  }
  SUBCASE("stencil validation") {
    auto f = [](double x) { return x; };
    CHECK_THROWS_AS(local_curvature(f, 0.0, 1.0, 0.005, 0.01),
                    StencilOutOfSupport);
    CHECK_THROWS_AS(local_curvature(f, 0.0, 1.0, 0.999, 0.01),
                    StencilOutOfSupport);
    CHECK_THROWS_AS(local_curvature(f, 0.0, 1.0, 0.5, 0.0), NonPositiveInput);
  }
}

TEST_CASE("sigma rules resolve to sensible widths") {
  const Selection sel = sample_test_pdf(500, 7);
  RunSpec spec;
  bool warn = true;

  spec.sigma_rule = SigmaRule::fixed(0.02);
  CHECK(resolve_sigma(spec, sel, &warn) == 0.02);
  CHECK(!warn);

  spec.sigma_rule = SigmaRule::fixed(0.5);
  CHECK(resolve_sigma(spec, sel, &warn) == 0.5);
  CHECK(warn);  // wider than a tenth of the span

  spec.sigma_rule = SigmaRule::fraction_of_span(30.0);
  CHECK(resolve_sigma(spec, sel, &warn) == sel.delta_x / 30.0);
  CHECK(!warn);

  spec.sigma_rule = SigmaRule::s4();
  const double s4 = resolve_sigma(spec, sel, &warn);
  CHECK(s4 > 0.01);
  CHECK(s4 < 0.06);
  CHECK(!warn);

  spec.sigma_rule = SigmaRule::s0();
  const double s0 = resolve_sigma(spec, sel, &warn);
  CHECK(s0 > 0.15);
  CHECK(s0 < 0.35);
  CHECK(warn);

  spec.sigma_rule = SigmaRule::s1();
  const double s1 = resolve_sigma(spec, sel, &warn);
  CHECK(s1 > 0.08);
  CHECK(s1 < 0.25);
  CHECK(warn);

  SUBCASE("invalid parameters") {
    spec.sigma_rule = SigmaRule::fixed(0.0);
    CHECK_THROWS_AS(resolve_sigma(spec, sel), NonPositiveSigma);
    spec.sigma_rule = SigmaRule::fraction_of_span(0.0);
    CHECK_THROWS_AS(resolve_sigma(spec, sel), NonPositiveInput);
    spec.sigma_rule = SigmaRule::s4();
    spec.window_fraction = 0.0;
    CHECK_THROWS_AS(resolve_sigma(spec, sel), NonPositiveInput);
  }
}

TEST_CASE("benchmark run") {
  RunSpec spec;
  spec.n_samples = 200;
  spec.seed = 5;
  spec.replicates = 3;
  spec.config = tiny_config();
  spec.config.n_points = 200;
  spec.config.n_conditions = 21;
  spec.config.smoothing_window = 10;

  const RunReport report = run(spec);
  CHECK(report.has_truth);
  CHECK(report.sigma_used == doctest::Approx(report.replicates[0]
                                                 .est.conditions.sigmas[0]));
  REQUIRE(report.replicates.size() == 3);
  for (const ReplicateResult& rep : report.replicates) {
    CHECK(rep.true_density.size() == 200);
    CHECK(std::isfinite(rep.l1));
    CHECK(rep.l1 > 0.0);
    CHECK(rep.linf >= rep.l1);  // sup dominates the average on unit span
    CHECK(rep.est.cost_trace.empty());
  }
  // distinct annealing seeds give distinct outcomes
  CHECK(report.replicates[0].l1 != report.replicates[1].l1);
  CHECK(report.l1_sd > 0.0);
  CHECK(report.l1_mean ==
        doctest::Approx(oracles::mean({report.replicates[0].l1,
                                       report.replicates[1].l1,
                                       report.replicates[2].l1}))
            .epsilon(1e-14));

  SUBCASE("bit-reproducible") {
    const RunReport again = run(spec);
    CHECK(again.l1_mean == report.l1_mean);
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(again.replicates[r].l1 == report.replicates[r].l1);
      CHECK(again.replicates[r].est.density ==
            report.replicates[r].est.density);
    }
  }
  SUBCASE("replicate count validated") {
    RunSpec bad = spec;
    bad.replicates = 0;
    CHECK_THROWS_AS(run(bad), InvalidCount);
  }
}

TEST_CASE("external-data run") {
  const Selection sel = sample_test_pdf(150, 3);
  RunSpec spec;
  spec.config = tiny_config();
  spec.sigma_rule = SigmaRule::fixed(0.03);

  const RunReport report = run_on_selection(sel, spec);
  CHECK(!report.has_truth);
  REQUIRE(report.replicates.size() == 1);
  CHECK(report.replicates[0].true_density.empty());
  CHECK(std::isnan(report.replicates[0].l1));
  CHECK(std::isnan(report.l1_mean));
  CHECK(report.replicates[0].est.density.size() == 64);
  CHECK(report.replicates[0].est.epsilon.size() == 9);

  SUBCASE("derived rules are refused without a reference pdf") {
    RunSpec derived = spec;
    derived.sigma_rule = SigmaRule::s4();
    CHECK_THROWS_AS(run_on_selection(sel, derived), NoAdmissibleBandwidth);
  }
}

TEST_CASE("rule tags are filename-safe") {
  CHECK(rule_tag(SigmaRule::fixed(0.01)) == "fixed0p01");
  CHECK(rule_tag(SigmaRule::fraction_of_span(30.0)) == "dxover30");
  CHECK(rule_tag(SigmaRule::s0()) == "sigma0");
  CHECK(rule_tag(SigmaRule::s1()) == "sigma1");
  CHECK(rule_tag(SigmaRule::s4()) == "sigma4");
  for (char ch : rule_tag(SigmaRule::fixed(1.5e-3))) {
    CHECK(ch != '.');
    CHECK(ch != '-');
    CHECK(ch != '+');
  }
}

TEST_CASE("report serialization") {
  RunSpec spec;
  spec.n_samples = 120;
  spec.seed = 9;
  spec.config = tiny_config();
  const RunReport report = run(spec);

  SUBCASE("density table") {
    std::ostringstream a, b;
    write_density_csv(report, 0, a);
    write_density_csv(report, 0, b);
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string line;
    std::size_t comments = 0, data = 0;
    std::string header;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] == '#') {
        ++comments;
        CHECK(line.find('=') != std::string::npos);
      } else if (header.empty()) {
        header = line;
      } else if (!line.empty()) {
        ++data;
      }
    }
    CHECK(comments > 10);
    CHECK(header == "x,density_est,density_true");
    CHECK(data == spec.config.n_points);
  }
  SUBCASE("epsilon table") {
    std::ostringstream os;
    write_epsilon_csv(report, 0, os);
    std::istringstream in(os.str());
    std::string line;
    std::size_t data = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!saw_header) {
        CHECK(line == "c,epsilon");
        saw_header = true;
      } else {
        ++data;
      }
    }
    CHECK(data == spec.config.n_conditions);
  }
  SUBCASE("metadata never carries timing") {
    for (const auto& [key, value] : report_metadata(report)) {
      CAPTURE(key);
      CHECK(key.find("wall") == std::string::npos);
      CHECK(key.find("time") == std::string::npos);
      CHECK(!value.empty());
    }
  }
  SUBCASE("headerless truth column for external data") {
    const Selection sel = sample_test_pdf(80, 2);
    RunSpec ext;
    ext.config = tiny_config();
    ext.sigma_rule = SigmaRule::fixed(0.05);
    const RunReport r = run_on_selection(sel, ext);
    std::ostringstream os;
    write_density_csv(r, 0, os);
    CHECK(os.str().find("x,density_est\n") != std::string::npos);
    CHECK(os.str().find("density_true") == std::string::npos);
  }
}

TEST_CASE("figure emission") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / "maxent_fig_test";
  fs::remove_all(dir);

  SUBCASE("refuses to emit nothing") {
    CHECK_THROWS_AS(emit_figures({}, {}, dir.string()), IoFailure);
  }

  RunSpec spec;
  spec.n_samples = 100;
  spec.config = tiny_config();
  const RunReport report = run(spec);
  const std::vector<Figure1Row> fig1 =
      figure1_data(1.0, 1.0, 1.0, 1.0, {-2.0, 0.0, 2.0});

  emit_figures({report}, fig1, dir.string());
  const fs::path f1 = dir / "fig1_sigma_vs_rho2.csv";
  REQUIRE(fs::exists(f1));
  std::vector<fs::path> density_files, epsilon_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("fig2_density_", 0) == 0) density_files.push_back(entry);
    if (name.rfind("fig2_epsilon_", 0) == 0) epsilon_files.push_back(entry);
  }
  REQUIRE(density_files.size() == 1);
  REQUIRE(epsilon_files.size() == 1);
  CHECK(density_files[0].filename().string().find("N100") !=
        std::string::npos);

  SUBCASE("byte-stable across emissions") {
    const std::string before = slurp(f1);
    const std::string density_before = slurp(density_files[0]);
    const fs::path dir2 = fs::temp_directory_path() / "maxent_fig_test2";
    fs::remove_all(dir2);
    emit_figures({report}, fig1, dir2.string());
    CHECK(slurp(dir2 / "fig1_sigma_vs_rho2.csv") == before);
    CHECK(slurp(dir2 / density_files[0].filename()) == density_before);
    fs::remove_all(dir2);
  }
  fs::remove_all(dir);
}
