#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "maxent/rng.hpp"
#include "maxent/sigma_solver.hpp"
#include "oracles.hpp"

using namespace maxent;

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

std::complex<double> residual(std::complex<double> s, double rho, double rho2,
                              double c1, double c2) {
  return 0.5 * rho2 * c2 * s * s * s + rho * c1 * s - kInvSqrt2Pi;
}

std::size_t count_real(const CubicSolution& sol) {
  std::size_t n = 0;
  for (const auto& r : sol.roots)
    if (std::abs(r.imag()) < 1e-9) ++n;
  return n;
}

}  // namespace

TEST_CASE("flat-density bandwidth") {
  const CubicSolution sol = pdf_error_sigma(1.0, 0.0, 1.0, 1.0);
  REQUIRE(sol.roots.size() == 1);
  CHECK(sol.roots[0].real() == doctest::Approx(kInvSqrt2Pi).epsilon(1e-15));
  CHECK(sol.roots[0].imag() == 0.0);
  REQUIRE(sol.real_positive_roots.size() == 1);
  CHECK(sol.real_positive_roots[0] ==
        doctest::Approx(kInvSqrt2Pi).epsilon(1e-15));

  // scaling: sigma0 = 1/(sqrt(2 pi) c1 rho)
  const CubicSolution scaled = pdf_error_sigma(2.0, 0.0, 0.5, 1.0);
  CHECK(scaled.real_positive_roots[0] ==
        doctest::Approx(kInvSqrt2Pi).epsilon(1e-15));
}

TEST_CASE("critical curvature") {
  const CubicSolution sol = pdf_error_sigma(1.0, 1.0, 1.0, 1.0);
  CHECK(sol.rho2_critical ==
        doctest::Approx(-1.8616845354606182).epsilon(1e-15));
  // scales as c1^3 / c2 * rho^3
  const CubicSolution s2 = pdf_error_sigma(2.0, 1.0, 1.0, 1.0);
  CHECK(s2.rho2_critical ==
        doctest::Approx(8.0 * sol.rho2_critical).epsilon(1e-14));
}

TEST_CASE("cubic roots over random inputs") {
  Rng rng(404);
  int classified = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const double rho = rng.uniform(0.1, 5.0);
    const double rho2 = rng.uniform(-5.0, 5.0);
    const double c1 = rng.uniform(0.5, 1.0);
    const double c2 = rng.uniform(0.5, 1.0);
    CAPTURE(trial);
    CAPTURE(rho);
    CAPTURE(rho2);
    const CubicSolution sol = pdf_error_sigma(rho, rho2, c1, c2);

    // every reported root satisfies the equation
    for (const auto& r : sol.roots)
      CHECK(std::abs(residual(r, rho, rho2, c1, c2)) < 1e-10);

    // positive-real filter is exactly the advertised subset
    std::vector<double> expect;
    for (const auto& r : sol.roots)
      if (std::abs(r.imag()) < 1e-9 && r.real() > 0.0)
        expect.push_back(r.real());
    CHECK(sol.real_positive_roots == expect);

    if (std::abs(rho2) < 1e-12) continue;
    REQUIRE(sol.roots.size() == 3);

    // discriminant sign classifies the root pattern (skip near zero)
    if (std::abs(sol.discriminant) > 1e-8) {
      ++classified;
      if (sol.discriminant > 0.0)
        CHECK(count_real(sol) == 3);
      else
        CHECK(count_real(sol) == 1);
    }

    // no quadratic term, so the roots sum to zero
    std::complex<double> sum = 0.0;
    double scale = 1.0;
    for (const auto& r : sol.roots) {
      sum += r;
      scale = std::max(scale, std::abs(r));
    }
    CHECK(std::abs(sum) < 1e-9 * scale);

    // agree with an independent root finder
    const std::vector<std::complex<double>> dk = oracles::polynomial_roots(
        {0.5 * rho2 * c2, 0.0, rho * c1, -kInvSqrt2Pi});
    for (const auto& r : sol.roots) {
      double best = 1e300;
      for (const auto& z : dk) best = std::min(best, std::abs(r - z));
      CHECK(best < 1e-8 * scale);
    }
  }
  CHECK(classified > 250);  // the sweep rarely hits the borderline band
}

TEST_CASE("first-order bandwidth expansion converges quadratically") {
  double prev_err = 1e300;
  for (double rho2 : {1e-2, 1e-4, 1e-6}) {
    const CubicSolution sol = pdf_error_sigma(1.0, rho2, 1.0, 1.0);
    REQUIRE(!sol.real_positive_roots.empty());
    const double root = sol.real_positive_roots.front();
    const double err = std::abs(sigma1_approx(1.0, rho2, 1.0, 1.0) - root);
    CHECK(err < 1e-2 * prev_err);
    prev_err = err;
  }
  // same behaviour on the concave side
  prev_err = 1e300;
  for (double rho2 : {-1e-2, -1e-4, -1e-6}) {
    const CubicSolution sol = pdf_error_sigma(1.0, rho2, 1.0, 1.0);
    REQUIRE(!sol.real_positive_roots.empty());
    double best = 1e300;
    const double approx = sigma1_approx(1.0, rho2, 1.0, 1.0);
    for (double r : sol.real_positive_roots)
      best = std::min(best, std::abs(approx - r));
    CHECK(best < 1e-2 * prev_err);
    prev_err = best;
  }
}

TEST_CASE("condition-error bandwidth") {
  SUBCASE("flat density value") {
    const auto s = condition_error_sigma(1.0, 0.0, 1.0, 1.0, 1.0);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(0.2886751345948129).epsilon(1e-15));
  }
  SUBCASE("diverges toward the asymptote and vanishes past it") {
    const auto near = condition_error_sigma(1.0, 23.9999, 1.0, 1.0, 1.0);
    REQUIRE(near.has_value());
    CHECK(*near > 100.0);
    CHECK(!condition_error_sigma(1.0, 24.0, 1.0, 1.0, 1.0).has_value());
    CHECK(!condition_error_sigma(1.0, 25.0, 1.0, 1.0, 1.0).has_value());
    // asymptote location scales as 24 / d^3
    CHECK(!condition_error_sigma(1.0, 3.1, 2.0, 1.0, 1.0).has_value());
    CHECK(condition_error_sigma(1.0, 2.9, 2.0, 1.0, 1.0).has_value());
  }
  SUBCASE("strictly increasing in curvature") {
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double rho2 = -50.0 + 73.0 * i / 99.0;  // stays below 24
      const auto s = condition_error_sigma(1.0, rho2, 1.0, 1.0, 1.0);
      REQUIRE(s.has_value());
      CHECK(*s > prev);
      prev = *s;
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(condition_error_sigma(0.0, 0.0, 1.0, 1.0, 1.0),
                    NonPositiveDensity);
    CHECK_THROWS_AS(condition_error_sigma(1.0, 0.0, 0.0, 1.0, 1.0),
                    NonPositiveInput);
    CHECK_THROWS_AS(condition_error_sigma(1.0, 0.0, 1.0, 0.0, 1.0),
                    NonPositiveInput);
    CHECK_THROWS_AS(condition_error_sigma(1.0, 0.0, 1.0, 1.0, -1.0),
                    NonPositiveInput);
    CHECK_THROWS_AS(pdf_error_sigma(-1.0, 0.0, 1.0, 1.0), NonPositiveDensity);
    CHECK_THROWS_AS(sigma1_approx(1.0, 0.0, 1.0, 0.0), NonPositiveInput);
  }
}

TEST_CASE("bandwidth table across curvatures") {
  const double crit = pdf_error_sigma(1.0, 1.0, 1.0, 1.0).rho2_critical;
  const std::vector<double> range{1.01 * crit, 0.99 * crit, 0.0, 2.0};
  const std::vector<Figure1Row> rows = figure1_data(1.0, 1.0, 1.0, 1.0, range);
  REQUIRE(rows.size() == 4);

  // below critical: one real root; just above: three
  CHECK(rows[0].rho2 == 1.01 * crit);
  CHECK(count_real(rows[0].cubic) == 1);
  CHECK(count_real(rows[1].cubic) == 3);

  // flat row reproduces both closed forms
  CHECK(rows[2].cubic.real_positive_roots.size() == 1);
  CHECK(rows[2].cubic.real_positive_roots[0] ==
        doctest::Approx(kInvSqrt2Pi).epsilon(1e-14));
  REQUIRE(rows[2].sigma4.has_value());
  CHECK(*rows[2].sigma4 ==
        doctest::Approx(0.2886751345948129).epsilon(1e-14));

  for (const Figure1Row& row : rows)
    for (double r : row.cubic.real_positive_roots) CHECK(r > 0.0);
}

TEST_CASE("bandwidth table serialization") {
  std::vector<double> range;
  for (int i = 0; i <= 20; ++i) range.push_back(-3.0 + 0.3 * i);
  const std::vector<Figure1Row> rows = figure1_data(1.0, 1.0, 1.0, 1.0, range);

  std::ostringstream a, b;
  write_figure1_csv(rows, a);
  write_figure1_csv(rows, b);
  const std::string text = a.str();
  CHECK(text == b.str());

  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "rho2,discriminant,sigma1_re,sigma1_im,sigma1_is_real,"
        "sigma2_re,sigma2_im,sigma2_is_real,"
        "sigma3_re,sigma3_im,sigma3_is_real,real_positive,sigma4");
  std::size_t data_rows = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++data_rows;
  CHECK(data_rows == rows.size());
}
