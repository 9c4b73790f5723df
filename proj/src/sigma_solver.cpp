#include "maxent/sigma_solver.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "maxent/io.hpp"

namespace maxent {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;      // sqrt(2 pi)
constexpr double kTwoPi32 = 15.749609945722419;      // (2 pi)^(3/2)
constexpr double kRealThreshold = 1e-9;              // |Im| below this => real

void check_inputs(double rho_c, double c1, double c2) {
  if (!(rho_c > 0.0))
    throw NonPositiveDensity("rho(c) must be > 0, got " +
                             std::to_string(rho_c));
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw NonPositiveInput("truncation factors must be > 0");
}

std::complex<double> cubic_residual(std::complex<double> s, double rho_c,
                                    double rho2_c, double c1, double c2) {
  return 0.5 * rho2_c * c2 * s * s * s + rho_c * c1 * s - 1.0 / kSqrt2Pi;
}

// A couple of Newton steps in complex arithmetic recover the precision
// lost to cancellation in the closed-form expressions when |rho''| is
// small relative to the linear coefficient.
std::complex<double> polish(std::complex<double> s, double rho_c,
                            double rho2_c, double c1, double c2) {
  for (int i = 0; i < 3; ++i) {
    const std::complex<double> g = cubic_residual(s, rho_c, rho2_c, c1, c2);
    const std::complex<double> dg = 1.5 * rho2_c * c2 * s * s + rho_c * c1;
    if (std::abs(dg) < 1e-300) break;
    const std::complex<double> next = s - g / dg;
    if (next == s) break;
    s = next;
  }
  return s;
}

}  // namespace

CubicSolution pdf_error_sigma(double rho_c, double rho2_c, double c1,
                              double c2) {
  check_inputs(rho_c, c1, c2);
  CubicSolution sol;
  const double rho3 = rho_c * rho_c * rho_c;
  sol.rho2_critical = -(16.0 * std::numbers::pi / 27.0) * c1 * c1 * c1 / c2 * rho3;
  sol.discriminant =
      -rho2_c * (27.0 / (8.0 * std::numbers::pi) * rho2_c * c2 * c2 +
                 2.0 * rho3 * c1 * c1 * c1 * c2);

  if (std::abs(rho2_c) < 1e-12) {
    // the cubic degenerates to rho c1 sigma = 1/sqrt(2 pi)
    const double s0 = 1.0 / (kSqrt2Pi * c1 * rho_c);
    sol.roots = {std::complex<double>(s0, 0.0)};
    sol.real_positive_roots = {s0};
    return sol;
  }

  const std::complex<double> inner =
      std::sqrt(std::complex<double>(1.0 - sol.rho2_critical / rho2_c, 0.0));
  const std::complex<double> a_cubed =
      (1.0 + inner) / (kSqrt2Pi * c2 * rho2_c);
  const std::complex<double> a = std::pow(a_cubed, 1.0 / 3.0);
  const std::complex<double> omega(-0.5, 0.5 * std::numbers::sqrt3);
  const double q = 2.0 * c1 * rho_c / (3.0 * c2 * rho2_c);

  sol.roots.reserve(3);
  for (const std::complex<double> w :
       {std::complex<double>(1.0, 0.0), omega, std::conj(omega)}) {
    const std::complex<double> z = w * a;
    std::complex<double> root = z - q / z;
    root = polish(root, rho_c, rho2_c, c1, c2);
    sol.roots.push_back(root);
    if (std::abs(root.imag()) < kRealThreshold && root.real() > 0.0)
      sol.real_positive_roots.push_back(root.real());
  }
  return sol;
}

double sigma1_approx(double rho_c, double rho2_c, double c1, double c2) {
  check_inputs(rho_c, c1, c2);
  const double rho4 = rho_c * rho_c * rho_c * rho_c;
  const double c14 = c1 * c1 * c1 * c1;
  return 1.0 / (kSqrt2Pi * c1 * rho_c) -
         c2 * rho2_c / (2.0 * kTwoPi32 * c14 * rho4);
}

std::optional<double> condition_error_sigma(double rho_c, double rho2_c,
                                            double d, double c1, double c2) {
  check_inputs(rho_c, c1, c2);
  if (!(d > 0.0))
    throw NonPositiveInput("window width must be > 0, got " +
                           std::to_string(d));
  const double d3 = d * d * d;
  const double denom = 24.0 - rho2_c * d3;
  if (!(denom > 0.0)) return std::nullopt;  // at or beyond the asymptote
  return std::sqrt(2.0 * c1 * rho_c * d3 / (c2 * denom));
}

std::vector<Figure1Row> figure1_data(double rho_c, double d, double c1,
                                     double c2,
                                     const std::vector<double>& rho2_range) {
  std::vector<Figure1Row> rows;
  rows.reserve(rho2_range.size());
  for (double rho2 : rho2_range) {
    Figure1Row row;
    row.rho2 = rho2;
    row.cubic = pdf_error_sigma(rho_c, rho2, c1, c2);
    row.sigma4 = condition_error_sigma(rho_c, rho2, d, c1, c2);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_figure1_csv(const std::vector<Figure1Row>& rows,
                       std::ostream& out) {
  out << "rho2,discriminant,sigma1_re,sigma1_im,sigma1_is_real,"
         "sigma2_re,sigma2_im,sigma2_is_real,"
         "sigma3_re,sigma3_im,sigma3_is_real,real_positive,sigma4\n";
  for (const Figure1Row& row : rows) {
    out << format_double(row.rho2) << ','
        << format_double(row.cubic.discriminant);
    for (std::size_t i = 0; i < 3; ++i) {
      if (i < row.cubic.roots.size()) {
        const std::complex<double> r = row.cubic.roots[i];
        const bool is_real = std::abs(r.imag()) < kRealThreshold;
        out << ',' << format_double(r.real()) << ','
            << format_double(r.imag()) << ',' << (is_real ? '1' : '0');
      } else {
        out << ",,,";
      }
    }
    out << ',';
    for (std::size_t i = 0; i < row.cubic.real_positive_roots.size(); ++i) {
      if (i > 0) out << ';';
      out << format_double(row.cubic.real_positive_roots[i]);
    }
    out << ',';
    if (row.sigma4) out << format_double(*row.sigma4);
    out << '\n';
  }
}

}  // namespace maxent
