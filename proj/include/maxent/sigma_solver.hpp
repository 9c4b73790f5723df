#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "maxent/errors.hpp"

namespace maxent {

// Solution of the bandwidth cubic
//   (rho''/2) c2 s^3 + rho c1 s - 1/sqrt(2 pi) = 0.
// For rho'' = 0 the equation degenerates to a linear one and `roots`
// holds the single solution sigma0; otherwise all three roots.
struct CubicSolution {
  double discriminant = 0.0;    // sign classifies 3-real vs 1-real
  double rho2_critical = 0.0;   // curvature where the discriminant changes sign
  std::vector<std::complex<double>> roots;
  std::vector<double> real_positive_roots;  // admissible bandwidths
};

// Bandwidth that cancels the leading pdf error at a center with
// density rho_c and curvature rho2_c, given truncation factors c1, c2.
// Throws NonPositiveDensity for rho_c <= 0.
CubicSolution pdf_error_sigma(double rho_c, double rho2_c, double c1,
                              double c2);

// First-order expansion of the admissible root around rho'' = 0:
// sigma0 - c2 rho'' / (2 (2 pi)^{3/2} c1^4 rho^4).
double sigma1_approx(double rho_c, double rho2_c, double c1, double c2);

// Bandwidth canceling the mean total condition error,
//   sigma4 = sqrt(2 c1 rho d^3 / (c2 (24 - rho'' d^3))).
// Empty when rho'' d^3 >= 24 (vertical asymptote at 24/d^3).
std::optional<double> condition_error_sigma(double rho_c, double rho2_c,
                                            double d, double c1, double c2);

// One row of the bandwidth-versus-curvature table: the cubic solution
// and sigma4 at a given curvature.
struct Figure1Row {
  double rho2 = 0.0;
  CubicSolution cubic;
  std::optional<double> sigma4;
};

std::vector<Figure1Row> figure1_data(double rho_c, double d, double c1,
                                     double c2,
                                     const std::vector<double>& rho2_range);

// CSV with one header row naming each column; complex roots are split
// into re/im columns, missing entries are left empty.
void write_figure1_csv(const std::vector<Figure1Row>& rows, std::ostream& out);

}  // namespace maxent
