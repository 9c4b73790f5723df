#pragma once

#include <cstddef>

#include "maxent/errors.hpp"

namespace maxent {

// Local description of the density around one condition center c:
// value, curvature, the window width d of D = [c - d/2, c + d/2], the
// kernel width, the entropy weight and the sample size. The first
// derivative rho1_c is accepted for completeness but never used: every
// retained moment formula integrates an odd term to zero over the
// symmetric window.
struct LocalModel {
  double rho_c = 0.0;   // rho(c) > 0
  double rho1_c = 0.0;  // rho'(c), ignored (odd term vanishes on D)
  double rho2_c = 0.0;  // rho''(c)
  double d = 0.0;       // window width > 0
  double sigma = 0.0;   // kernel width > 0
  double k_h = 0.0;     // entropy weight > 0
  std::size_t n = 1;    // sample size >= 1
};

// Correction multipliers for integrating Gaussian moments over the
// finite window D instead of the whole line. All lie in (0, 1] and
// approach their asymptote as sigma/d -> 0: c1, c2, c3 -> 1 while
// c4 -> 1/2 (c4 multiplies the second-moment curvature term and its
// defining integral saturates at one half).
struct TruncationFactors {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

TruncationFactors truncation_factors(double sigma, double d);

// First and second moments of the kernel under the locally quadratic
// density, and the derived quantities that drive the error laws.
struct MomentSet {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double f = 0.0;               // E f1(X)
  double f2 = 0.0;              // E f1(X)^2
  double var_f = 0.0;           // f2 - f^2
  double delta_p = 0.0;         // rho''(c) d^3 / 24
  double fdp_minus_df = 0.0;    // F*dP - dF
};

MomentSet moments(const LocalModel& m);

// Mean and variance of the density error at the center and of the
// total condition error.
struct ErrorStats {
  double mean_drho = 0.0;
  double var_drho = 0.0;
  double mean_dftot = 0.0;
  double var_dftot = 0.0;
};

// Both functions fill the complete struct (the intermediates are
// shared); the names state which part the caller is after.
ErrorStats drho_stats(const LocalModel& m);
ErrorStats dftot_stats(const LocalModel& m);

}  // namespace maxent
