#include "maxent/error_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace maxent {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;   // sqrt(2 pi)
constexpr double kSqrtPi = 1.7724538509055161;    // sqrt(pi)
constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;

void validate(const LocalModel& m) {
  if (!(m.rho_c > 0.0))
    throw NonPositiveDensity("rho(c) must be > 0, got " +
                             std::to_string(m.rho_c));
  if (!(m.d > 0.0)) throw NonPositiveInput("window width d must be > 0");
  if (!(m.sigma > 0.0)) throw NonPositiveSigma("sigma must be > 0");
  if (!(m.k_h > 0.0)) throw NonPositiveInput("k_h must be > 0");
  if (m.n < 1) throw InvalidCount("sample size must be >= 1");
}

}  // namespace

TruncationFactors truncation_factors(double sigma, double d) {
  if (!(sigma > 0.0))
    throw NonPositiveInput("sigma must be > 0, got " + std::to_string(sigma));
  if (!(d > 0.0))
    throw NonPositiveInput("window width must be > 0, got " +
                           std::to_string(d));
  const double u = d / (2.0 * std::numbers::sqrt2 * sigma);
  const double v = d / (2.0 * sigma);
  TruncationFactors tf;
  tf.c1 = std::erf(u);
  tf.c2 = std::erf(u) - kTwoOverSqrtPi * u * std::exp(-u * u);
  tf.c3 = std::erf(v);
  tf.c4 = 0.5 * (std::erf(v) - kTwoOverSqrtPi * v * std::exp(-v * v));
  return tf;
}

MomentSet moments(const LocalModel& m) {
  validate(m);
  const TruncationFactors tf = truncation_factors(m.sigma, m.d);
  const double s = m.sigma;
  const double s3 = s * s * s;
  MomentSet ms;
  ms.c1 = tf.c1;
  ms.c2 = tf.c2;
  ms.c3 = tf.c3;
  ms.c4 = tf.c4;
  ms.f = kSqrt2Pi * (m.rho_c * tf.c1 * s + 0.5 * m.rho2_c * tf.c2 * s3);
  ms.f2 = kSqrtPi * (m.rho_c * tf.c3 * s + 0.5 * m.rho2_c * tf.c4 * s3);
  ms.var_f = ms.f2 - ms.f * ms.f;
  ms.delta_p = m.rho2_c * m.d * m.d * m.d / 24.0;
  ms.fdp_minus_df =
      0.5 * m.rho2_c * (ms.f * m.d * m.d * m.d / 12.0 - s3 * kSqrt2Pi * tf.c2);
  return ms;
}

ErrorStats dftot_stats(const LocalModel& m) {
  const MomentSet ms = moments(m);
  const double denom = 1.0 + (2.0 / m.k_h) * ms.var_f;
  const double n = static_cast<double>(m.n);
  ErrorStats st;
  st.mean_dftot = ms.fdp_minus_df / denom;
  st.var_dftot = ms.var_f / n / (denom * denom);
  const double one_minus_f = 1.0 - ms.f;
  st.mean_drho = -(2.0 / m.k_h) * m.rho_c * one_minus_f * ms.fdp_minus_df /
                     denom +
                 m.rho_c * ms.delta_p;
  st.var_drho = 4.0 / (n * m.k_h * m.k_h) * m.rho_c * m.rho_c * one_minus_f *
                one_minus_f * ms.var_f / (denom * denom);
  return st;
}

ErrorStats drho_stats(const LocalModel& m) { return dftot_stats(m); }

}  // namespace maxent
