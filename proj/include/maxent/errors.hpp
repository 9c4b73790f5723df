#pragma once

#include <stdexcept>
#include <string>

namespace maxent {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct EmptyOrDegenerateSample : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct InvalidPointCount : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct NonPositiveSigma : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct NegativeWeight : Error { using Error::Error; };
struct ZeroEmpiricalAverage : Error { using Error::Error; };
struct InvalidSchedule : Error { using Error::Error; };
struct AllZeroWeights : Error { using Error::Error; };
struct WindowTooLarge : Error { using Error::Error; };
struct NonPositiveInput : Error { using Error::Error; };
struct NonPositiveDensity : Error { using Error::Error; };
struct OutOfSupport : Error { using Error::Error; };
struct InvalidCount : Error { using Error::Error; };
struct StencilOutOfSupport : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };
struct NoAdmissibleBandwidth : Error { using Error::Error; };

}  // namespace maxent
