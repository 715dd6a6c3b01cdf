#pragma once

#include <stdexcept>
#include <string>

namespace schurent {

/// Base for every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A distribution or functional parameter is outside its domain
/// (scale <= 0, alpha <= 0, ...).
class ParameterDomainError : public Error {
  public:
    using Error::Error;
};

/// Quantile bracketing failed while building a grid window.
class DiscretizationError : public Error {
  public:
    using Error::Error;
};

/// scale_weight called with a = 0.
class DegenerateWeightError : public Error {
  public:
    using Error::Error;
};

/// Every weight is zero; the sum is a point mass and H = -inf.
class DegenerateSumError : public Error {
  public:
    using Error::Error;
};

class GridIncompatibilityError : public Error {
  public:
    using Error::Error;
};

/// Vector lengths disagree.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A majorization precondition does not hold.
class OrderError : public Error {
  public:
    using Error::Error;
};

/// The density f puts mass where the reference density g vanishes.
class SupportViolationError : public Error {
  public:
    using Error::Error;
};

class CampaignConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace schurent
