#pragma once

#include <stdexcept>
#include <string>

namespace mtb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input rejected on mathematical grounds. The CLI maps every subclass to exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

#define MTB_DOMAIN_ERROR(Name)           \
  class Name : public DomainError {      \
   public:                               \
    using DomainError::DomainError;      \
  }

MTB_DOMAIN_ERROR(NormalizationError);
MTB_DOMAIN_ERROR(DistinctnessError);
MTB_DOMAIN_ERROR(DimensionError);
MTB_DOMAIN_ERROR(WeightError);
MTB_DOMAIN_ERROR(DominationError);
MTB_DOMAIN_ERROR(SizeCapError);
MTB_DOMAIN_ERROR(ParameterError);
MTB_DOMAIN_ERROR(SpaceMismatchError);
MTB_DOMAIN_ERROR(UnsupportedReferenceError);
MTB_DOMAIN_ERROR(KindError);
MTB_DOMAIN_ERROR(PhiPropertyError);
MTB_DOMAIN_ERROR(ArityError);

#undef MTB_DOMAIN_ERROR

// A computed upper bound fell below the quantity it bounds.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace mtb
