#pragma once

#include <stdexcept>
#include <string>

namespace hyper3 {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-friendly tag, e.g. "SingularParameter".
  virtual const char* kind() const noexcept { return "Error"; }
};

#define HYPER3_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                          \
    using Error::Error;                                             \
    const char* kind() const noexcept override { return #Name; }    \
  }

HYPER3_DEFINE_ERROR(DivisionByZero);
HYPER3_DEFINE_ERROR(ParseError);
HYPER3_DEFINE_ERROR(CapMismatch);
HYPER3_DEFINE_ERROR(BadParams);
HYPER3_DEFINE_ERROR(ArityMismatch);
HYPER3_DEFINE_ERROR(NonFinite);
HYPER3_DEFINE_ERROR(SingularParameter);
HYPER3_DEFINE_ERROR(UnknownIdentity);
HYPER3_DEFINE_ERROR(DivergenceSuspected);
HYPER3_DEFINE_ERROR(ConstraintViolated);
HYPER3_DEFINE_ERROR(IntegrandSingular);

#undef HYPER3_DEFINE_ERROR

}  // namespace hyper3
