#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dpick {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define DPICK_DECLARE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  };

DPICK_DECLARE_ERROR(InvalidInput)
DPICK_DECLARE_ERROR(NotPositiveDefinite)
DPICK_DECLARE_ERROR(DegenerateConstraint)
DPICK_DECLARE_ERROR(NotSolvable)
DPICK_DECLARE_ERROR(InconsistentWitness)
DPICK_DECLARE_ERROR(NotIsometric)
DPICK_DECLARE_ERROR(OutsideDomain)
DPICK_DECLARE_ERROR(NotDPKernel)
DPICK_DECLARE_ERROR(NotDPOperator)
DPICK_DECLARE_ERROR(NotExtremalWitness)

#undef DPICK_DECLARE_ERROR

/// Input error attributed to one field of a problem or realization file.
class ParseError : public InvalidInput {
 public:
  ParseError(std::string field, const std::string& what)
      : InvalidInput("field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace dpick
