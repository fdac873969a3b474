#pragma once

#include <stdexcept>
#include <string>

namespace qem {

enum class ErrorKind {
  DomainViolation,
  OrderUnsupported,
  InsufficientOrder,
  SingularMetric,
  DimensionTooSmall,
  UnsupportedDimension,
  WrongScalarCurvature,
  NonPositiveWarping,
  NoBoundaryData,
  AmbiguousClassification,
  NotSorted,
  ConstraintViolation,
  ConfigError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

} // namespace qem
