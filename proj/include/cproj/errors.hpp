#pragma once

#include <stdexcept>
#include <string>

namespace cpg {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// a hypothesis of the stratification theorem fails at some point
struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InversionError : std::runtime_error {
  InversionError(const std::string& what, double cond) : std::runtime_error(what), conditioning(cond) {}
  double conditioning;
};

struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RefinementRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cpg
