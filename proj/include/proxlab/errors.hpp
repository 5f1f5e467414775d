#pragma once

#include <stdexcept>
#include <string>

namespace proxlab {

// Base class for all library errors so callers can catch one type at the CLI
// boundary and map it to the input-error exit code.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrix : Error {
  explicit SingularMatrix(const std::string& what) : Error(what) {}
};

struct NumericalFailure : Error {
  explicit NumericalFailure(const std::string& what) : Error(what) {}
};

struct NotProximal : Error {
  explicit NotProximal(const std::string& what) : Error(what) {}
};

struct ResolutionTooLow : Error {
  explicit ResolutionTooLow(const std::string& what) : Error(what) {}
};

struct HypothesisFailed : Error {
  explicit HypothesisFailed(const std::string& what) : Error(what) {}
};

struct ModelMismatch : Error {
  explicit ModelMismatch(const std::string& what) : Error(what) {}
};

struct InvalidInput : Error {
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

struct NotLineal : Error {
  explicit NotLineal(const std::string& what) : Error(what) {}
};

struct FamilyTooSmall : Error {
  FamilyTooSmall(const std::string& what, std::size_t required)
      : Error(what), required_size(required) {}
  std::size_t required_size;
};

struct TooFewPoints : Error {
  using Error::Error;
};

struct NotHyperbolic : Error {
  using Error::Error;
};

struct LowDisplacement : Error {
  using Error::Error;
};

struct BudgetExhausted : Error {
  using Error::Error;
};

struct ScheduleFailure : Error {
  explicit ScheduleFailure(const std::string& what) : Error(what) {}
};

}  // namespace proxlab
