#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jmo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define JMO_DEFINE_ERROR(Name)                                  \
  struct Name : Error {                                         \
    explicit Name(const std::string& msg) : Error(msg) {}      \
  }

// Input / representation errors
JMO_DEFINE_ERROR(SumNotZero);
JMO_DEFINE_ERROR(PeriodTooSmall);
JMO_DEFINE_ERROR(DimensionMismatch);
JMO_DEFINE_ERROR(IndexOutOfRange);
JMO_DEFINE_ERROR(LengthMismatch);

// Spectral computation errors
JMO_DEFINE_ERROR(ConvergenceFailure);
JMO_DEFINE_ERROR(OrderingViolation);
JMO_DEFINE_ERROR(ResidualTooLarge);
JMO_DEFINE_ERROR(BracketFailure);

// MO map errors
JMO_DEFINE_ERROR(NonPositiveArgument);
JMO_DEFINE_ERROR(BelowOne);
JMO_DEFINE_ERROR(NegativeRadicand);

// Gradient errors
JMO_DEFINE_ERROR(DegenerateDenominator);
JMO_DEFINE_ERROR(VanishingSecondDerivative);
JMO_DEFINE_ERROR(SingularJacobian);

// Quasimomentum errors
JMO_DEFINE_ERROR(BranchInconsistency);

#undef JMO_DEFINE_ERROR

// Carries the full continuation path for diagnosis; there is no silent
// fallback because a wrong answer would masquerade as a counterexample
// to the global-isomorphism property of the forward map.
struct HomotopyStalled : Error {
  HomotopyStalled(const std::string& msg,
                  std::vector<std::pair<double, double>> path_)
      : Error(msg), path(std::move(path_)) {}
  std::vector<std::pair<double, double>> path;  // (s, residual)
};

}  // namespace jmo
