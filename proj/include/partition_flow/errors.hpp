#pragma once

#include <stdexcept>
#include <string>

namespace partition_flow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define PARTITION_FLOW_ERROR(Name)                 \
  class Name : public Error {                      \
  public:                                          \
    explicit Name(const std::string& what)         \
        : Error(std::string(#Name ": ") + what) {} \
  }

// circle_model
PARTITION_FLOW_ERROR(SpectralPole);
PARTITION_FLOW_ERROR(EpsilonTooLarge);

// grid_model
PARTITION_FLOW_ERROR(SpecError);
PARTITION_FLOW_ERROR(SlitError);
PARTITION_FLOW_ERROR(NotAnEigenvector);

// eigen_core
PARTITION_FLOW_ERROR(ConvergenceFailure);
PARTITION_FLOW_ERROR(FactorizationError);
PARTITION_FLOW_ERROR(InteriorResonance);
PARTITION_FLOW_ERROR(ToleranceAmbiguity);

// flow_analysis
PARTITION_FLOW_ERROR(MonotonicityViolation);
PARTITION_FLOW_ERROR(LevelOnSpectrum);
PARTITION_FLOW_ERROR(NotEquipartition);
PARTITION_FLOW_ERROR(EpsilonWindowEmpty);

#undef PARTITION_FLOW_ERROR

}  // namespace partition_flow
