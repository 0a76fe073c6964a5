#pragma once

#include <stdexcept>
#include <string>

namespace nexus {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define NEXUS_DEFINE_ERROR(Name)        \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// network-model
NEXUS_DEFINE_ERROR(UnboundGfpp);
NEXUS_DEFINE_ERROR(DanglingNode);
NEXUS_DEFINE_ERROR(ParseError);

// gas-transient
NEXUS_DEFINE_ERROR(InitInfeasible);
NEXUS_DEFINE_ERROR(NonConvergence);
NEXUS_DEFINE_ERROR(NegativePressure);
NEXUS_DEFINE_ERROR(ReallocationImpossible);

// power-commit
NEXUS_DEFINE_ERROR(DimensionMismatch);
NEXUS_DEFINE_ERROR(SolverTimeout);
NEXUS_DEFINE_ERROR(SingularTopology);

// nexus-coupling
NEXUS_DEFINE_ERROR(NoGfppInZone);

// scenario-ingest
NEXUS_DEFINE_ERROR(SchemaError);
NEXUS_DEFINE_ERROR(UnitError);
NEXUS_DEFINE_ERROR(NoHostBus);
NEXUS_DEFINE_ERROR(InfeasibleProfile);

// reliability-studies
NEXUS_DEFINE_ERROR(ZeroPeak);
NEXUS_DEFINE_ERROR(IslandingDetected);

// cli-report
NEXUS_DEFINE_ERROR(IoError);

#undef NEXUS_DEFINE_ERROR

}  // namespace nexus
