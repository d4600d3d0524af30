#include "edkg/types.hpp"

namespace edkg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateMass: return "DegenerateMass";
    case ErrorKind::EvaluationFailure: return "EvaluationFailure";
    case ErrorKind::AsymmetricGrid: return "AsymmetricGrid";
    case ErrorKind::NonHermitianMetric: return "NonHermitianMetric";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::PairingFailure: return "PairingFailure";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::BranchLost: return "BranchLost";
    case ErrorKind::ComplexBranch: return "ComplexBranch";
    case ErrorKind::RefinementStall: return "RefinementStall";
    case ErrorKind::IllConditionedOverlap: return "IllConditionedOverlap";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  }
  return "Unknown";
}

}  // namespace edkg
