#include "vdlab/error.hpp"

namespace vdlab {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::RootOnBoundary: return "RootOnBoundary";
    case Errc::ExactModeRequired: return "ExactModeRequired";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::AtomOnBoundary: return "AtomOnBoundary";
    case Errc::IndeterminatePoint: return "IndeterminatePoint";
    case Errc::BoundaryHitsDivisor: return "BoundaryHitsDivisor";
    case Errc::OriginOnDivisor: return "OriginOnDivisor";
    case Errc::AttachOnBoundary: return "AttachOnBoundary";
    case Errc::EmptySample: return "EmptySample";
    case Errc::DegenerateNormalizer: return "DegenerateNormalizer";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::BasePointOnDivisor: return "BasePointOnDivisor";
    case Errc::NormalizerNotDiverging: return "NormalizerNotDiverging";
    case Errc::ConstantMap: return "ConstantMap";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::OriginOnBoundaryDivisor: return "OriginOnBoundaryDivisor";
    case Errc::RamifiedAtOrigin: return "RamifiedAtOrigin";
    case Errc::IdentityViolation: return "IdentityViolation";
  }
  return "Unknown";
}

}  // namespace vdlab
