#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vdlab {

enum class Errc {
  InvalidArgument,
  DegenerateInput,
  RootOnBoundary,
  ExactModeRequired,
  NoConvergence,
  AtomOnBoundary,
  IndeterminatePoint,
  BoundaryHitsDivisor,
  OriginOnDivisor,
  AttachOnBoundary,
  EmptySample,
  DegenerateNormalizer,
  InsufficientSamples,
  BasePointOnDivisor,
  NormalizerNotDiverging,
  ConstantMap,
  NotCoprime,
  OriginOnBoundaryDivisor,
  RamifiedAtOrigin,
  IdentityViolation,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace vdlab
