#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgt {

enum class ErrorCode {
  SelfIntersectingPolygon,
  OutletOverlap,
  AttachmentNotOnBoundary,
  DegenerateDomain,
  EmptyFace,
  NoConvergence,
  KNotSymmetric,
  RankDeficientConstraints,
  MonotonicityViolation,
  EigenvalueAtThreshold,
  ModalOverresolution,
  SingularSystem,
  NearSingular,
  KernelEmpty,
  RInsideCutoff,
  PhaseTrackingLost,
  ConfigParse,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wgt
