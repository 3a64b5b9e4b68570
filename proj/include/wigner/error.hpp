#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wigner {

// Structured failure names. The spelling of each enumerator is the name that
// appears in reports (see to_string).
enum class ErrorKind {
  NonUnitInput,
  DimensionMismatch,
  ImpureInput,
  VanishingComponent,
  IndexOutOfRange,
  NotUnitary,
  BasisImageNotOrthonormal,
  NotOnCircle,
  IndeterminateSign,
  PhaseResidual,
  InconsistentSigns,
  VerificationFailed,
  PropertyViolation,
  NotOrthogonal,
  NotProperRotation,
  PhaseInconsistent,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonUnitInput: return "NonUnitInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ImpureInput: return "ImpureInput";
    case ErrorKind::VanishingComponent: return "VanishingComponent";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::BasisImageNotOrthonormal: return "BasisImageNotOrthonormal";
    case ErrorKind::NotOnCircle: return "NotOnCircle";
    case ErrorKind::IndeterminateSign: return "IndeterminateSign";
    case ErrorKind::PhaseResidual: return "PhaseResidual";
    case ErrorKind::InconsistentSigns: return "InconsistentSigns";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::PropertyViolation: return "PropertyViolation";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::NotProperRotation: return "NotProperRotation";
    case ErrorKind::PhaseInconsistent: return "PhaseInconsistent";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// True for failures that certify the input map is not a Wigner symmetry
// (as opposed to caller mistakes or a failed final verification).
constexpr bool is_rejection(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ImpureInput:
    case ErrorKind::BasisImageNotOrthonormal:
    case ErrorKind::NotOnCircle:
    case ErrorKind::IndeterminateSign:
    case ErrorKind::PhaseResidual:
    case ErrorKind::InconsistentSigns:
    case ErrorKind::PropertyViolation:
    case ErrorKind::NotOrthogonal:
    case ErrorKind::NotProperRotation:
    case ErrorKind::PhaseInconsistent:
      return true;
    default:
      return false;
  }
}

/// Exception carrying an ErrorKind, the 1-based basis indices that witness
/// the failure (possibly empty) and the offending measured quantity.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, std::vector<int> witness = {},
        double measured = 0.0)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        witness_(std::move(witness)),
        measured_(measured) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return to_string(kind_); }
  const std::vector<int>& witness() const noexcept { return witness_; }
  double measured() const noexcept { return measured_; }

 private:
  ErrorKind kind_;
  std::vector<int> witness_;
  double measured_;
};

}  // namespace wigner
