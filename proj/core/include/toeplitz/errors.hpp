#pragma once

#include <stdexcept>
#include <string>

namespace toeplitz {

// Error taxonomy used across the library.
//
//   std::invalid_argument  -- bad input / violated precondition (usage)
//   InconclusiveError      -- the finite-window analysis could not establish
//                             the hypothesis (not a bug: raise the radius,
//                             the depth, or supply a different input)
//   InvariantViolation     -- an internal postcondition failed; always a bug
//
// Inconclusive errors carry a stable machine-readable code so that callers
// (notably the CLI) can map them to exit codes and remediation hints.

class InconclusiveError : public std::runtime_error {
 public:
  InconclusiveError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what)
      : std::logic_error(what) {}
};

// Evaluating a partially defined rule (a splice without filler) outside its
// covered residue classes.
class UndefinedPosition : public std::domain_error {
 public:
  UndefinedPosition(long long position, const std::string& what)
      : std::domain_error(what), position_(position) {}

  long long position() const noexcept { return position_; }

 private:
  long long position_;
};

namespace errc {
inline constexpr const char* no_growth_evidence = "NoGrowthEvidence";
inline constexpr const char* insufficient_growth = "InsufficientGrowth";
inline constexpr const char* anchor_not_found = "AnchorNotFound";
inline constexpr const char* consistency_violation = "ConsistencyViolation";
inline constexpr const char* coverage_gap = "CoverageGap";
inline constexpr const char* no_address = "NoAddress";
inline constexpr const char* incoherent = "Incoherent";
inline constexpr const char* not_found = "NotFound";
}  // namespace errc

}  // namespace toeplitz
