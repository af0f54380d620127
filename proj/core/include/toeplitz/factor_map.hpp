#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toeplitz/odometer.hpp"
#include "toeplitz/period_analysis.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// The factor map onto the odometer.
//
// A periodic structure q_1 | q_2 | ... | q_D of essential periods splits the
// sampled orbit closure of x into alignment classes: point y sits in class j
// at level i iff y agrees with S^j(x) on the q_i-skeleton. The vector of
// class indices is coherent across levels and is therefore exactly an
// element of the odometer over the moduli q_i; sending y to that element is
// the factor map pi, with pi(S(y)) = pi(y) + e. The orbit closure itself is
// uncountable: everything here is computed on finite samples of it (shifts
// of x and construction outputs), which is the honest window-scale content.
// ---------------------------------------------------------------------------

struct SkeletonAddress {
  OdometerElement element;            // over moduli {q_i}
  std::vector<std::int64_t> levels;   // j_i = element.coord(i+1)
};

struct LabelledRule {
  std::string label;
  SequenceRule rule;
};

using OrbitSample = std::vector<LabelledRule>;

// Odometer space over the structure periods (truncated to max_depth when
// positive).
OdometerSpace structure_space(const PeriodicStructure& ps,
                              std::size_t max_depth = 0);

// Aligns y against x at every structure level and assembles the coherent
// address. Levels must be essential (rejected otherwise: without
// essentiality the class index is ambiguous). Throws
// InconclusiveError(NoAddress) when some level does not align at this
// radius and InconclusiveError(Incoherent) when alignments contradict the
// divisibility nesting, which indicates a spurious window witness.
SkeletonAddress address(const SequenceRule& y, const SequenceRule& x,
                        const PeriodicStructure& ps, std::int64_t radius);

// Exposed for direct verification: throws Incoherent unless
// j_{i+1} ≡ j_i (mod q_i) along the whole vector.
void require_coherent_levels(const std::vector<std::int64_t>& levels,
                             const std::vector<std::int64_t>& periods);

struct SemiconjugacyVerdict {
  std::int64_t t_min = 0;
  std::int64_t t_max = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

// Checks address(S^t(x)) = t reduced into the odometer for |t| <= t_max and
// the one-step law address(S^{t+1}(x)) = step(address(S^t(x))).
SemiconjugacyVerdict verify_semiconjugacy(const SequenceRule& x,
                                          const PeriodicStructure& ps,
                                          std::int64_t t_max,
                                          std::int64_t radius);

struct LevelPartitionVerdict {
  std::int64_t q = 1;
  bool each_point_one_class = false;  // disjointness + covering on the sample
  bool shift_advances_class = false;  // class(S y) = class(y) + 1, with wrap
  bool nested_in_previous = false;    // class ≡ previous level's (mod q_prev)
  std::vector<std::string> failures;
  bool ok() const {
    return each_point_one_class && shift_advances_class && nested_in_previous;
  }
};

// Verifies, per structure level, that the alignment classes behave as a
// periodic partition on the sample: every point receives exactly one class,
// the shift advances the class cyclically, and classes nest across levels.
std::vector<LevelPartitionVerdict> verify_address_partition(
    const SequenceRule& x, const PeriodicStructure& ps,
    const OrbitSample& sample, std::int64_t radius);

struct FiberGroup {
  std::int64_t address_rep = 0;
  std::string address = "";                       // rendered element
  std::vector<std::string> members;
  // For groups of two or more: positions where members visibly disagree
  // (evidence of a non-singleton fiber, hence of non-Toeplitz members).
  std::vector<std::int64_t> disagreements;
  // For singletons: witnessed aperiodic part empty, i.e. consistent with
  // being a Toeplitz point. Evidence, never proof: the sample is finite.
  bool toeplitz_consistent = false;
};

struct FiberReport {
  std::vector<FiberGroup> groups;
  std::vector<std::pair<std::string, std::string>> unaddressed;  // label, why
};

// Groups the sample by address and reports fiber evidence. `aperiodic_cap`
// bounds the periods scanned for the consistency flag (radius must be at
// least twice it).
FiberReport fiber_report(const SequenceRule& x, const PeriodicStructure& ps,
                         const OrbitSample& sample, std::int64_t radius,
                         std::int64_t aperiodic_cap);

}  // namespace toeplitz
