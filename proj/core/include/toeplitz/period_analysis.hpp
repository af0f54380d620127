#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/sequence.hpp"
#include "toeplitz/skeleton_map.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Period skeletons, essential periods and periodic structures.
//
// Everything here carries window-witness semantics: a residue enters a
// skeleton domain iff every sampled position of its class agreed on one
// symbol, with at least two samples. True periodic residues are therefore
// always in the domain; domain membership itself is only witnessed, never
// proven, except for rule kinds whose skeletons are analytically known.
// ---------------------------------------------------------------------------

// Maximal length of a block of consecutive positions inside a skeleton,
// infinite exactly when the domain is all of Z_p (the sequence is then
// p-periodic as far as the witness can tell).
class MpValue {
 public:
  MpValue() = default;
  static MpValue finite(std::int64_t v);
  static MpValue infinite();

  bool is_infinite() const { return infinite_; }
  std::int64_t value() const;  // throws std::logic_error when infinite
  std::string str() const;

  friend bool operator==(const MpValue& a, const MpValue& b) {
    return a.infinite_ == b.infinite_ && a.value_ == b.value_;
  }
  friend bool operator!=(const MpValue& a, const MpValue& b) { return !(a == b); }
  // Total order with infinity on top.
  friend bool operator<(const MpValue& a, const MpValue& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const MpValue& a, const MpValue& b) {
    return a == b || a < b;
  }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

// Witnessed skeleton of x at period p over the window [-radius, radius).
// Requires radius >= 2p so every residue class has at least two samples.
// Partial rules are sampled only where defined; classes with fewer than two
// defined samples are reported as insufficient evidence (not in domain).
SkeletonMap skeleton(const SequenceRule& x, std::int64_t p, std::int64_t radius);

// Exact skeleton for rules with an analytically known global period
// (constant, periodic, toeplitz_fill and shifts of those). nullopt for
// black-box kinds or when the pattern would be unreasonably long.
std::optional<SkeletonMap> exact_skeleton(const SequenceRule& x, std::int64_t p);

// Longest run of consecutive positions inside the skeleton: infinite when
// the domain is full, otherwise the longest cyclic run of domain residues
// (0 for an empty domain).
MpValue max_block(const SkeletonMap& sk);

// Positions n in [-radius, radius) at which x is defined and whose residue
// lies outside the skeleton domain for *every* p <= period_cap: aperiodic up
// to period_cap at this radius. Membership in the true aperiodic part is
// only suggested by this; it can never be proven from a window.
std::vector<std::int64_t> aperiodic_positions(const SequenceRule& x,
                                              std::int64_t period_cap,
                                              std::int64_t radius);

// Minimal t > 0 such that shifting the skeleton by t preserves domain and
// values. Always a divisor of the period; the period is essential iff the
// stabilizer equals it. Throws std::invalid_argument on an empty domain.
std::int64_t shift_stabilizer(const SkeletonMap& sk);

struct EssentialReduction {
  std::int64_t k = 1;      // minimal divisor with the same witnessed skeleton
  SkeletonMap skeleton_k;  // witnessed skeleton at k
};

// Reduces period p to its essential core k = shift_stabilizer and verifies
// that the skeletons at p and k witness the same set of positions with the
// same maximal block length.
EssentialReduction essential_reduce(const SequenceRule& x, std::int64_t p,
                                    std::int64_t radius);

// Test oracle for the Euclidean reduction step: given a skeleton stable
// under both m1 and m2 (precondition, checked; violations throw), returns
// whether it is also stable under m1 mod m2.
bool remainder_stability(const SkeletonMap& sk, std::int64_t m1, std::int64_t m2);

struct StructureEntry {
  std::int64_t q = 1;          // running lcm of the essential reductions
  MpValue m;                   // max block at q
  std::int64_t raw_p = 1;      // candidate period that contributed
  std::int64_t reduced_k = 1;  // its essential reduction
};

struct PeriodicStructure {
  std::vector<StructureEntry> entries;  // q strictly increasing, q_i | q_{i+1}
  bool witnessed_periodic = false;      // last entry has infinite M
  std::int64_t evidence_radius = 0;

  std::vector<std::int64_t> periods() const {
    std::vector<std::int64_t> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.q);
    return out;
  }
};

// One line per candidate period: what it reduced to, what the running lcm
// became, and whether the entry was kept.
struct StructureTraceRow {
  std::int64_t p = 1;
  std::int64_t reduced_k = 1;
  std::int64_t q = 1;
  MpValue m_q;
  bool kept = false;
  std::string note;
};

struct StructureResult {
  PeriodicStructure structure;
  std::vector<StructureTraceRow> trace;
  // The max-block growth series is a heuristic stand-in for an unbounded
  // limsup; a window can witness growth, never the limit.
  bool growth_witnessed = false;
  std::vector<std::string> notes;
};

// Reduces each candidate to its essential period, chains running lcms,
// deduplicates, and keeps entries whose max block strictly grows. Candidates
// must be sorted ascending and have nonempty witnessed skeletons.
StructureResult analyze_structure(const SequenceRule& x,
                                  const std::vector<std::int64_t>& candidates,
                                  std::int64_t radius);

// Same, but throws InconclusiveError(NoGrowthEvidence) when the candidates
// collapse to a single bounded entry. A terminal infinite entry is a valid
// single-entry structure (the sequence is witnessed periodic).
StructureResult build_periodic_structure(const SequenceRule& x,
                                         const std::vector<std::int64_t>& candidates,
                                         std::int64_t radius);

// All t in [0, p) such that y agrees with x shifted left by t on the
// witnessed skeleton: the witnessed skeleton of y at p equals the witnessed
// skeleton of x shifted by t, domain and values. When the skeleton of x is
// essential there is at most one such t. An empty result means y is not
// aligned with x's p-fiber structure at this radius.
std::vector<std::int64_t> skeleton_align(const SequenceRule& x,
                                         const SequenceRule& y, std::int64_t p,
                                         std::int64_t radius);

}  // namespace toeplitz
