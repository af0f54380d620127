#pragma once

#include <cstdint>
#include <vector>

#include "toeplitz/period_analysis.hpp"
#include "toeplitz/sequence.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Constructing a Toeplitz sequence inside the orbit closure.
//
// Given a periodic structure for x whose maximal blocks grow fast enough,
// the builder locates an anchored maximal block at every level, picks a
// congruent offset inside the next block with margins of at least one full
// period on both sides, accumulates the resulting shifts k_l, and splices
// the shifted skeletons P_l = Per_{q_l}(x) - k_l into a sequence eta that
// agrees with S^{k_l}(x) on P_l. A growing interval around the origin is
// certified covered; outside the union of the P_l the result is deliberately
// left undefined rather than extrapolated.
// ---------------------------------------------------------------------------

struct ChainEntry {
  std::int64_t q = 1;  // period, divides the next entry's period
  std::int64_t m = 1;  // finite maximal block length at q
};

// Consecutive entries satisfy m_{i+1} >= 3*q_i + m_i.
struct GrowthChain {
  std::vector<ChainEntry> entries;
};

// Greedy subsequence of the finite-M prefix of `ps` in which every kept
// entry clears the margin against the previously kept one. Throws
// InconclusiveError(InsufficientGrowth) when fewer than two entries survive.
GrowthChain refine_growth(const PeriodicStructure& ps);

// Smallest-|m| anchor (ties toward m >= 0) such that the block
// [m, m + block_len - 1] lies in the witnessed skeleton and inside the
// search window. Throws InconclusiveError(AnchorNotFound) if no residue
// starts a run of block_len, and std::invalid_argument for an infinite
// block (a witnessed-periodic input has no business here).
std::int64_t find_anchor(const SequenceRule& x, std::int64_t q,
                         const MpValue& block_len, std::int64_t search_radius);
std::int64_t find_anchor(const SkeletonMap& sk, std::int64_t block_len,
                         std::int64_t search_radius);

struct OffsetChoice {
  std::int64_t s = 0;        // chosen offset, s ≡ m_i (mod q_i)
  std::int64_t d_left = 0;   // s - m_next,                     >= q_i
  std::int64_t d_right = 0;  // (m_next + M_next) - (s + M_i),  >= q_i
};

// Smallest s in [m_next + q_i, m_next + M_next - q_i - M_i] congruent to
// m_i mod q_i. The growth margin guarantees the interval spans a full
// residue system; an empty interval therefore signals an upstream bug.
OffsetChoice choose_offset(std::int64_t m_i, std::int64_t q_i, std::int64_t M_i,
                           std::int64_t m_next, std::int64_t M_next);

struct EtaLevel {
  std::int64_t q = 1;         // q_l
  std::int64_t block = 1;     // M_{q_l} used for the construction
  std::int64_t anchor = 0;    // m_l
  std::int64_t shift = 0;     // k_l
  SkeletonMap p_set;          // P_l = Per_{q_l}(x) - k_l, with eta's symbols
  std::int64_t cover_lo = 0;  // guaranteed interval [cover_lo, cover_hi] in P_l
  std::int64_t cover_hi = 0;
};

struct EtaTransition {
  std::int64_t s = 0;  // s_i between level i and i+1
  std::int64_t d_left = 0;
  std::int64_t d_right = 0;
};

struct EtaConstruction {
  GrowthChain chain;
  std::vector<EtaLevel> levels;
  std::vector<EtaTransition> transitions;  // levels.size() - 1 entries
  SequenceRule eta;                        // splice of the P_l, no filler
  std::int64_t certified_lo = 0;           // deepest guaranteed interval,
  std::int64_t certified_hi = 0;           // inclusive
  std::int64_t skeleton_radius = 0;        // witness window for the skeletons
  std::int64_t verify_radius = 0;          // pointwise re-verification sweep
};

// Runs the whole construction and re-verifies every use of witnessed
// periodicity pointwise: levels covering a common position must agree, the
// guaranteed interval of every level must lie in its P_l, the shifts must
// satisfy q_l | (k_j - k_l), and P_l must land inside the witnessed skeleton
// of eta. Skeletons are witnessed on a window of radius min(search_radius,
// 8 * q_last); the agreement sweep runs out to search_radius, so positions
// beyond the witness window genuinely test the skeletons and a spurious
// witness surfaces as InconclusiveError(ConsistencyViolation) instead of a
// wrong symbol.
EtaConstruction assemble_eta(const SequenceRule& x, const GrowthChain& chain,
                             std::int64_t search_radius);

struct LevelInclusion {
  std::int64_t q = 1;
  bool included = false;  // P_l inside witnessed Per_q(eta)
};

struct EtaReport {
  std::vector<std::int64_t> aperiodic;      // must be empty on covered ground
  bool aperiodic_empty = false;
  std::vector<LevelInclusion> inclusions;
  std::int64_t covered_positions = 0;       // within [-radius, radius)
  std::int64_t gap_positions = 0;           // defined nowhere: deeper levels needed
  RecurrenceReport recurrence;              // recurrence evidence for x itself
};

// Aperiodicity and inclusion summary for a finished construction plus the
// recurrence witness for x (the half of the hypothesis the construction
// itself never touches).
EtaReport toeplitz_report(const SequenceRule& x, const EtaConstruction& c,
                          std::int64_t radius);

}  // namespace toeplitz
