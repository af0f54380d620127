#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "toeplitz/alphabet.hpp"
#include "toeplitz/rational.hpp"
#include "toeplitz/skeleton_map.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Two-sided sequences under the left shift.
//
// A SequenceRule is a total (or, for fillerless splices, partially defined)
// deterministic recipe assigning a symbol to every integer index. Rules are
// immutable after construction and validated up front: an invalid rule can
// never be built, and eval never fails on a total rule. All rule kinds are
// safe to evaluate concurrently; internal memo buffers behave as pure caches.
// ---------------------------------------------------------------------------

enum class RuleKind {
  constant,
  periodic,
  toeplitz_fill,
  substitution,
  shift_of,
  splice,
};

const char* to_string(RuleKind k);

// One stage of a toeplitz_fill: positions n ≡ residue (mod period) take
// `symbol`, unless an earlier stage already claimed n (first match wins).
struct FillStage {
  std::int64_t period = 1;
  std::int64_t residue = 0;
  SymbolId symbol = 0;
};

namespace detail {
struct RuleNode;
}

class SequenceRule {
 public:
  SequenceRule() = default;

  // x(n) = value for all n.
  static SequenceRule constant(Alphabet alphabet, SymbolId value);

  // x(n) = pattern[n mod L], L = pattern.size() >= 1.
  static SequenceRule periodic(Alphabet alphabet, std::vector<SymbolId> pattern);

  // Ordered stages, first match wins. Construction validates that every
  // residue class mod lcm(stage periods) is covered, so the rule is total
  // and has an empty aperiodic part by construction.
  static SequenceRule toeplitz_fill(Alphabet alphabet, std::vector<FillStage> stages);

  // Two-sided fixed point of a substitution. `rules` maps every alphabet
  // symbol to a nonempty word; the expansion of `seed` must begin with
  // `seed` and have length >= 2 (right half), and the expansion of
  // `left_seed` must end with `left_seed` and have length >= 2 (left half).
  // Positions n >= 0 read the limit word of the right seed; positions n < 0
  // read the left limit word aligned so that its last symbol sits at n = -1.
  static SequenceRule substitution(Alphabet alphabet,
                                   std::vector<std::vector<SymbolId>> rules,
                                   SymbolId seed, SymbolId left_seed);

  // x(n) = base(n + offset): the power S^offset of the left shift.
  static SequenceRule shift_of(SequenceRule base, std::int64_t offset);

  // Layered periodic skeletons with an optional filler. At position n the
  // first layer whose domain contains n wins; otherwise the filler decides.
  // Without a filler the rule is only defined on the union of the layer
  // domains and eval throws UndefinedPosition outside it -- deliberately, so
  // a constructed sequence never silently extends past certified territory.
  static SequenceRule splice(Alphabet alphabet, std::vector<SkeletonMap> layers,
                             std::optional<SequenceRule> filler);

  bool valid() const { return node_ != nullptr; }

  SymbolId eval(std::int64_t n) const;
  bool is_defined(std::int64_t n) const;
  // False iff a fillerless splice makes some positions undefined.
  bool total() const;

  const Alphabet& alphabet() const;
  RuleKind kind() const;

  // Smallest known L such that eval(n) depends only on n mod L, for rule
  // kinds whose skeletons are analytically computable (constant, periodic,
  // toeplitz_fill and shifts thereof). Not necessarily minimal as a period
  // of the sequence; nullopt for substitution/splice.
  std::optional<std::int64_t> exact_period() const;

  // Structural accessors (throw std::logic_error on kind mismatch).
  const std::vector<SymbolId>& pattern() const;
  SymbolId constant_value() const;
  const std::vector<FillStage>& stages() const;
  const std::vector<std::vector<SymbolId>>& substitution_rules() const;
  SymbolId seed() const;
  SymbolId left_seed() const;
  const SequenceRule& base() const;
  std::int64_t offset() const;
  const std::vector<SkeletonMap>& layers() const;
  const std::optional<SequenceRule>& filler() const;

 private:
  explicit SequenceRule(std::shared_ptr<const detail::RuleNode> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const detail::RuleNode> node_;
};

// ---------------------------------------------------------------------------
// Finite observations
// ---------------------------------------------------------------------------

// Materialized block of a rule on [lo, hi).
struct Window {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::vector<SymbolId> values;

  std::int64_t length() const { return hi - lo; }
  SymbolId at(std::int64_t n) const {
    return values[static_cast<std::size_t>(n - lo)];
  }
};

inline constexpr std::int64_t kDefaultWindowCap = std::int64_t{1} << 22;

// Evaluates rule on [lo, hi). Throws std::invalid_argument when the block is
// longer than `cap` and UndefinedPosition when the rule is partial there.
Window materialize(const SequenceRule& rule, std::int64_t lo, std::int64_t hi,
                   std::int64_t cap = kDefaultWindowCap);

// Truncation of the product metric sum(2^-|n| * rho(x(n), y(n))) to
// |n| <= radius, with rho the discrete metric. Exact: zero iff the rules
// agree on [-radius, radius], and monotone nondecreasing in radius.
Rational product_distance(const SequenceRule& x, const SequenceRule& y,
                          std::int64_t radius);

// Window-scale recurrence witness for the block x[block_lo, block_hi): all
// shifts |t| <= search_radius reproducing the block, and the largest gap
// between consecutive occurrences (0 when fewer than two).
struct RecurrenceReport {
  std::int64_t block_lo = 0;
  std::int64_t block_hi = 0;
  std::int64_t search_radius = 0;
  std::vector<std::int64_t> occurrences;
  std::int64_t max_gap = 0;
};

RecurrenceReport recurrence_gaps(const SequenceRule& x, std::int64_t block_lo,
                                 std::int64_t block_hi,
                                 std::int64_t search_radius);

}  // namespace toeplitz
