#include "toeplitz/sequence.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

#include <fmt/format.h>

#include "toeplitz/errors.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Alphabet
// ---------------------------------------------------------------------------

Alphabet::Alphabet(std::vector<std::string> labels) {
  if (labels.empty()) throw std::invalid_argument("alphabet must be nonempty");
  if (labels.size() > (std::size_t{1} << 16))
    throw std::invalid_argument("alphabet larger than 2^16 symbols");
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw std::invalid_argument("empty symbol label");
    if (!seen.insert(l).second)
      throw std::invalid_argument(fmt::format("duplicate symbol label '{}'", l));
  }
  auto d = std::make_shared<Data>();
  d->labels = std::move(labels);
  data_ = std::move(d);
}

const std::string& Alphabet::label(SymbolId id) const {
  require(id);
  return data_->labels[id];
}

const std::vector<std::string>& Alphabet::labels() const {
  static const std::vector<std::string> empty;
  return data_ ? data_->labels : empty;
}

SymbolId Alphabet::id_of(const std::string& label) const {
  if (data_) {
    for (std::size_t i = 0; i < data_->labels.size(); ++i)
      if (data_->labels[i] == label) return static_cast<SymbolId>(i);
  }
  throw std::invalid_argument(fmt::format("symbol '{}' not in alphabet", label));
}

bool Alphabet::contains(const std::string& label) const {
  if (!data_) return false;
  return std::find(data_->labels.begin(), data_->labels.end(), label) !=
         data_->labels.end();
}

void Alphabet::require(SymbolId id) const {
  if (!valid(id))
    throw std::invalid_argument(
        fmt::format("symbol id {} out of range for alphabet of size {}", id, size()));
}

Alphabet letters_alphabet(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    if (i < 26) {
      s.push_back(static_cast<char>('a' + i));
    } else {
      s = "s" + std::to_string(i);
    }
    labels.push_back(std::move(s));
  }
  return Alphabet(std::move(labels));
}

bool is_shift_stable(const SkeletonMap& sk, std::int64_t t) {
  const std::int64_t p = sk.period;
  const std::int64_t tt = mod_floor(t, p);
  for (std::int64_t r = 0; r < p; ++r) {
    const auto& a = sk.slots[static_cast<std::size_t>(r)];
    const auto& b = sk.slots[static_cast<std::size_t>(mod_floor(r + tt, p))];
    if (a.has_value() != b.has_value()) return false;
    if (a && *a != *b) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rule nodes
// ---------------------------------------------------------------------------

namespace detail {

struct ConstantData {
  SymbolId value;
};

struct PeriodicData {
  std::vector<SymbolId> pattern;
};

struct FillData {
  std::vector<FillStage> stages;
  std::int64_t stage_lcm = 1;
  // Winning symbol per residue class mod stage_lcm, resolved at validation
  // time; keeps eval O(1) no matter how many stages there are.
  std::vector<SymbolId> table;
};

struct SubstData {
  std::vector<std::vector<SymbolId>> rules;
  SymbolId seed;
  SymbolId left_seed;
  // Memo buffers for the two limit words. right holds positions 0,1,2,...;
  // left holds ...,-2,-1 with the last element at index -1. Guarded by mu;
  // expansion is deterministic, so concurrent fills agree.
  struct Memo {
    std::vector<SymbolId> right;
    std::vector<SymbolId> left;
    std::mutex mu;
  };
  std::shared_ptr<Memo> memo = std::make_shared<Memo>();
};

struct ShiftData {
  SequenceRule base;
  std::int64_t offset;
};

struct SpliceData {
  std::vector<SkeletonMap> layers;
  std::optional<SequenceRule> filler;
};

struct RuleNode {
  Alphabet alphabet;
  RuleKind kind;
  std::variant<ConstantData, PeriodicData, FillData, SubstData, ShiftData,
               SpliceData>
      data;
};

}  // namespace detail

using detail::RuleNode;

const char* to_string(RuleKind k) {
  switch (k) {
    case RuleKind::constant: return "constant";
    case RuleKind::periodic: return "periodic";
    case RuleKind::toeplitz_fill: return "toeplitz_fill";
    case RuleKind::substitution: return "substitution";
    case RuleKind::shift_of: return "shift_of";
    case RuleKind::splice: return "splice";
  }
  return "?";
}

namespace {

std::shared_ptr<RuleNode> make_node(Alphabet alphabet, RuleKind kind) {
  auto node = std::make_shared<RuleNode>();
  node->alphabet = std::move(alphabet);
  node->kind = kind;
  return node;
}

void require_symbols(const Alphabet& alphabet, const std::vector<SymbolId>& w) {
  for (SymbolId s : w) alphabet.require(s);
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b, std::int64_t cap) {
  const std::int64_t g = std::gcd(a, b);
  const std::int64_t l = (a / g) * b;
  if (l > cap)
    throw std::invalid_argument(
        fmt::format("stage period lcm {} exceeds cap {}", l, cap));
  return l;
}

}  // namespace

SequenceRule SequenceRule::constant(Alphabet alphabet, SymbolId value) {
  alphabet.require(value);
  auto node = make_node(std::move(alphabet), RuleKind::constant);
  node->data = detail::ConstantData{value};
  return SequenceRule(std::move(node));
}

SequenceRule SequenceRule::periodic(Alphabet alphabet,
                                    std::vector<SymbolId> pattern) {
  if (pattern.empty())
    throw std::invalid_argument("periodic rule needs a nonempty pattern");
  require_symbols(alphabet, pattern);
  auto node = make_node(std::move(alphabet), RuleKind::periodic);
  node->data = detail::PeriodicData{std::move(pattern)};
  return SequenceRule(std::move(node));
}

SequenceRule SequenceRule::toeplitz_fill(Alphabet alphabet,
                                         std::vector<FillStage> stages) {
  if (stages.empty())
    throw std::invalid_argument("toeplitz_fill needs at least one stage");
  std::int64_t L = 1;
  for (const auto& st : stages) {
    if (st.period < 1)
      throw std::invalid_argument("stage period must be positive");
    if (st.residue < 0 || st.residue >= st.period)
      throw std::invalid_argument(
          fmt::format("stage residue {} out of range for period {}", st.residue,
                      st.period));
    alphabet.require(st.symbol);
    L = checked_lcm(L, st.period, kDefaultWindowCap);
  }
  // Totality: every residue class mod the stage lcm must be claimed by some
  // stage. This is what makes a fill rule Toeplitz by construction. Claiming
  // classes in stage order resolves first-match-wins into a lookup table.
  std::vector<bool> covered(static_cast<std::size_t>(L), false);
  std::vector<SymbolId> table(static_cast<std::size_t>(L), 0);
  for (const auto& st : stages) {
    for (std::int64_t r = st.residue; r < L; r += st.period) {
      const auto i = static_cast<std::size_t>(r);
      if (!covered[i]) {
        covered[i] = true;
        table[i] = st.symbol;
      }
    }
  }
  for (std::int64_t r = 0; r < L; ++r) {
    if (!covered[static_cast<std::size_t>(r)])
      throw std::invalid_argument(fmt::format(
          "toeplitz_fill stages do not cover residue {} mod {}", r, L));
  }
  auto node = make_node(std::move(alphabet), RuleKind::toeplitz_fill);
  node->data = detail::FillData{std::move(stages), L, std::move(table)};
  return SequenceRule(std::move(node));
}

SequenceRule SequenceRule::substitution(Alphabet alphabet,
                                        std::vector<std::vector<SymbolId>> rules,
                                        SymbolId seed, SymbolId left_seed) {
  if (rules.size() != alphabet.size())
    throw std::invalid_argument(
        "substitution needs exactly one rule per alphabet symbol");
  for (std::size_t s = 0; s < rules.size(); ++s) {
    if (rules[s].empty())
      throw std::invalid_argument(fmt::format(
          "substitution image of '{}' is empty", alphabet.label(static_cast<SymbolId>(s))));
    require_symbols(alphabet, rules[s]);
  }
  alphabet.require(seed);
  alphabet.require(left_seed);
  const auto& rs = rules[seed];
  const auto& lt = rules[left_seed];
  // A genuine two-sided fixed point: the right seed must reproduce itself at
  // the front with strict growth, the left seed at the back.
  if (rs.front() != seed || rs.size() < 2)
    throw std::invalid_argument(
        "substitution has no right fixed point: image of the seed must start "
        "with the seed and have length >= 2");
  if (lt.back() != left_seed || lt.size() < 2)
    throw std::invalid_argument(
        "substitution has no left fixed point: image of the left seed must end "
        "with the left seed and have length >= 2");
  auto node = make_node(std::move(alphabet), RuleKind::substitution);
  detail::SubstData d;
  d.rules = std::move(rules);
  d.seed = seed;
  d.left_seed = left_seed;
  node->data = std::move(d);
  return SequenceRule(std::move(node));
}

SequenceRule SequenceRule::shift_of(SequenceRule base, std::int64_t offset) {
  if (!base.valid()) throw std::invalid_argument("shift_of needs a base rule");
  Alphabet a = base.alphabet();
  auto node = make_node(std::move(a), RuleKind::shift_of);
  node->data = detail::ShiftData{std::move(base), offset};
  return SequenceRule(std::move(node));
}

SequenceRule SequenceRule::splice(Alphabet alphabet,
                                  std::vector<SkeletonMap> layers,
                                  std::optional<SequenceRule> filler) {
  for (const auto& layer : layers) {
    if (layer.period < 1 ||
        layer.slots.size() != static_cast<std::size_t>(layer.period))
      throw std::invalid_argument("malformed skeleton layer");
    for (const auto& slot : layer.slots)
      if (slot) alphabet.require(*slot);
  }
  if (filler && filler->alphabet() != alphabet)
    throw std::invalid_argument("splice filler uses a different alphabet");
  if (layers.empty() && !filler)
    throw std::invalid_argument("splice needs layers or a filler");
  auto node = make_node(std::move(alphabet), RuleKind::splice);
  node->data = detail::SpliceData{std::move(layers), std::move(filler)};
  return SequenceRule(std::move(node));
}

const Alphabet& SequenceRule::alphabet() const {
  if (!node_) throw std::logic_error("empty SequenceRule");
  return node_->alphabet;
}

RuleKind SequenceRule::kind() const {
  if (!node_) throw std::logic_error("empty SequenceRule");
  return node_->kind;
}

namespace {

// Extends the memoized right limit word until it has more than `n` symbols.
// Each pass substitutes the whole buffer; the seed condition guarantees the
// front is stable and the length strictly grows.
void extend_right(const detail::SubstData& d, std::size_t n) {
  auto& right = d.memo->right;
  if (right.empty()) right = {d.seed};
  while (right.size() <= n) {
    std::vector<SymbolId> next;
    next.reserve(right.size() * 2);
    for (SymbolId s : right) {
      const auto& img = d.rules[s];
      next.insert(next.end(), img.begin(), img.end());
      if (next.size() > static_cast<std::size_t>(kDefaultWindowCap))
        throw std::invalid_argument("substitution expansion exceeds window cap");
    }
    right = std::move(next);
  }
}

void extend_left(const detail::SubstData& d, std::size_t n) {
  auto& left = d.memo->left;
  if (left.empty()) left = {d.left_seed};
  while (left.size() < n) {
    std::vector<SymbolId> next;
    next.reserve(left.size() * 2);
    for (SymbolId s : left) {
      const auto& img = d.rules[s];
      next.insert(next.end(), img.begin(), img.end());
      if (next.size() > static_cast<std::size_t>(kDefaultWindowCap))
        throw std::invalid_argument("substitution expansion exceeds window cap");
    }
    left = std::move(next);
  }
}

SymbolId subst_eval(const detail::SubstData& d, std::int64_t n) {
  std::lock_guard<std::mutex> lock(d.memo->mu);
  if (n >= 0) {
    extend_right(d, static_cast<std::size_t>(n));
    return d.memo->right[static_cast<std::size_t>(n)];
  }
  const std::size_t back = static_cast<std::size_t>(-n);  // -1 -> 1
  extend_left(d, back);
  return d.memo->left[d.memo->left.size() - back];
}

}  // namespace

SymbolId SequenceRule::eval(std::int64_t n) const {
  if (!node_) throw std::logic_error("empty SequenceRule");
  const RuleNode* node = node_.get();
  // Iterative unwrap of shift chains keeps deep compositions cheap.
  for (;;) {
    switch (node->kind) {
      case RuleKind::constant:
        return std::get<detail::ConstantData>(node->data).value;
      case RuleKind::periodic: {
        const auto& d = std::get<detail::PeriodicData>(node->data);
        const auto L = static_cast<std::int64_t>(d.pattern.size());
        return d.pattern[static_cast<std::size_t>(mod_floor(n, L))];
      }
      case RuleKind::toeplitz_fill: {
        const auto& d = std::get<detail::FillData>(node->data);
        return d.table[static_cast<std::size_t>(mod_floor(n, d.stage_lcm))];
      }
      case RuleKind::substitution:
        return subst_eval(std::get<detail::SubstData>(node->data), n);
      case RuleKind::shift_of: {
        const auto& d = std::get<detail::ShiftData>(node->data);
        n += d.offset;
        node = d.base.node_.get();
        break;
      }
      case RuleKind::splice: {
        const auto& d = std::get<detail::SpliceData>(node->data);
        for (const auto& layer : d.layers)
          if (auto s = layer.at(n)) return *s;
        if (d.filler) {
          node = d.filler->node_.get();
          break;
        }
        throw UndefinedPosition(
            n, fmt::format("splice rule is undefined at position {}", n));
      }
    }
  }
}

bool SequenceRule::is_defined(std::int64_t n) const {
  if (!node_) throw std::logic_error("empty SequenceRule");
  const RuleNode* node = node_.get();
  for (;;) {
    switch (node->kind) {
      case RuleKind::shift_of: {
        const auto& d = std::get<detail::ShiftData>(node->data);
        n += d.offset;
        node = d.base.node_.get();
        break;
      }
      case RuleKind::splice: {
        const auto& d = std::get<detail::SpliceData>(node->data);
        for (const auto& layer : d.layers)
          if (layer.contains(n)) return true;
        if (!d.filler) return false;
        node = d.filler->node_.get();
        break;
      }
      default:
        return true;
    }
  }
}

bool SequenceRule::total() const {
  if (!node_) throw std::logic_error("empty SequenceRule");
  switch (node_->kind) {
    case RuleKind::shift_of:
      return base().total();
    case RuleKind::splice: {
      const auto& d = std::get<detail::SpliceData>(node_->data);
      if (!d.filler) {
        // Total iff the layers alone cover every class mod their joint lcm.
        std::int64_t L = 1;
        for (const auto& layer : d.layers)
          L = checked_lcm(L, layer.period, kDefaultWindowCap);
        for (std::int64_t r = 0; r < L; ++r) {
          bool hit = false;
          for (const auto& layer : d.layers)
            if (layer.contains(r)) { hit = true; break; }
          if (!hit) return false;
        }
        return true;
      }
      return d.filler->total();
    }
    default:
      return true;
  }
}

std::optional<std::int64_t> SequenceRule::exact_period() const {
  if (!node_) throw std::logic_error("empty SequenceRule");
  switch (node_->kind) {
    case RuleKind::constant:
      return 1;
    case RuleKind::periodic:
      return static_cast<std::int64_t>(pattern().size());
    case RuleKind::toeplitz_fill:
      return std::get<detail::FillData>(node_->data).stage_lcm;
    case RuleKind::shift_of:
      return base().exact_period();
    default:
      return std::nullopt;
  }
}

#define TOEPLITZ_ACCESSOR(Type, name, kind_tag, expr)                      \
  Type SequenceRule::name() const {                                       \
    if (!node_ || node_->kind != RuleKind::kind_tag)                      \
      throw std::logic_error("SequenceRule::" #name ": wrong rule kind"); \
    return expr;                                                          \
  }

TOEPLITZ_ACCESSOR(const std::vector<SymbolId>&, pattern, periodic,
                  std::get<detail::PeriodicData>(node_->data).pattern)
TOEPLITZ_ACCESSOR(SymbolId, constant_value, constant,
                  std::get<detail::ConstantData>(node_->data).value)
TOEPLITZ_ACCESSOR(const std::vector<FillStage>&, stages, toeplitz_fill,
                  std::get<detail::FillData>(node_->data).stages)
TOEPLITZ_ACCESSOR(const std::vector<std::vector<SymbolId>>&, substitution_rules,
                  substitution, std::get<detail::SubstData>(node_->data).rules)
TOEPLITZ_ACCESSOR(SymbolId, seed, substitution,
                  std::get<detail::SubstData>(node_->data).seed)
TOEPLITZ_ACCESSOR(SymbolId, left_seed, substitution,
                  std::get<detail::SubstData>(node_->data).left_seed)
TOEPLITZ_ACCESSOR(const SequenceRule&, base, shift_of,
                  std::get<detail::ShiftData>(node_->data).base)
TOEPLITZ_ACCESSOR(std::int64_t, offset, shift_of,
                  std::get<detail::ShiftData>(node_->data).offset)
TOEPLITZ_ACCESSOR(const std::vector<SkeletonMap>&, layers, splice,
                  std::get<detail::SpliceData>(node_->data).layers)
TOEPLITZ_ACCESSOR(const std::optional<SequenceRule>&, filler, splice,
                  std::get<detail::SpliceData>(node_->data).filler)

#undef TOEPLITZ_ACCESSOR

// ---------------------------------------------------------------------------
// Finite observations
// ---------------------------------------------------------------------------

Window materialize(const SequenceRule& rule, std::int64_t lo, std::int64_t hi,
                   std::int64_t cap) {
  if (lo >= hi) throw std::invalid_argument("materialize: lo must be < hi");
  if (hi - lo > cap)
    throw std::invalid_argument(fmt::format(
        "materialize: window length {} exceeds cap {}", hi - lo, cap));
  Window w;
  w.lo = lo;
  w.hi = hi;
  w.values.reserve(static_cast<std::size_t>(hi - lo));
  for (std::int64_t n = lo; n < hi; ++n) w.values.push_back(rule.eval(n));
  return w;
}

Rational product_distance(const SequenceRule& x, const SequenceRule& y,
                          std::int64_t radius) {
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  if (x.alphabet() != y.alphabet())
    throw std::invalid_argument("product_distance: mismatched alphabets");
  // Accumulate sum(2^(radius-|n|)) over mismatches; one division at the end.
  BigInt num = 0;
  for (std::int64_t n = -radius; n <= radius; ++n) {
    if (x.eval(n) != y.eval(n)) {
      const std::int64_t e = radius - (n < 0 ? -n : n);
      num += BigInt(1) << static_cast<unsigned>(e);
    }
  }
  if (num == 0) return Rational(0);
  return Rational(num, BigInt(1) << static_cast<unsigned>(radius));
}

RecurrenceReport recurrence_gaps(const SequenceRule& x, std::int64_t block_lo,
                                 std::int64_t block_hi,
                                 std::int64_t search_radius) {
  if (block_lo >= block_hi)
    throw std::invalid_argument("recurrence_gaps: empty block");
  if (search_radius < 1)
    throw std::invalid_argument("recurrence_gaps: search radius must be >= 1");
  for (std::int64_t n = block_lo; n < block_hi; ++n)
    if (!x.is_defined(n))
      throw std::invalid_argument(
          fmt::format("recurrence_gaps: block position {} undefined", n));

  std::vector<SymbolId> block;
  block.reserve(static_cast<std::size_t>(block_hi - block_lo));
  for (std::int64_t n = block_lo; n < block_hi; ++n) block.push_back(x.eval(n));

  RecurrenceReport rep;
  rep.block_lo = block_lo;
  rep.block_hi = block_hi;
  rep.search_radius = search_radius;
  for (std::int64_t t = -search_radius; t <= search_radius; ++t) {
    bool match = true;
    for (std::int64_t n = block_lo; n < block_hi; ++n) {
      if (!x.is_defined(n + t) ||
          x.eval(n + t) != block[static_cast<std::size_t>(n - block_lo)]) {
        match = false;
        break;
      }
    }
    if (match) rep.occurrences.push_back(t);
  }
  for (std::size_t i = 1; i < rep.occurrences.size(); ++i)
    rep.max_gap =
        std::max(rep.max_gap, rep.occurrences[i] - rep.occurrences[i - 1]);
  return rep;
}

}  // namespace toeplitz
