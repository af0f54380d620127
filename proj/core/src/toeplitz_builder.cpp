#include "toeplitz/toeplitz_builder.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "toeplitz/errors.hpp"

namespace toeplitz {

GrowthChain refine_growth(const PeriodicStructure& ps) {
  std::vector<ChainEntry> finite;
  for (const auto& e : ps.entries) {
    if (e.m.is_infinite()) break;
    finite.push_back(ChainEntry{e.q, e.m.value()});
  }
  if (finite.size() < 2)
    throw InconclusiveError(
        errc::insufficient_growth,
        fmt::format("need at least two finite-block structure entries, have {}"
                    "{}",
                    finite.size(),
                    ps.witnessed_periodic
                        ? " (input is witnessed periodic; the construction "
                          "needs an aperiodic sequence)"
                        : ""));

  GrowthChain chain;
  chain.entries.push_back(finite.front());
  std::int64_t best_deficit = -1;
  for (std::size_t i = 1; i < finite.size(); ++i) {
    const ChainEntry& last = chain.entries.back();
    const std::int64_t need = 3 * last.q + last.m;
    if (finite[i].m >= need) {
      chain.entries.push_back(finite[i]);
    } else {
      best_deficit = std::max(best_deficit, finite[i].m - need);
    }
  }
  if (chain.entries.size() < 2)
    throw InconclusiveError(
        errc::insufficient_growth,
        fmt::format("no structure entry clears the growth margin after {} "
                    "(best shortfall {})",
                    chain.entries.front().q, best_deficit));
  return chain;
}

std::int64_t find_anchor(const SkeletonMap& sk, std::int64_t block_len,
                         std::int64_t search_radius) {
  const std::int64_t q = sk.period;
  if (block_len < 1)
    throw std::invalid_argument("anchor block length must be >= 1");
  if (block_len >= q && !sk.full_domain())
    throw InconclusiveError(
        errc::anchor_not_found,
        fmt::format("no block of length {} fits a period-{} skeleton",
                    block_len, q));

  bool found = false;
  std::int64_t best = 0;
  auto consider = [&](std::int64_t m) {
    if (m + block_len - 1 >= search_radius || m < -search_radius) return;
    if (!found) {
      best = m;
      found = true;
      return;
    }
    const std::int64_t am = m < 0 ? -m : m;
    const std::int64_t ab = best < 0 ? -best : best;
    if (am < ab || (am == ab && m > best)) best = m;
  };

  for (std::int64_t r = 0; r < q; ++r) {
    bool run = true;
    for (std::int64_t i = 0; i < block_len; ++i) {
      if (!sk.contains(r + i)) {
        run = false;
        break;
      }
    }
    if (!run) continue;
    consider(r);
    consider(r - q);
  }
  if (!found)
    throw InconclusiveError(
        errc::anchor_not_found,
        fmt::format("no anchored block of length {} within radius {} at "
                    "period {} (the witnessed skeleton may be too sparse; "
                    "try a larger radius)",
                    block_len, search_radius, q));
  return best;
}

std::int64_t find_anchor(const SequenceRule& x, std::int64_t q,
                         const MpValue& block_len, std::int64_t search_radius) {
  if (block_len.is_infinite())
    throw std::invalid_argument(
        "find_anchor: infinite block; the input is witnessed periodic and the "
        "construction requires an aperiodic sequence");
  return find_anchor(skeleton(x, q, search_radius), block_len.value(),
                     search_radius);
}

OffsetChoice choose_offset(std::int64_t m_i, std::int64_t q_i, std::int64_t M_i,
                           std::int64_t m_next, std::int64_t M_next) {
  if (M_next < 3 * q_i + M_i)
    throw std::invalid_argument(
        fmt::format("choose_offset: growth margin violated ({} < 3*{} + {})",
                    M_next, q_i, M_i));
  const std::int64_t lo = m_next + q_i;
  const std::int64_t hi = m_next + M_next - q_i - M_i;
  if (hi - lo < q_i - 1)
    throw InvariantViolation(
        "choose_offset: interval shorter than one residue system despite the "
        "growth margin");
  OffsetChoice c;
  c.s = lo + mod_floor(m_i - lo, q_i);
  c.d_left = c.s - m_next;
  c.d_right = (m_next + M_next) - (c.s + M_i);
  if (c.s > hi || c.d_left < q_i || c.d_right < q_i)
    throw InvariantViolation(
        fmt::format("choose_offset: margins collapsed (s={} d_l={} d_r={})",
                    c.s, c.d_left, c.d_right));
  return c;
}

namespace {

void validate_chain(const GrowthChain& chain) {
  if (chain.entries.empty())
    throw std::invalid_argument("assemble_eta: empty growth chain");
  for (std::size_t i = 0; i < chain.entries.size(); ++i) {
    if (chain.entries[i].q < 1 || chain.entries[i].m < 1)
      throw std::invalid_argument("assemble_eta: malformed chain entry");
    if (i > 0) {
      const auto& a = chain.entries[i - 1];
      const auto& b = chain.entries[i];
      if (b.q % a.q != 0 || b.q <= a.q)
        throw std::invalid_argument(
            fmt::format("assemble_eta: chain periods must grow by divisibility "
                        "({} then {})",
                        a.q, b.q));
      if (b.m < 3 * a.q + a.m)
        throw std::invalid_argument(
            fmt::format("assemble_eta: chain margin violated at {} -> {}", a.q,
                        b.q));
    }
  }
}

}  // namespace

EtaConstruction assemble_eta(const SequenceRule& x, const GrowthChain& chain,
                             std::int64_t search_radius) {
  validate_chain(chain);
  const std::size_t L = chain.entries.size();
  const std::int64_t q_last = chain.entries.back().q;
  if (search_radius < 2 * q_last)
    throw std::invalid_argument(
        fmt::format("assemble_eta: radius {} cannot witness period {}",
                    search_radius, q_last));

  EtaConstruction c;
  c.chain = chain;
  // Skeletons are witnessed on a window much smaller than the verification
  // sweep; the sweep then probes positions the witness never saw.
  c.skeleton_radius = std::min(search_radius, 8 * q_last);
  c.verify_radius = search_radius;

  std::vector<SkeletonMap> sks;
  std::vector<std::int64_t> anchors;
  for (const auto& e : chain.entries) {
    SkeletonMap sk = skeleton(x, e.q, c.skeleton_radius);
    anchors.push_back(find_anchor(sk, e.m, c.skeleton_radius));
    sks.push_back(std::move(sk));
  }

  for (std::size_t i = 0; i + 1 < L; ++i) {
    const OffsetChoice oc =
        choose_offset(anchors[i], chain.entries[i].q, chain.entries[i].m,
                      anchors[i + 1], chain.entries[i + 1].m);
    c.transitions.push_back(EtaTransition{oc.s, oc.d_left, oc.d_right});
  }

  std::vector<std::int64_t> shifts(L);
  shifts[0] = anchors[0];
  for (std::size_t j = 1; j < L; ++j)
    shifts[j] = shifts[j - 1] + (c.transitions[j - 1].s - anchors[j - 1]);

  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t j = l + 1; j < L; ++j)
      if (mod_floor(shifts[j] - shifts[l], chain.entries[l].q) != 0)
        throw InvariantViolation(
            fmt::format("assemble_eta: q_{} does not divide k_{} - k_{}", l + 1,
                        j + 1, l + 1));

  // P_l and the guaranteed coverage interval per level.
  std::int64_t partial = 0;  // sum of q_i below the current level
  const std::int64_t m1 = chain.entries.front().m;
  std::vector<SkeletonMap> p_sets;
  for (std::size_t l = 0; l < L; ++l) {
    EtaLevel level;
    level.q = chain.entries[l].q;
    level.block = chain.entries[l].m;
    level.anchor = anchors[l];
    level.shift = shifts[l];
    level.p_set = sks[l].shifted(shifts[l]);
    level.cover_lo = -partial;
    level.cover_hi = m1 - 1 + partial;
    for (std::int64_t n = level.cover_lo; n <= level.cover_hi; ++n)
      if (!level.p_set.contains(n))
        throw InvariantViolation(fmt::format(
            "assemble_eta: guaranteed interval escapes P_{} at {}", l + 1, n));
    p_sets.push_back(level.p_set);
    c.levels.push_back(std::move(level));
    partial += chain.entries[l].q;
  }
  c.certified_lo = c.levels.back().cover_lo;
  c.certified_hi = c.levels.back().cover_hi;

  c.eta = SequenceRule::splice(x.alphabet(), p_sets, std::nullopt);

  // Pointwise re-verification: wherever two levels claim a position, the
  // witnessed periodicity must actually hold in the sequence, including at
  // positions beyond the skeleton witness window.
  std::int64_t max_shift = 0;
  for (std::int64_t k : shifts) max_shift = std::max(max_shift, k < 0 ? -k : k);
  const std::int64_t sweep = c.verify_radius - max_shift;
  for (std::int64_t n = -sweep; n < sweep; ++n) {
    bool have = false;
    SymbolId value = 0;
    std::size_t value_level = 0;
    for (std::size_t l = 0; l < L; ++l) {
      if (!c.levels[l].p_set.contains(n)) continue;
      const SymbolId got = x.eval(n + shifts[l]);
      const SymbolId claimed = *c.levels[l].p_set.at(n);
      if (got != claimed)
        throw InconclusiveError(
            errc::consistency_violation,
            fmt::format("skeleton at q={} was spurious: x({} + k_{}) = x({}) "
                        "deviates from the witnessed class symbol; raise the "
                        "radius",
                        c.levels[l].q, n, l + 1, n + shifts[l]));
      if (have && got != value)
        throw InconclusiveError(
            errc::consistency_violation,
            fmt::format("levels {} and {} disagree on eta({}); the witnessed "
                        "skeletons are spurious at this radius",
                        value_level + 1, l + 1, n));
      have = true;
      value = got;
      value_level = l;
    }
  }

  // Every P_l must reappear inside the witnessed skeleton of eta itself.
  for (std::size_t l = 0; l < L; ++l) {
    const SkeletonMap sk_eta =
        skeleton(c.eta, c.levels[l].q, c.verify_radius);
    for (std::int64_t r = 0; r < c.levels[l].q; ++r) {
      const auto want = c.levels[l].p_set.at(r);
      if (!want) continue;
      const auto got = sk_eta.at(r);
      if (!got || *got != *want)
        throw InconclusiveError(
            errc::consistency_violation,
            fmt::format("P_{} is not inside the witnessed skeleton of eta at "
                        "q={} (residue {})",
                        l + 1, c.levels[l].q, r));
    }
  }

  return c;
}

EtaReport toeplitz_report(const SequenceRule& x, const EtaConstruction& c,
                          std::int64_t radius) {
  const std::int64_t q_last = c.levels.back().q;
  if (radius < 2 * q_last)
    throw std::invalid_argument("toeplitz_report: radius too small");

  EtaReport rep;
  rep.aperiodic = aperiodic_positions(c.eta, q_last, radius);
  rep.aperiodic_empty = rep.aperiodic.empty();

  for (const auto& level : c.levels) {
    const SkeletonMap sk_eta = skeleton(c.eta, level.q, radius);
    bool included = true;
    for (std::int64_t r = 0; r < level.q; ++r) {
      const auto want = level.p_set.at(r);
      if (!want) continue;
      const auto got = sk_eta.at(r);
      if (!got || *got != *want) {
        included = false;
        break;
      }
    }
    rep.inclusions.push_back(LevelInclusion{level.q, included});
  }

  for (std::int64_t n = -radius; n < radius; ++n) {
    if (c.eta.is_defined(n))
      ++rep.covered_positions;
    else
      ++rep.gap_positions;
  }

  const std::int64_t block_hi =
      std::min<std::int64_t>(c.certified_hi + 1, 16);
  rep.recurrence = recurrence_gaps(x, 0, std::max<std::int64_t>(block_hi, 1),
                                   radius);
  return rep;
}

}  // namespace toeplitz
