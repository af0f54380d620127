#include "toeplitz/period_analysis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "toeplitz/errors.hpp"

namespace toeplitz {

MpValue MpValue::finite(std::int64_t v) {
  if (v < 0) throw std::invalid_argument("max block length cannot be negative");
  MpValue m;
  m.value_ = v;
  return m;
}

MpValue MpValue::infinite() {
  MpValue m;
  m.infinite_ = true;
  return m;
}

std::int64_t MpValue::value() const {
  if (infinite_) throw std::logic_error("MpValue: value() of infinity");
  return value_;
}

std::string MpValue::str() const {
  return infinite_ ? "inf" : std::to_string(value_);
}

namespace {

constexpr std::int64_t kExactPatternCap = std::int64_t{1} << 16;

void check_skeleton_args(std::int64_t p, std::int64_t radius) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  if (radius < 2 * p)
    throw std::invalid_argument(fmt::format(
        "radius {} too small for period {}: need radius >= 2p", radius, p));
}

SkeletonMap witnessed_skeleton(const SequenceRule& x, std::int64_t p,
                               std::int64_t radius) {
  SkeletonMap sk(p, radius);
  std::vector<SymbolId> first(static_cast<std::size_t>(p));
  std::vector<std::int64_t> count(static_cast<std::size_t>(p), 0);
  std::vector<bool> uniform(static_cast<std::size_t>(p), true);
  for (std::int64_t n = -radius; n < radius; ++n) {
    if (!x.is_defined(n)) continue;
    const auto r = static_cast<std::size_t>(mod_floor(n, p));
    if (!uniform[r]) continue;
    const SymbolId s = x.eval(n);
    if (count[r] == 0) {
      first[r] = s;
    } else if (first[r] != s) {
      uniform[r] = false;
      continue;
    }
    ++count[r];
  }
  for (std::int64_t r = 0; r < p; ++r) {
    const auto i = static_cast<std::size_t>(r);
    // Classes witnessed by fewer than two samples carry no evidence.
    if (uniform[i] && count[i] >= 2) sk.slots[i] = first[i];
  }
  return sk;
}

}  // namespace

std::optional<SkeletonMap> exact_skeleton(const SequenceRule& x, std::int64_t p) {
  if (p < 1) throw std::invalid_argument("period must be >= 1");
  const auto L_opt = x.exact_period();
  if (!L_opt || *L_opt > kExactPatternCap) return std::nullopt;
  const std::int64_t L = *L_opt;
  const Window pat = materialize(x, 0, L);
  const std::int64_t g = std::gcd(p, L);
  // Positions congruent mod p sweep exactly the pattern indices congruent
  // mod gcd(p, L), so constancy is decided per gcd-class.
  std::vector<std::optional<SymbolId>> g_value(static_cast<std::size_t>(g));
  for (std::int64_t d = 0; d < g; ++d) {
    SymbolId v = pat.at(d);
    bool constant = true;
    for (std::int64_t i = d; i < L; i += g) {
      if (pat.at(i) != v) {
        constant = false;
        break;
      }
    }
    if (constant) g_value[static_cast<std::size_t>(d)] = v;
  }
  SkeletonMap sk(p, 0);
  for (std::int64_t r = 0; r < p; ++r)
    sk.slots[static_cast<std::size_t>(r)] = g_value[static_cast<std::size_t>(r % g)];
  return sk;
}

SkeletonMap skeleton(const SequenceRule& x, std::int64_t p, std::int64_t radius) {
  check_skeleton_args(p, radius);
  SkeletonMap sk = witnessed_skeleton(x, p, radius);
  // Cross-check against the symbolic skeleton when one exists. The witnessed
  // domain is always a superset; it collapses to equality once the window
  // sees every class of the underlying pattern at least twice.
  if (auto exact = exact_skeleton(x, p)) {
    const std::int64_t L = *x.exact_period();
    const std::int64_t need = 2 * std::lcm(p, L);
    for (std::int64_t r = 0; r < p; ++r) {
      const auto i = static_cast<std::size_t>(r);
      if (exact->slots[i]) {
        if (!sk.slots[i] || *sk.slots[i] != *exact->slots[i])
          throw InvariantViolation(fmt::format(
              "witnessed skeleton at p={} lost exact residue {}", p, r));
      } else if (radius >= need && sk.slots[i]) {
        throw InvariantViolation(fmt::format(
            "witnessed skeleton at p={} kept spurious residue {} at radius {}",
            p, r, radius));
      }
    }
  }
  return sk;
}

MpValue max_block(const SkeletonMap& sk) {
  const std::int64_t p = sk.period;
  if (sk.full_domain()) return MpValue::infinite();
  std::int64_t best = 0;
  std::int64_t run = 0;
  for (std::int64_t i = 0; i < 2 * p; ++i) {
    if (sk.slots[static_cast<std::size_t>(i % p)]) {
      ++run;
      best = std::max(best, run);
    } else {
      run = 0;
    }
  }
  return MpValue::finite(std::min(best, p - 1));
}

std::vector<std::int64_t> aperiodic_positions(const SequenceRule& x,
                                              std::int64_t period_cap,
                                              std::int64_t radius) {
  if (period_cap < 1) throw std::invalid_argument("period cap must be >= 1");
  if (radius < 2 * period_cap)
    throw std::invalid_argument("radius must be >= 2 * period_cap");
  std::vector<SkeletonMap> maps;
  maps.reserve(static_cast<std::size_t>(period_cap));
  for (std::int64_t p = 1; p <= period_cap; ++p)
    maps.push_back(skeleton(x, p, radius));
  std::vector<std::int64_t> out;
  for (std::int64_t n = -radius; n < radius; ++n) {
    if (!x.is_defined(n)) continue;
    bool periodic = false;
    for (const auto& sk : maps) {
      if (sk.contains(n)) {
        periodic = true;
        break;
      }
    }
    if (!periodic) out.push_back(n);
  }
  return out;
}

std::int64_t shift_stabilizer(const SkeletonMap& sk) {
  if (sk.empty_domain())
    throw std::invalid_argument("shift_stabilizer: empty skeleton domain");
  // Stable shifts form a subgroup of Z_p, so the minimal one divides p;
  // testing divisors in increasing order finds it.
  for (std::int64_t t = 1; t <= sk.period; ++t) {
    if (sk.period % t != 0) continue;
    if (is_shift_stable(sk, t)) return t;
  }
  throw InvariantViolation("shift by the period itself was not stable");
}

EssentialReduction essential_reduce(const SequenceRule& x, std::int64_t p,
                                    std::int64_t radius) {
  SkeletonMap sk_p = skeleton(x, p, radius);
  if (sk_p.empty_domain())
    throw std::invalid_argument(
        fmt::format("essential_reduce: empty skeleton at period {}", p));
  const std::int64_t k = shift_stabilizer(sk_p);
  SkeletonMap sk_k = skeleton(x, k, radius);
  // The reduction must witness the same positions with the same values and
  // therefore the same maximal block.
  for (std::int64_t r = 0; r < p; ++r) {
    const auto at_p = sk_p.at(r);
    const auto at_k = sk_k.at(r);
    if (at_p != at_k)
      throw InvariantViolation(
          fmt::format("essential reduction {} -> {} changed the witnessed "
                      "skeleton at residue {}",
                      p, k, r));
  }
  if (max_block(sk_p) != max_block(sk_k))
    throw InvariantViolation(fmt::format(
        "essential reduction {} -> {} changed the maximal block", p, k));
  return EssentialReduction{k, std::move(sk_k)};
}

bool remainder_stability(const SkeletonMap& sk, std::int64_t m1,
                         std::int64_t m2) {
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("remainder_stability: shifts must be positive");
  if (!is_shift_stable(sk, m1) || !is_shift_stable(sk, m2))
    throw std::invalid_argument(
        "remainder_stability: skeleton is not stable under both shifts");
  return is_shift_stable(sk, m1 % m2);
}

StructureResult analyze_structure(const SequenceRule& x,
                                  const std::vector<std::int64_t>& candidates,
                                  std::int64_t radius) {
  if (candidates.empty())
    throw std::invalid_argument("analyze_structure: no candidate periods");
  if (!std::is_sorted(candidates.begin(), candidates.end()))
    throw std::invalid_argument("candidate periods must be sorted ascending");

  StructureResult result;
  result.structure.evidence_radius = radius;
  std::int64_t cur_q = 0;

  for (const std::int64_t p : candidates) {
    StructureTraceRow row;
    row.p = p;

    const EssentialReduction red = essential_reduce(x, p, radius);
    row.reduced_k = red.k;

    std::int64_t q = cur_q == 0 ? red.k : std::lcm(cur_q, red.k);
    if (2 * q > radius) {
      result.notes.push_back(fmt::format(
          "stopped at candidate {}: running lcm {} exceeds the witnessable "
          "range (radius {})",
          p, q, radius));
      break;
    }
    // The lcm of essential periods should itself be essential; re-reduce in
    // case the window witness disagrees.
    if (q != red.k || q != p) {
      const EssentialReduction qred = essential_reduce(x, q, radius);
      if (qred.k != q) {
        row.note = fmt::format("lcm {} reduced further to {}", q, qred.k);
        q = qred.k;
      }
    }
    row.q = q;

    if (q == cur_q) {
      row.m_q = result.structure.entries.back().m;
      row.note = row.note.empty() ? "no new essential content" : row.note;
      result.trace.push_back(row);
      continue;
    }

    const SkeletonMap sk_q = skeleton(x, q, radius);
    const MpValue m_q = max_block(sk_q);
    row.m_q = m_q;

    const bool grows = result.structure.entries.empty() ||
                       result.structure.entries.back().m < m_q;
    if (!grows) {
      row.note = "maximal block did not grow";
      result.trace.push_back(row);
      continue;
    }

    row.kept = true;
    result.trace.push_back(row);
    result.structure.entries.push_back(StructureEntry{q, m_q, p, red.k});
    cur_q = q;

    if (m_q.is_infinite()) {
      result.structure.witnessed_periodic = true;
      result.notes.push_back(fmt::format(
          "sequence is witnessed periodic with period {} at radius {}", q,
          radius));
      break;
    }
  }

  std::size_t finite_entries = 0;
  for (const auto& e : result.structure.entries)
    if (!e.m.is_infinite()) ++finite_entries;
  result.growth_witnessed = finite_entries >= 2;
  return result;
}

StructureResult build_periodic_structure(
    const SequenceRule& x, const std::vector<std::int64_t>& candidates,
    std::int64_t radius) {
  StructureResult result = analyze_structure(x, candidates, radius);
  if (!result.structure.witnessed_periodic &&
      result.structure.entries.size() < 2) {
    std::string series;
    for (const auto& row : result.trace)
      series += fmt::format(" p={}->k={} q={} M={}{}", row.p, row.reduced_k,
                            row.q, row.m_q.str(), row.kept ? "*" : "");
    throw InconclusiveError(
        errc::no_growth_evidence,
        fmt::format("no growth witnessed: all candidates collapse to one "
                    "bounded period (radius {});{}",
                    radius, series));
  }
  return result;
}

std::vector<std::int64_t> skeleton_align(const SequenceRule& x,
                                         const SequenceRule& y, std::int64_t p,
                                         std::int64_t radius) {
  const SkeletonMap sk_x = skeleton(x, p, radius);
  if (sk_x.empty_domain())
    throw std::invalid_argument(
        fmt::format("skeleton_align: x has empty skeleton at period {}", p));
  const SkeletonMap sk_y = skeleton(y, p, radius);

  std::vector<std::int64_t> matches;
  for (std::int64_t t = 0; t < p; ++t) {
    if (sk_y == sk_x.shifted(t)) matches.push_back(t);
  }
  if (shift_stabilizer(sk_x) == p && matches.size() > 1)
    throw InvariantViolation(
        fmt::format("essential skeleton at {} aligned at {} offsets", p,
                    matches.size()));
  return matches;
}

}  // namespace toeplitz
