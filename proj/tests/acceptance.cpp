// Acceptance suite: every criterion prints one [PASS]/[FAIL] line and the
// binary exits nonzero if any fail. Tolerances are exact unless stated.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "toeplitz/corpus.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/factor_map.hpp"
#include "toeplitz/odometer.hpp"
#include "toeplitz/period_analysis.hpp"
#include "toeplitz/toeplitz_builder.hpp"

using namespace toeplitz;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& title,
               const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string failure;
  try {
    failure = body();
  } catch (const std::exception& e) {
    failure = e.what();
  }
  const auto secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (failure.empty()) {
    fmt::print("[PASS] criterion {}: {} ({:.1f}s)\n", number, title, secs);
  } else {
    ++g_failures;
    fmt::print("[FAIL] criterion {}: {} ({:.1f}s): {}\n", number, title, secs,
               failure);
  }
  std::fflush(stdout);
}

std::vector<SequenceRule> mixed_corpus(std::size_t count, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::vector<SequenceRule> rules;
  rules.reserve(count);
  while (rules.size() < count) rules.push_back(random_rule(rng));
  return rules;
}

struct BuiltExample {
  std::string name;
  SequenceRule rule;
  StructureResult sr;
  GrowthChain chain;       // empty when the input is witnessed periodic
  std::int64_t full_period;
};

std::vector<std::int64_t> nonempty_candidates(const SequenceRule& x,
                                              std::int64_t cap,
                                              std::int64_t radius) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 1; p <= cap; ++p)
    if (!skeleton(x, p, radius).empty_domain()) out.push_back(p);
  return out;
}

// The constructed examples: 24 telescopes plus the two small fills.
std::vector<BuiltExample> built_examples() {
  std::vector<BuiltExample> out;
  for (auto& t : telescope_family(24)) {
    BuiltExample ex;
    ex.name = fmt::format("telescope q_last={} Q={}", t.level_periods.back(),
                          t.full_period);
    ex.rule = t.rule;
    ex.sr = build_periodic_structure(
        t.rule, nonempty_candidates(t.rule, t.level_periods.back(), 4096),
        4096);
    ex.chain = refine_growth(ex.sr.structure);
    ex.full_period = t.full_period;
    out.push_back(std::move(ex));
  }
  {
    BuiltExample abac;
    abac.name = "abac";
    abac.rule = abac_rule();
    abac.sr = build_periodic_structure(
        abac.rule, nonempty_candidates(abac.rule, 16, 4096), 4096);
    abac.full_period = 4;
    out.push_back(std::move(abac));
  }
  {
    BuiltExample crossed;
    crossed.name = "crossed";
    crossed.rule = crossed_fill_rule();
    crossed.sr = build_periodic_structure(
        crossed.rule, nonempty_candidates(crossed.rule, 24, 4096), 4096);
    crossed.full_period = 24;
    out.push_back(std::move(crossed));
  }
  return out;
}

// --------------------------------------------------------------------------

std::string criterion_1_skeleton_oracle() {
  const auto rules = mixed_corpus(200, 12345);
  const std::int64_t radius = 4096;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (std::int64_t p = 1; p <= 32; ++p) {
      const SkeletonMap got = skeleton(rules[i], p, radius);
      const SkeletonMap want = oracles::brute_skeleton(rules[i], p, radius);
      if (got != want)
        return fmt::format("rule {} period {}: witnessed skeleton deviates "
                           "from the definition scan",
                           i, p);
    }
  }
  return "";
}

std::string criterion_2_gcd_reduction() {
  const auto rules = mixed_corpus(200, 12345);
  const std::int64_t radius = 4096;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::vector<SkeletonMap> sk;
    sk.reserve(24);
    for (std::int64_t p = 1; p <= 24; ++p)
      sk.push_back(skeleton(rules[i], p, radius));
    for (std::int64_t p = 1; p <= 24; ++p) {
      const SkeletonMap& sk_p = sk[static_cast<std::size_t>(p - 1)];
      if (sk_p.empty_domain()) continue;
      for (std::int64_t q = 1; q <= 24; ++q) {
        if (!is_shift_stable(sk_p, q)) continue;
        const std::int64_t g = std::gcd(p, q);
        const SkeletonMap& sk_g = sk[static_cast<std::size_t>(g - 1)];
        for (std::int64_t r = 0; r < p; ++r) {
          if (sk_p.contains(r) != sk_g.contains(r))
            return fmt::format(
                "rule {}: positions of Per differ between p={} and gcd(p,q)={} "
                "(q={}, residue {})",
                i, p, g, q, r);
        }
      }
    }
  }
  return "";
}

std::string criterion_3_divisor_monotonicity() {
  auto rules = mixed_corpus(200, 12345);
  for (auto& t : telescope_family(24)) rules.push_back(std::move(t.rule));
  const std::int64_t radius = 4096;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::vector<SkeletonMap> sk;
    std::vector<MpValue> m;
    for (std::int64_t p = 1; p <= 64; ++p) {
      sk.push_back(skeleton(rules[i], p, radius));
      m.push_back(max_block(sk.back()));
    }
    for (std::int64_t p = 1; p <= 64; ++p) {
      for (std::int64_t q = 2 * p; q <= 64; q += p) {
        const auto& sp = sk[static_cast<std::size_t>(p - 1)];
        const auto& sq = sk[static_cast<std::size_t>(q - 1)];
        for (std::int64_t r = 0; r < q; ++r)
          if (sp.contains(r) && !sq.contains(r))
            return fmt::format("rule {}: Per_{} escapes Per_{} at {}", i, p, q, r);
        if (!(m[static_cast<std::size_t>(p - 1)] <=
              m[static_cast<std::size_t>(q - 1)]))
          return fmt::format("rule {}: max block fell from p={} to q={}", i, p, q);
      }
    }
  }
  // lcm closure of essential periods on the constructed Toeplitz rules
  for (auto& t : telescope_family(24)) {
    std::vector<std::int64_t> essential;
    for (std::int64_t p = 1; p <= t.level_periods.back(); ++p) {
      const SkeletonMap sk_p = skeleton(t.rule, p, radius);
      if (!sk_p.empty_domain() && shift_stabilizer(sk_p) == p)
        essential.push_back(p);
    }
    for (const std::int64_t a : essential) {
      for (const std::int64_t b : essential) {
        const std::int64_t l = std::lcm(a, b);
        if (2 * l > radius) continue;
        const SkeletonMap sk_l = skeleton(t.rule, l, radius);
        if (sk_l.empty_domain() || shift_stabilizer(sk_l) != l)
          return fmt::format("telescope Q={}: lcm({}, {}) = {} not essential",
                             t.full_period, a, b, l);
      }
    }
  }
  return "";
}

std::string criterion_4_construction() {
  const std::int64_t radius = 4096;
  int built = 0;
  for (auto& t : telescope_family(24)) {
    const auto candidates =
        nonempty_candidates(t.rule, t.level_periods.back(), radius);
    const StructureResult sr =
        build_periodic_structure(t.rule, candidates, radius);
    const GrowthChain chain = refine_growth(sr.structure);
    if (chain.entries.size() < 3)
      return fmt::format("telescope Q={}: refined depth {} < 3", t.full_period,
                         chain.entries.size());

    const EtaConstruction c = assemble_eta(t.rule, chain, radius);
    ++built;

    // coverage interval per level
    std::int64_t partial = 0;
    const std::int64_t m1 = chain.entries.front().m;
    for (std::size_t l = 0; l < c.levels.size(); ++l) {
      const std::int64_t lo = -partial;
      const std::int64_t hi = m1 - 1 + partial;
      if (c.levels[l].cover_lo != lo || c.levels[l].cover_hi != hi)
        return fmt::format("telescope Q={}: wrong coverage interval at level {}",
                           t.full_period, l + 1);
      for (std::int64_t n = lo; n <= hi; ++n)
        if (!c.levels[l].p_set.contains(n))
          return fmt::format("telescope Q={}: coverage interval escapes P_{}",
                             t.full_period, l + 1);
      partial += c.levels[l].q;
    }
    // shift divisibility
    for (std::size_t l = 0; l < c.levels.size(); ++l)
      for (std::size_t j = l + 1; j < c.levels.size(); ++j)
        if (mod_floor(c.levels[j].shift - c.levels[l].shift, c.levels[l].q) != 0)
          return fmt::format("telescope Q={}: q_{} does not divide k_{} - k_{}",
                             t.full_period, l + 1, j + 1, l + 1);
    // P_l inside the witnessed skeleton of eta, and nothing aperiodic
    const EtaReport rep = toeplitz_report(t.rule, c, radius);
    for (const auto& inc : rep.inclusions)
      if (!inc.included)
        return fmt::format("telescope Q={}: P at q={} not inside Per(eta)",
                           t.full_period, inc.q);
    if (!rep.aperiodic_empty)
      return fmt::format("telescope Q={}: eta has witnessed aperiodic positions",
                         t.full_period);
  }
  if (built < 20) return fmt::format("only {} constructions", built);
  return "";
}

std::string criterion_5_odometer() {
  // All regular chains of distinct moduli with n_D <= 256.
  std::vector<std::vector<std::int64_t>> chains;
  std::vector<std::int64_t> current;
  const std::function<void(std::int64_t)> extend = [&](std::int64_t last) {
    for (std::int64_t next = 2 * last; next <= 256; next += last) {
      current.push_back(next);
      chains.push_back(current);
      extend(next);
      current.pop_back();
    }
  };
  for (std::int64_t n = 1; n <= 256; ++n) {
    current = {n};
    chains.push_back(current);
    extend(n);
  }

  // Group laws depend only on the deepest modulus: exhaustive over all
  // triples per n via an add table.
  for (std::int64_t n = 1; n <= 256; ++n) {
    std::vector<std::int64_t> table(static_cast<std::size_t>(n) *
                                    static_cast<std::size_t>(n));
    for (std::int64_t a = 0; a < n; ++a)
      for (std::int64_t b = 0; b < n; ++b)
        table[static_cast<std::size_t>(a * n + b)] = (a + b) % n;
    auto tab = [&](std::int64_t a, std::int64_t b) {
      return table[static_cast<std::size_t>(a * n + b)];
    };
    for (std::int64_t a = 0; a < n; ++a) {
      if (tab(a, 0) != a) return fmt::format("identity failed mod {}", n);
      if (tab(a, (n - a) % n) != 0) return fmt::format("inverse failed mod {}", n);
      for (std::int64_t b = 0; b < n; ++b) {
        if (tab(a, b) != tab(b, a))
          return fmt::format("commutativity failed mod {}", n);
        for (std::int64_t c = 0; c < n; ++c)
          if (tab(tab(a, b), c) != tab(a, tab(b, c)))
            return fmt::format("associativity failed mod {}", n);
      }
    }
  }

  std::mt19937 rng(99);
  for (const auto& moduli : chains) {
    const OdometerSpace space(moduli);
    const std::int64_t n_d = space.last_modulus();

    // from_integer surjectivity at depth D: all reps distinct, and the
    // element arithmetic matches integer reduction.
    const auto e0 = from_integer(space, 0);
    const auto e1 = from_integer(space, n_d);
    if (e0 != e1) return "step count n_D did not wrap";
    if (step(from_integer(space, n_d - 1)) != e0)
      return "wraparound at the deepest modulus failed";

    // isometry + ultrametric (exhaustive on small spaces, sampled beyond)
    auto pair_check = [&](std::int64_t a, std::int64_t b,
                          std::int64_t c) -> std::string {
      const OdometerElement ea(space, a), eb(space, b), ec(space, c);
      if (natural_distance(step(ea), step(eb)) != natural_distance(ea, eb))
        return fmt::format("isometry failed on chain ending {}", n_d);
      if (natural_distance(ea, ec) >
          std::max(natural_distance(ea, eb), natural_distance(eb, ec)))
        return fmt::format("ultrametric failed on chain ending {}", n_d);
      return "";
    };
    if (n_d <= 24) {
      for (std::int64_t a = 0; a < n_d; ++a)
        for (std::int64_t b = 0; b < n_d; ++b)
          for (std::int64_t c = 0; c < n_d; ++c) {
            const std::string err = pair_check(a, b, c);
            if (!err.empty()) return err;
          }
    } else {
      std::uniform_int_distribution<std::int64_t> pick(0, n_d - 1);
      for (int i = 0; i < 64; ++i) {
        const std::string err = pair_check(pick(rng), pick(rng), pick(rng));
        if (!err.empty()) return err;
      }
    }

    // periodic partition at every level
    for (std::size_t level = 1; level <= space.depth(); ++level) {
      const PartitionVerdict v = verify_partition(space, level);
      if (!v.ok())
        return fmt::format("partition failed at level {} of chain ending {}: {}",
                           level, n_d, v.counterexample);
    }
  }
  return fmt::format("");
}

std::string criterion_6_semiconjugacy() {
  const std::int64_t radius = 4096;
  for (const auto& ex : built_examples()) {
    const OdometerSpace space = structure_space(ex.sr.structure);
    for (std::int64_t t = -64; t <= 64; ++t) {
      const SkeletonAddress a = address(SequenceRule::shift_of(ex.rule, t),
                                        ex.rule, ex.sr.structure, radius);
      if (a.element != from_integer(space, t))
        return fmt::format("{}: address(S^{}) = {} != reduction of {}", ex.name,
                           t, a.element.str(), t);
    }
    const SemiconjugacyVerdict v =
        verify_semiconjugacy(ex.rule, ex.sr.structure, 64, radius);
    if (!v.ok()) return fmt::format("{}: {}", ex.name, v.failures.front());
  }
  return "";
}

std::string criterion_7_fibers() {
  const std::int64_t radius = 4096;
  const TelescopeRule t = make_telescope({{2, 16, 128}, 512, 3});
  const StructureResult sr = build_periodic_structure(
      t.rule, nonempty_candidates(t.rule, 128, radius), radius);

  std::vector<SkeletonMap> layers;
  for (const std::int64_t q : t.level_periods)
    layers.push_back(*exact_skeleton(t.rule, q));
  const auto tm4 = SequenceRule::substitution(
      letters_alphabet(4), {{0, 1, 1, 0}, {1, 0, 0, 1}, {2, 2}, {3, 3}}, 0, 0);

  const auto y1 = SequenceRule::splice(t.rule.alphabet(), layers, tm4);
  SkeletonMap patch(8192, 0);
  patch.slots[55] = 3;  // off every level skeleton: 55 mod 16 = 7, odd
  const auto y2 = SequenceRule::splice(
      t.rule.alphabet(), layers,
      SequenceRule::splice(t.rule.alphabet(), {patch}, tm4));
  if (y1.eval(55) == y2.eval(55)) return "patch did not change the symbol";

  OrbitSample pair = {{"y1", y1}, {"y2", y2}};
  const FiberReport rep = fiber_report(t.rule, sr.structure, pair, radius, 128);
  if (rep.groups.size() != 1 || rep.groups[0].members.size() != 2)
    return "off-skeleton pair did not land in one shared fiber group";
  if (rep.groups[0].disagreements.empty() ||
      rep.groups[0].disagreements.front() != 55)
    return "shared fiber group did not report the disagreement position";

  OrbitSample solo = {{"x", t.rule}};
  const FiberReport xrep =
      fiber_report(t.rule, sr.structure, solo, radius, t.full_period);
  if (xrep.groups.size() != 1 || !xrep.groups[0].toeplitz_consistent)
    return "x was not flagged consistent with Toeplitz";
  if (!aperiodic_positions(t.rule, t.full_period, radius).empty())
    return "x unexpectedly has witnessed aperiodic positions";
  return "";
}

}  // namespace

int main() {
  criterion(1, "witnessed skeletons equal the definition scan (200 rules)",
            criterion_1_skeleton_oracle);
  criterion(2, "stability under q collapses p to gcd(p, q) (p, q <= 24)",
            criterion_2_gcd_reduction);
  criterion(3, "divisor monotonicity and lcm closure (pairs <= 64)",
            criterion_3_divisor_monotonicity);
  criterion(4, "construction succeeds with margins, coverage and inclusions "
               "(24 inputs, depth >= 3)",
            criterion_4_construction);
  criterion(5, "odometer laws, metric and partitions (all chains, n_D <= 256)",
            criterion_5_odometer);
  criterion(6, "addresses of shifts are integer reductions and pi o S = g o pi "
               "(|t| <= 64)",
            criterion_6_semiconjugacy);
  criterion(7, "fiber evidence: shared address for an off-skeleton pair; x "
               "consistent with Toeplitz",
            criterion_7_fibers);
  if (g_failures == 0) {
    fmt::print("acceptance: all 7 criteria passed\n");
    return 0;
  }
  fmt::print("acceptance: {} criteria FAILED\n", g_failures);
  return 1;
}
