#include "toeplitz/selfcheck.hpp"

#include <functional>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "toeplitz/corpus.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/factor_map.hpp"
#include "toeplitz/odometer.hpp"
#include "toeplitz/period_analysis.hpp"
#include "toeplitz/toeplitz_builder.hpp"

namespace toeplitz {

namespace {

struct Ctx {
  SelfCheckOptions opt;
  std::vector<SequenceRule> rules;
  std::vector<CheckResult> results;

  void run(const std::string& name, const std::function<std::string()>& body) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = body();  // empty string = pass
      r.pass = r.detail.empty();
      if (r.pass) r.detail = "ok";
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

std::string check_shift_composition(Ctx& c) {
  std::mt19937 rng(c.opt.seed ^ 0x51u);
  std::uniform_int_distribution<std::int64_t> off(-50, 50);
  std::uniform_int_distribution<std::int64_t> pos(-200, 200);
  for (const auto& rule : c.rules) {
    for (int i = 0; i < 16; ++i) {
      const std::int64_t s = off(rng), t = off(rng), n = pos(rng);
      const auto composed =
          SequenceRule::shift_of(SequenceRule::shift_of(rule, s), t);
      if (composed.eval(n) != rule.eval(n + s + t))
        return fmt::format("shift composition broke at s={} t={} n={}", s, t, n);
    }
  }
  return "";
}

std::string check_fill_totality(Ctx& c) {
  for (const auto& rule : c.rules) {
    if (rule.kind() != RuleKind::toeplitz_fill) continue;
    for (std::int64_t n = -256; n < 256; ++n) {
      // First matching stage, straight from the definition.
      SymbolId expected = 0;
      bool hit = false;
      for (const auto& st : rule.stages()) {
        if (mod_floor(n, st.period) == st.residue) {
          expected = st.symbol;
          hit = true;
          break;
        }
      }
      if (!hit) return fmt::format("fill rule left {} uncovered", n);
      if (rule.eval(n) != expected)
        return fmt::format("fill eval deviates from first match at {}", n);
    }
  }
  return "";
}

std::string check_metric(Ctx& c) {
  std::mt19937 rng(c.opt.seed ^ 0xd1u);
  std::uniform_int_distribution<std::size_t> pick(0, c.rules.size() - 1);
  for (int i = 0; i < 24; ++i) {
    const auto& x = c.rules[pick(rng)];
    const auto& y = c.rules[pick(rng)];
    const auto& z = c.rules[pick(rng)];
    if (x.alphabet() != y.alphabet() || y.alphabet() != z.alphabet()) continue;
    const std::int64_t r = 16;
    const Rational dxy = product_distance(x, y, r);
    const Rational dyx = product_distance(y, x, r);
    if (dxy != dyx) return "metric is not symmetric";
    const Rational dxz = product_distance(x, z, r);
    const Rational dyz = product_distance(y, z, r);
    if (dxz > dxy + dyz) return "triangle inequality failed";
    bool agree = true;
    for (std::int64_t n = -r; n <= r; ++n)
      if (x.eval(n) != y.eval(n)) { agree = false; break; }
    if (agree != (dxy == 0)) return "zero-distance/agreement mismatch";
    if (product_distance(x, y, r + 8) < dxy)
      return "distance decreased with radius";
  }
  return "";
}

std::string check_determinism(Ctx& c) {
  for (const auto& rule : c.rules) {
    const Window a = materialize(rule, -300, 300);
    const Window b = materialize(rule, -300, 300);
    if (a.values != b.values) return "two materializations differ";
  }
  return "";
}

std::string check_stabilizer(Ctx& c) {
  for (const auto& rule : c.rules) {
    for (std::int64_t p = 1; p <= c.opt.period_cap; ++p) {
      const SkeletonMap sk = skeleton(rule, p, c.opt.radius);
      if (sk.empty_domain()) continue;
      const std::int64_t k = shift_stabilizer(sk);
      if (p % k != 0) return fmt::format("stabilizer {} does not divide {}", k, p);
      // Against the definition: the first stable shift of any kind.
      for (std::int64_t t = 1; t < k; ++t)
        if (is_shift_stable(sk, t))
          return fmt::format("shift {} < stabilizer {} is stable at p={}", t, k, p);
    }
  }
  return "";
}

std::string check_gcd_reduction(Ctx& c) {
  for (const auto& rule : c.rules) {
    for (std::int64_t p = 1; p <= c.opt.period_cap; ++p) {
      const SkeletonMap sk_p = skeleton(rule, p, c.opt.radius);
      if (sk_p.empty_domain()) continue;
      for (std::int64_t q = 1; q <= c.opt.period_cap; ++q) {
        if (!is_shift_stable(sk_p, q)) continue;
        if (!remainder_stability(sk_p, q, p))
          return fmt::format("remainder stability failed at p={} q={}", p, q);
        const std::int64_t g = std::gcd(p, q);
        const SkeletonMap sk_g = skeleton(rule, g, c.opt.radius);
        for (std::int64_t r = 0; r < p; ++r)
          if (sk_p.contains(r) != sk_g.contains(r))
            return fmt::format(
                "witnessed positions differ between p={} and gcd={}", p, g);
      }
    }
  }
  return "";
}

std::string check_divisor_monotonicity(Ctx& c) {
  for (const auto& rule : c.rules) {
    for (std::int64_t p = 1; p <= c.opt.period_cap; ++p) {
      const SkeletonMap sk_p = skeleton(rule, p, c.opt.radius);
      for (std::int64_t q = 2 * p; q <= c.opt.period_cap; q += p) {
        const SkeletonMap sk_q = skeleton(rule, q, c.opt.radius);
        for (std::int64_t r = 0; r < q; ++r)
          if (sk_p.contains(r) && !sk_q.contains(r))
            return fmt::format("Per_{} not inside Per_{} at residue {}", p, q, r);
        if (!(max_block(sk_p) <= max_block(sk_q)))
          return fmt::format("max block fell from p={} to q={}", p, q);
      }
    }
  }
  return "";
}

std::string check_essential_reduce(Ctx& c) {
  for (const auto& rule : c.rules) {
    for (std::int64_t p = 1; p <= c.opt.period_cap; ++p) {
      const SkeletonMap sk = skeleton(rule, p, c.opt.radius);
      if (sk.empty_domain()) continue;
      const EssentialReduction red = essential_reduce(rule, p, c.opt.radius);
      const EssentialReduction again =
          essential_reduce(rule, red.k, c.opt.radius);
      if (again.k != red.k)
        return fmt::format("essential reduction of {} is not idempotent", p);
    }
  }
  return "";
}

std::string check_telescope_pipeline(Ctx& c) {
  const auto telescopes = telescope_family(3);
  for (const auto& t : telescopes) {
    std::vector<std::int64_t> candidates;
    for (std::int64_t p = 1; p <= t.level_periods.back(); ++p)
      if (!skeleton(t.rule, p, c.opt.radius * 4).empty_domain())
        candidates.push_back(p);
    const StructureResult sr =
        build_periodic_structure(t.rule, candidates, c.opt.radius * 4);
    const GrowthChain chain = refine_growth(sr.structure);
    if (chain.entries.size() < t.level_periods.size())
      return fmt::format("telescope chain depth {} below design {}",
                         chain.entries.size(), t.level_periods.size());
    // lcm of any two essential structure periods is again essential.
    for (const auto& a : sr.structure.entries) {
      for (const auto& b : sr.structure.entries) {
        const std::int64_t l = std::lcm(a.q, b.q);
        if (2 * l > c.opt.radius * 4) continue;
        const SkeletonMap sk = skeleton(t.rule, l, c.opt.radius * 4);
        if (shift_stabilizer(sk) != l)
          return fmt::format("lcm({}, {}) lost essentiality", a.q, b.q);
      }
    }
    const EtaConstruction eta =
        assemble_eta(t.rule, chain, c.opt.radius * 4);
    for (std::size_t l = 0; l < eta.levels.size(); ++l)
      for (std::size_t j = l + 1; j < eta.levels.size(); ++j)
        if (mod_floor(eta.levels[j].shift - eta.levels[l].shift,
                      eta.levels[l].q) != 0)
          return "shift divisibility failed";
    // eta agrees with the deepest shift of x wherever it is defined.
    const std::int64_t k_last = eta.levels.back().shift;
    for (std::int64_t n = eta.certified_lo; n <= eta.certified_hi; ++n)
      if (eta.eta.eval(n) != t.rule.eval(n + k_last))
        return fmt::format("eta deviates from S^{}(x) at {}", k_last, n);
  }
  return "";
}

std::string check_odometer_laws(Ctx&) {
  const std::vector<std::vector<std::int64_t>> chains = {
      {2, 4, 8}, {3, 6, 12, 24}, {2, 6, 30}, {5, 25}, {1, 7, 14}};
  for (const auto& moduli : chains) {
    const OdometerSpace space(moduli);
    const auto elems = all_elements(space);
    const OdometerElement zero = from_integer(space, 0);
    for (const auto& a : elems) {
      if (add(a, zero) != a) return "identity failed";
      if (add(a, negate(a)) != zero) return "inverse failed";
      if (inverse_step(step(a)) != a) return "inverse_step failed";
      for (const auto& b : elems) {
        if (add(a, b) != add(b, a)) return "commutativity failed";
        if (natural_distance(step(a), step(b)) != natural_distance(a, b))
          return "isometry failed";
        for (const auto& d : elems)
          if (natural_distance(a, d) >
              std::max(natural_distance(a, b), natural_distance(b, d)))
            return "ultrametric inequality failed";
      }
    }
    for (std::size_t level = 1; level <= space.depth(); ++level)
      if (!verify_partition(space, level).ok())
        return fmt::format("partition verdict failed at level {}", level);
  }
  return "";
}

std::string check_factor_map(Ctx& c) {
  const auto t = telescope_family(1).front();
  std::vector<std::int64_t> candidates;
  for (std::int64_t p = 1; p <= t.level_periods.back(); ++p)
    if (!skeleton(t.rule, p, c.opt.radius * 4).empty_domain())
      candidates.push_back(p);
  const StructureResult sr =
      build_periodic_structure(t.rule, candidates, c.opt.radius * 4);
  const OdometerSpace space = structure_space(sr.structure);
  for (std::int64_t tshift = -8; tshift <= 8; ++tshift) {
    const SkeletonAddress a = address(SequenceRule::shift_of(t.rule, tshift),
                                      t.rule, sr.structure, c.opt.radius * 4);
    if (a.element != from_integer(space, tshift))
      return fmt::format("address of S^{} is {}", tshift, a.element.str());
  }
  const SemiconjugacyVerdict v =
      verify_semiconjugacy(t.rule, sr.structure, 8, c.opt.radius * 4);
  if (!v.ok()) return v.failures.front();
  return "";
}

}  // namespace

std::vector<CheckResult> run_selfcheck(const SelfCheckOptions& options) {
  Ctx c;
  c.opt = options;
  std::mt19937 rng(options.seed);
  for (int i = 0; i < options.random_rules; ++i)
    c.rules.push_back(random_rule(rng));
  c.rules.push_back(abac_rule());
  c.rules.push_back(crossed_fill_rule());
  c.rules.push_back(even_constant_odd_aperiodic_rule());
  c.rules.push_back(thue_morse_rule());

  c.run("shift composition", [&] { return check_shift_composition(c); });
  c.run("fill totality and first-match", [&] { return check_fill_totality(c); });
  c.run("product metric laws", [&] { return check_metric(c); });
  c.run("evaluation determinism", [&] { return check_determinism(c); });
  c.run("stabilizer is the minimal stable shift and divides p",
        [&] { return check_stabilizer(c); });
  c.run("stability reduces through remainders and gcd",
        [&] { return check_gcd_reduction(c); });
  c.run("divisor monotonicity of skeletons and max blocks",
        [&] { return check_divisor_monotonicity(c); });
  c.run("essential reduction idempotence", [&] { return check_essential_reduce(c); });
  c.run("structure, growth chain and eta construction",
        [&] { return check_telescope_pipeline(c); });
  c.run("odometer group laws, metric and partitions",
        [&] { return check_odometer_laws(c); });
  c.run("factor map addresses and semiconjugacy",
        [&] { return check_factor_map(c); });
  return c.results;
}

}  // namespace toeplitz
