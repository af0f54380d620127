#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "toeplitz/corpus.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/factor_map.hpp"
#include "toeplitz/toeplitz_builder.hpp"

using namespace toeplitz;

namespace {

struct Fixture {
  TelescopeRule t = make_telescope({{2, 16, 128}, 512, 3});
  StructureResult sr;
  OdometerSpace space;

  Fixture() {
    std::vector<std::int64_t> candidates;
    for (std::int64_t p = 1; p <= 128; ++p)
      if (!skeleton(t.rule, p, 2048).empty_domain()) candidates.push_back(p);
    sr = build_periodic_structure(t.rule, candidates, 2048);
    space = structure_space(sr.structure);
  }
};

// Substitution over the four-letter alphabet that restricts to Thue-Morse
// on {a, b}; the unreachable symbols get self-maps to keep the rule total.
SequenceRule thue_morse4() {
  return SequenceRule::substitution(
      letters_alphabet(4), {{0, 1, 1, 0}, {1, 0, 0, 1}, {2, 2}, {3, 3}}, 0, 0);
}

}  // namespace

TEST_CASE("structure space truncates trivial levels") {
  PeriodicStructure ps;
  ps.entries.push_back(StructureEntry{1, MpValue::finite(0), 1, 1});
  ps.entries.push_back(StructureEntry{2, MpValue::finite(1), 2, 2});
  ps.entries.push_back(StructureEntry{4, MpValue::finite(3), 4, 4});
  const OdometerSpace s = structure_space(ps);
  CHECK(s.moduli() == std::vector<std::int64_t>{2, 4});
  CHECK(structure_space(ps, 1).moduli() == std::vector<std::int64_t>{2});
}

TEST_CASE("address of x itself is zero") {
  Fixture f;
  const SkeletonAddress a = address(f.t.rule, f.t.rule, f.sr.structure, 2048);
  CHECK(a.element == from_integer(f.space, 0));
  CHECK(a.levels == std::vector<std::int64_t>{0, 0, 0});
}

TEST_CASE("address of shifts is the integer reduction") {
  Fixture f;
  for (std::int64_t t = -16; t <= 16; ++t) {
    const SkeletonAddress a = address(SequenceRule::shift_of(f.t.rule, t),
                                      f.t.rule, f.sr.structure, 2048);
    CHECK(a.element == from_integer(f.space, t));
  }
}

TEST_CASE("address of eta is the accumulated shift vector") {
  Fixture f;
  const GrowthChain chain = refine_growth(f.sr.structure);
  const EtaConstruction c = assemble_eta(f.t.rule, chain, 2048);
  const SkeletonAddress a = address(c.eta, f.t.rule, f.sr.structure, 2048);
  REQUIRE(a.levels.size() == c.levels.size());
  for (std::size_t l = 0; l < c.levels.size(); ++l)
    CHECK(a.levels[l] == mod_floor(c.levels[l].shift, c.levels[l].q));
  // deterministic for this telescope: k = (0, 2, 18)
  CHECK(a.element == from_integer(f.space, 18));
}

TEST_CASE("addresses require alignment") {
  Fixture f;
  const auto stranger = SequenceRule::constant(letters_alphabet(4), 2);
  try {
    address(stranger, f.t.rule, f.sr.structure, 2048);
    FAIL("expected NoAddress");
  } catch (const InconclusiveError& e) {
    CHECK(e.code() == errc::no_address);
  }
}

TEST_CASE("coherence guard rejects contradictory level vectors") {
  try {
    require_coherent_levels({1, 2}, {2, 4});
    FAIL("expected Incoherent");
  } catch (const InconclusiveError& e) {
    CHECK(e.code() == errc::incoherent);
  }
  CHECK_NOTHROW(require_coherent_levels({1, 3, 11}, {2, 4, 16}));
}

TEST_CASE("non-essential structure levels are rejected") {
  // periodic abab: period 4 is stable under 2, so a structure claiming 4
  // as a level is ambiguous for addressing
  const auto ab = SequenceRule::periodic(letters_alphabet(2), {0, 1});
  PeriodicStructure ps;
  ps.entries.push_back(StructureEntry{4, MpValue::infinite(), 4, 4});
  CHECK_THROWS_AS(address(ab, ab, ps, 64), std::invalid_argument);
}

TEST_CASE("semiconjugacy holds on shift samples") {
  Fixture f;
  const SemiconjugacyVerdict v =
      verify_semiconjugacy(f.t.rule, f.sr.structure, 16, 2048);
  CHECK(v.ok());
}

TEST_CASE("semiconjugacy for a periodic input is the cyclic rotation") {
  const auto ab = SequenceRule::periodic(letters_alphabet(2), {0, 1});
  const auto sr = build_periodic_structure(ab, {2}, 64);
  const OdometerSpace space = structure_space(sr.structure);
  CHECK(space.moduli() == std::vector<std::int64_t>{2});
  const SemiconjugacyVerdict v = verify_semiconjugacy(ab, sr.structure, 8, 64);
  CHECK(v.ok());
  // depth 1: the factor map is a bijection onto Z_2 on shift samples
  const auto a0 = address(ab, ab, sr.structure, 64);
  const auto a1 = address(SequenceRule::shift_of(ab, 1), ab, sr.structure, 64);
  CHECK(a0.element != a1.element);
  CHECK(step(a0.element) == a1.element);
  CHECK(step(a1.element) == a0.element);
}

TEST_CASE("alignment classes form periodic partitions on samples") {
  Fixture f;
  OrbitSample sample;
  for (std::int64_t t = -4; t <= 4; ++t)
    sample.push_back({"S^" + std::to_string(t),
                      SequenceRule::shift_of(f.t.rule, t)});
  const GrowthChain chain = refine_growth(f.sr.structure);
  const EtaConstruction c = assemble_eta(f.t.rule, chain, 2048);
  sample.push_back({"eta", c.eta});

  const auto verdicts =
      verify_address_partition(f.t.rule, f.sr.structure, sample, 2048);
  REQUIRE(verdicts.size() == 3);
  for (const auto& v : verdicts) {
    CAPTURE(v.q);
    CHECK(v.ok());
  }

  // level classes of the shifts split by residue
  for (std::int64_t t = -4; t <= 4; ++t) {
    const auto a = address(SequenceRule::shift_of(f.t.rule, t), f.t.rule,
                           f.sr.structure, 2048);
    CHECK(a.levels[0] == mod_floor(t, 2));
  }
}

TEST_CASE("single-point sample is trivially coherent") {
  Fixture f;
  OrbitSample sample = {{"x", f.t.rule}};
  const auto verdicts =
      verify_address_partition(f.t.rule, f.sr.structure, sample, 2048);
  for (const auto& v : verdicts) CHECK(v.ok());
}

TEST_CASE("equivariance of addresses over the sample") {
  Fixture f;
  const GrowthChain chain = refine_growth(f.sr.structure);
  const EtaConstruction c = assemble_eta(f.t.rule, chain, 2048);
  const std::vector<SequenceRule> points = {
      f.t.rule, SequenceRule::shift_of(f.t.rule, 5), c.eta};
  for (const auto& y : points) {
    const auto a = address(y, f.t.rule, f.sr.structure, 2048);
    const auto a_next =
        address(SequenceRule::shift_of(y, 1), f.t.rule, f.sr.structure, 2048);
    CHECK(a_next.element == step(a.element));
  }
}

TEST_CASE("fiber evidence: an off-skeleton difference shares its address") {
  Fixture f;
  std::vector<SkeletonMap> layers;
  for (const std::int64_t q : f.t.level_periods)
    layers.push_back(*exact_skeleton(f.t.rule, q));

  const auto y1 = SequenceRule::splice(f.t.rule.alphabet(), layers, thue_morse4());

  // One extra position patched off the structure skeletons: 55 is odd,
  // 55 mod 16 = 7 and 55 mod 128 = 55 are outside every level domain.
  SkeletonMap patch(8192, 0);
  patch.slots[55] = 3;
  const auto y2 = SequenceRule::splice(
      f.t.rule.alphabet(), layers,
      SequenceRule::splice(f.t.rule.alphabet(), {patch}, thue_morse4()));

  REQUIRE(y1.eval(55) != y2.eval(55));
  for (std::int64_t n = -256; n < 256; ++n)
    if (n != 55) CHECK(y1.eval(n) == y2.eval(n));

  OrbitSample sample = {{"y1", y1}, {"y2", y2}};
  const FiberReport rep =
      fiber_report(f.t.rule, f.sr.structure, sample, 2048, 128);
  REQUIRE(rep.groups.size() == 1);
  CHECK(rep.groups[0].members == std::vector<std::string>{"y1", "y2"});
  REQUIRE(!rep.groups[0].disagreements.empty());
  CHECK(rep.groups[0].disagreements.front() == 55);
  // the difference sits at a witnessed aperiodic position of y1
  const auto aper = aperiodic_positions(y1, 128, 2048);
  CHECK(std::find(aper.begin(), aper.end(), 55) != aper.end());
}

TEST_CASE("fiber evidence: x itself is consistent with Toeplitz") {
  Fixture f;
  OrbitSample sample;
  sample.push_back({"x", f.t.rule});
  for (std::int64_t t = 1; t <= 2; ++t)
    sample.push_back({"S^" + std::to_string(t),
                      SequenceRule::shift_of(f.t.rule, t)});
  // scanning periods up to the full fill period empties the witnessed
  // aperiodic part of a fully covering fill
  const FiberReport rep =
      fiber_report(f.t.rule, f.sr.structure, sample, 2048, f.t.full_period);
  REQUIRE(rep.groups.size() == 3);
  for (const auto& g : rep.groups) {
    CHECK(g.members.size() == 1);
    CHECK(g.toeplitz_consistent);
  }
  CHECK(rep.unaddressed.empty());
}

TEST_CASE("fiber report surfaces unaddressed points") {
  Fixture f;
  OrbitSample sample = {
      {"x", f.t.rule},
      {"stranger", SequenceRule::constant(letters_alphabet(4), 3)}};
  const FiberReport rep =
      fiber_report(f.t.rule, f.sr.structure, sample, 2048, 128);
  REQUIRE(rep.unaddressed.size() == 1);
  CHECK(rep.unaddressed[0].first == "stranger");
}
