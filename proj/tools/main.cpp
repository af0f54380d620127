// tpz -- analyze two-sided symbolic sequences at finite windows: period
// skeletons and essential periods, periodic structures, construction of a
// Toeplitz sequence in the orbit closure, odometer arithmetic, and the
// factor map onto the odometer.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "toeplitz/corpus.hpp"
#include "toeplitz/errors.hpp"
#include "toeplitz/factor_map.hpp"
#include "toeplitz/odometer.hpp"
#include "toeplitz/period_analysis.hpp"
#include "toeplitz/reports.hpp"
#include "toeplitz/rule_io.hpp"
#include "toeplitz/selfcheck.hpp"
#include "toeplitz/sequence.hpp"
#include "toeplitz/toeplitz_builder.hpp"

namespace {

using toeplitz::Json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitInternal = 3;

struct RunConfig {
  std::int64_t radius = 4096;
  std::int64_t period_cap = 64;
  std::int64_t depth = 8;
  std::int64_t t_max = 64;
  std::string format = "text";
  std::string out;

  bool structured() const { return format == "structured"; }

  Json to_json() const {
    return Json{{"radius", radius},
                {"period_cap", period_cap},
                {"depth", depth},
                {"t_max", t_max},
                {"format", format}};
  }

  void validate() const {
    if (radius < 2 * period_cap)
      throw CLI::ValidationError(
          "config", fmt::format("radius {} must be at least 2 * period cap {}",
                                radius, period_cap));
  }
};

std::string rational_str(const toeplitz::Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

void emit(const RunConfig& cfg, const std::string& text, const Json& doc) {
  const std::string payload = cfg.structured() ? doc.dump(2) + "\n" : text;
  if (cfg.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream f(cfg.out);
    if (!f)
      throw std::invalid_argument(
          fmt::format("cannot write output file '{}'", cfg.out));
    f << payload;
  }
}

Json top_level(const std::string& command, const RunConfig& cfg, Json results,
               Json verdicts) {
  return Json{{"command", command},
              {"config", cfg.to_json()},
              {"results", std::move(results)},
              {"verdicts", std::move(verdicts)}};
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& file, const RunConfig& cfg) {
  const toeplitz::SequenceRule rule = toeplitz::load_rule_file(file);
  const auto& ab = rule.alphabet();

  std::string text = fmt::format("# analyze {}\n", file);
  text += fmt::format("alphabet: {} symbols, radius {}, period cap {}\n\n",
                      ab.size(), cfg.radius, cfg.period_cap);
  text += fmt::format("{:>5} {:>7} {:>9} {:>10} {:>9}\n", "p", "domain",
                      "max_blk", "essential", "reduced");

  Json rows = Json::array();
  for (std::int64_t p = 1; p <= cfg.period_cap; ++p) {
    const toeplitz::SkeletonMap sk = toeplitz::skeleton(rule, p, cfg.radius);
    const toeplitz::MpValue m = toeplitz::max_block(sk);
    Json row;
    row["p"] = p;
    row["domain_size"] = sk.domain_size();
    row["max_block"] = toeplitz::to_json(m);
    if (!sk.empty_domain()) {
      const std::int64_t k = toeplitz::shift_stabilizer(sk);
      row["essential"] = (k == p);
      row["reduced_k"] = k;
      text += fmt::format("{:>5} {:>7} {:>9} {:>10} {:>9}\n", p,
                          sk.domain_size(), m.str(), k == p ? "yes" : "no", k);
    } else {
      row["essential"] = false;
      row["reduced_k"] = nullptr;
      text += fmt::format("{:>5} {:>7} {:>9} {:>10} {:>9}\n", p, 0, "-", "-", "-");
    }
    rows.push_back(std::move(row));
  }

  const auto aper =
      toeplitz::aperiodic_positions(rule, cfg.period_cap, cfg.radius);
  Json aper_json;
  aper_json["count"] = aper.size();
  aper_json["window"] = Json::array({-cfg.radius, cfg.radius});
  Json sample = Json::array();
  for (std::size_t i = 0; i < aper.size() && i < 32; ++i)
    sample.push_back(aper[i]);
  aper_json["sample"] = std::move(sample);
  text += fmt::format(
      "\naperiodic positions up to cap {}: {} in [{}, {})\n", cfg.period_cap,
      aper.size(), -cfg.radius, cfg.radius);

  const std::int64_t block_hi = std::min<std::int64_t>(8, cfg.radius / 4);
  const auto rec = toeplitz::recurrence_gaps(rule, 0, std::max<std::int64_t>(block_hi, 1),
                                             cfg.radius);
  text += fmt::format(
      "recurrence of block [{}, {}): {} occurrences, max gap {}\n",
      rec.block_lo, rec.block_hi, rec.occurrences.size(), rec.max_gap);

  // Growth series: running max of the maximal block over the scanned
  // periods. Heuristic evidence for unbounded growth, never a proof.
  Json series = Json::array();
  std::string growth_text;
  toeplitz::MpValue running = toeplitz::MpValue::finite(0);
  for (const auto& row : rows) {
    if (row["max_block"].is_string()) {
      running = toeplitz::MpValue::infinite();
    } else {
      const auto v = toeplitz::MpValue::finite(row["max_block"].get<std::int64_t>());
      if (running < v) running = v;
    }
    series.push_back(Json{{"p", row["p"]}, {"running_max", toeplitz::to_json(running)}});
  }
  growth_text = fmt::format(
      "growth heuristic: max block reaches {} by p = {} (window evidence "
      "only)\n",
      running.str(), cfg.period_cap);
  text += growth_text;

  Json results;
  results["skeletons"] = std::move(rows);
  results["aperiodic"] = std::move(aper_json);
  results["recurrence"] = toeplitz::to_json(rec);
  results["growth_series"] = std::move(series);
  results["growth_note"] = "running max of witnessed maximal blocks; heuristic";

  emit(cfg, text, top_level("analyze", cfg, std::move(results), Json::array()));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// structure
// ---------------------------------------------------------------------------

std::vector<std::int64_t> structure_candidates(const toeplitz::SequenceRule& rule,
                                               const RunConfig& cfg) {
  std::vector<std::int64_t> candidates;
  for (std::int64_t p = 1; p <= cfg.period_cap; ++p)
    if (!toeplitz::skeleton(rule, p, cfg.radius).empty_domain())
      candidates.push_back(p);
  if (candidates.empty())
    throw toeplitz::InconclusiveError(
        toeplitz::errc::no_growth_evidence,
        fmt::format("no period up to {} has a nonempty witnessed skeleton",
                    cfg.period_cap));
  return candidates;
}

std::string structure_text(const toeplitz::StructureResult& sr) {
  std::string text;
  text += fmt::format("{:>6} {:>9} {:>7} {:>9}\n", "q", "max_blk", "raw_p",
                      "reduced");
  for (const auto& e : sr.structure.entries)
    text += fmt::format("{:>6} {:>9} {:>7} {:>9}\n", e.q, e.m.str(), e.raw_p,
                        e.reduced_k);
  if (sr.structure.witnessed_periodic)
    text += "sequence is witnessed periodic at the last entry\n";
  for (const auto& n : sr.notes) text += "note: " + n + "\n";
  text += "trace:\n";
  for (const auto& row : sr.trace)
    text += fmt::format("  p={} -> k={} q={} M={} {}{}\n", row.p, row.reduced_k,
                        row.q, row.m_q.str(), row.kept ? "kept" : "dropped",
                        row.note.empty() ? "" : " (" + row.note + ")");
  return text;
}

int cmd_structure(const std::string& file, const RunConfig& cfg) {
  const toeplitz::SequenceRule rule = toeplitz::load_rule_file(file);
  const auto candidates = structure_candidates(rule, cfg);
  const toeplitz::StructureResult sr =
      toeplitz::build_periodic_structure(rule, candidates, cfg.radius);

  const std::string text =
      fmt::format("# structure {}\n", file) + structure_text(sr);
  emit(cfg, text,
       top_level("structure", cfg, toeplitz::to_json(sr), Json::array()));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eta
// ---------------------------------------------------------------------------

int cmd_eta(const std::string& file, const RunConfig& cfg,
            const std::string& eta_out) {
  const toeplitz::SequenceRule rule = toeplitz::load_rule_file(file);
  const auto candidates = structure_candidates(rule, cfg);
  const toeplitz::StructureResult sr =
      toeplitz::build_periodic_structure(rule, candidates, cfg.radius);

  toeplitz::GrowthChain chain = toeplitz::refine_growth(sr.structure);
  if (static_cast<std::int64_t>(chain.entries.size()) > cfg.depth)
    chain.entries.resize(static_cast<std::size_t>(cfg.depth));

  const toeplitz::EtaConstruction c =
      toeplitz::assemble_eta(rule, chain, cfg.radius);
  const toeplitz::EtaReport rep = toeplitz::toeplitz_report(rule, c, cfg.radius);

  const std::string eta_path =
      eta_out.empty() ? file + ".eta" : eta_out;
  toeplitz::save_rule_file(eta_path, c.eta);

  std::string text = fmt::format("# eta {}\n", file);
  text += "chain:";
  for (const auto& e : chain.entries) text += fmt::format(" ({}, M={})", e.q, e.m);
  text += "\nlevels:\n";
  for (std::size_t l = 0; l < c.levels.size(); ++l) {
    const auto& level = c.levels[l];
    text += fmt::format(
        "  l={}: q={} M={} anchor={} shift={} coverage=[{}, {}]\n", l + 1,
        level.q, level.block, level.anchor, level.shift, level.cover_lo,
        level.cover_hi);
  }
  for (std::size_t i = 0; i < c.transitions.size(); ++i) {
    const auto& t = c.transitions[i];
    text += fmt::format("  s_{}={} d_left={} d_right={}\n", i + 1, t.s,
                        t.d_left, t.d_right);
  }
  text += fmt::format("certified window: [{}, {}]\n", c.certified_lo,
                      c.certified_hi);
  text += fmt::format("aperiodic on covered ground: {}\n",
                      rep.aperiodic_empty ? "empty" : "NOT EMPTY");
  text += fmt::format("covered {} / gaps {} in [{}, {})\n",
                      rep.covered_positions, rep.gap_positions, -cfg.radius,
                      cfg.radius);
  text += fmt::format("recurrence of x: {} occurrences, max gap {}\n",
                      rep.recurrence.occurrences.size(), rep.recurrence.max_gap);
  text += fmt::format("eta written to {}\n", eta_path);

  Json verdicts = Json::array();
  verdicts.push_back(Json{{"name", "aperiodic part empty on covered window"},
                          {"pass", rep.aperiodic_empty}});
  for (const auto& inc : rep.inclusions)
    verdicts.push_back(
        Json{{"name", fmt::format("P_l inside witnessed skeleton of eta at q={}",
                                  inc.q)},
             {"pass", inc.included}});

  Json results;
  results["construction"] = toeplitz::to_json(c, rule.alphabet());
  results["report"] = toeplitz::to_json(rep);
  results["structure"] = toeplitz::to_json(sr);
  results["eta_file"] = eta_path;

  emit(cfg, text, top_level("eta", cfg, std::move(results), std::move(verdicts)));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// odometer
// ---------------------------------------------------------------------------

int cmd_odometer(const std::vector<std::int64_t>& moduli, const std::string& op,
                 const std::vector<std::int64_t>& args, const RunConfig& cfg) {
  const toeplitz::OdometerSpace space(moduli);
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw std::invalid_argument(
          fmt::format("op '{}' takes {} integer argument(s)", op, n));
  };

  std::string text;
  Json results;
  Json verdicts = Json::array();

  if (op == "element") {
    need(1);
    const auto e = toeplitz::from_integer(space, args[0]);
    text = fmt::format("{} -> {}\n", args[0], e.str());
    results = toeplitz::to_json(e);
  } else if (op == "add") {
    need(2);
    const auto a = toeplitz::from_integer(space, args[0]);
    const auto b = toeplitz::from_integer(space, args[1]);
    const auto s = toeplitz::add(a, b);
    text = fmt::format("{} + {} = {}\n", a.str(), b.str(), s.str());
    results = toeplitz::to_json(s);
  } else if (op == "step") {
    need(1);
    auto e = toeplitz::from_integer(space, args[0]);
    const auto next = toeplitz::step(e);
    text = fmt::format("step {} = {}\n", e.str(), next.str());
    results = toeplitz::to_json(next);
  } else if (op == "distance") {
    need(2);
    const auto a = toeplitz::from_integer(space, args[0]);
    const auto b = toeplitz::from_integer(space, args[1]);
    const auto d = toeplitz::natural_distance(a, b);
    text = fmt::format("dist({}, {}) = {}\n", a.str(), b.str(), rational_str(d));
    results = Json{{"a", toeplitz::to_json(a)},
                   {"b", toeplitz::to_json(b)},
                   {"distance", rational_str(d)}};
  } else if (op == "partition") {
    need(1);
    const auto v = toeplitz::verify_partition(
        space, static_cast<std::size_t>(args[0]));
    text = fmt::format(
        "partition at level {}: length {}, class size {}, {}\n", v.level,
        v.length, v.class_size, v.ok() ? "ok" : "FAILED " + v.counterexample);
    results = toeplitz::to_json(v);
    verdicts.push_back(Json{{"name", "periodic partition"}, {"pass", v.ok()}});
    if (!v.ok()) {
      emit(cfg, text,
           top_level("odometer", cfg, std::move(results), std::move(verdicts)));
      return kExitInternal;
    }
  } else if (op == "table") {
    need(0);
    Json rows = Json::array();
    for (const auto& e : toeplitz::all_elements(space)) {
      text += e.str() + "\n";
      rows.push_back(toeplitz::to_json(e));
    }
    results = Json{{"elements", std::move(rows)}};
  } else {
    throw std::invalid_argument(fmt::format(
        "unknown odometer op '{}' (element, add, step, distance, partition, "
        "table)",
        op));
  }

  emit(cfg, text, top_level("odometer", cfg, std::move(results), std::move(verdicts)));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// factor
// ---------------------------------------------------------------------------

int cmd_factor(const std::string& file, const RunConfig& cfg) {
  const toeplitz::SequenceRule rule = toeplitz::load_rule_file(file);
  const auto candidates = structure_candidates(rule, cfg);
  toeplitz::StructureResult sr =
      toeplitz::build_periodic_structure(rule, candidates, cfg.radius);
  if (static_cast<std::int64_t>(sr.structure.entries.size()) > cfg.depth)
    sr.structure.entries.resize(static_cast<std::size_t>(cfg.depth));

  std::string text = fmt::format("# factor {}\n", file);
  Json results;
  Json verdicts = Json::array();

  // Shift addresses out to t_max.
  const toeplitz::OdometerSpace space = toeplitz::structure_space(sr.structure);
  text += fmt::format("odometer moduli:");
  for (const auto q : space.moduli()) text += fmt::format(" {}", q);
  text += "\n";

  Json addresses = Json::array();
  for (std::int64_t t = -cfg.t_max; t <= cfg.t_max; ++t) {
    const auto a = toeplitz::address(toeplitz::SequenceRule::shift_of(rule, t),
                                     rule, sr.structure, cfg.radius);
    if (t >= -3 && t <= 3)
      text += fmt::format("  address(S^{}(x)) = {}\n", t, a.element.str());
    addresses.push_back(Json{{"t", t}, {"address", toeplitz::to_json(a)}});
  }
  results["shift_addresses"] = std::move(addresses);

  const auto semi =
      toeplitz::verify_semiconjugacy(rule, sr.structure, cfg.t_max, cfg.radius);
  text += fmt::format("semiconjugacy on |t| <= {}: {}\n", cfg.t_max,
                      semi.ok() ? "ok" : "FAILED");
  results["semiconjugacy"] = toeplitz::to_json(semi);
  verdicts.push_back(
      Json{{"name", "pi o S = g o pi on shift samples"}, {"pass", semi.ok()}});

  // Sample: nearby shifts plus the constructed Toeplitz point when the
  // structure supports one.
  toeplitz::OrbitSample sample;
  for (std::int64_t t = -3; t <= 3; ++t)
    sample.push_back({fmt::format("S^{}(x)", t),
                      toeplitz::SequenceRule::shift_of(rule, t)});
  bool eta_built = false;
  try {
    toeplitz::GrowthChain chain = toeplitz::refine_growth(sr.structure);
    if (static_cast<std::int64_t>(chain.entries.size()) > cfg.depth)
      chain.entries.resize(static_cast<std::size_t>(cfg.depth));
    const auto c = toeplitz::assemble_eta(rule, chain, cfg.radius);
    sample.push_back({"eta", c.eta});
    for (const auto& level : c.levels)
      sample.push_back({fmt::format("S^{}(x) (z at q={})", level.shift, level.q),
                        toeplitz::SequenceRule::shift_of(rule, level.shift)});
    eta_built = true;
  } catch (const toeplitz::InconclusiveError& e) {
    text += fmt::format("eta not constructed: {}\n", e.what());
    results["eta_note"] = e.what();
  }

  const auto partition =
      toeplitz::verify_address_partition(rule, sr.structure, sample, cfg.radius);
  Json part_json = Json::array();
  bool part_ok = true;
  for (const auto& v : partition) {
    part_ok = part_ok && v.ok();
    part_json.push_back(toeplitz::to_json(v));
  }
  text += fmt::format("alignment classes behave as a periodic partition: {}\n",
                      part_ok ? "ok" : "FAILED");
  results["partition"] = std::move(part_json);
  verdicts.push_back(Json{{"name", "alignment classes form periodic partitions"},
                          {"pass", part_ok}});

  const std::int64_t cap = space.moduli().back();
  const auto fibers =
      toeplitz::fiber_report(rule, sr.structure, sample, cfg.radius, cap);
  text += fmt::format("fiber groups over {} sample points:\n", sample.size());
  for (const auto& g : fibers.groups) {
    text += fmt::format("  {} <- {}{}\n", g.address,
                        fmt::join(g.members, ", "),
                        g.members.size() == 1
                            ? (g.toeplitz_consistent
                                   ? " [consistent with Toeplitz]"
                                   : "")
                            : fmt::format(" [shared fiber, {} disagreements]",
                                          g.disagreements.size()));
  }
  for (const auto& [label, why] : fibers.unaddressed)
    text += fmt::format("  unaddressed {}: {}\n", label, why);
  results["fibers"] = toeplitz::to_json(fibers);
  results["eta_built"] = eta_built;

  emit(cfg, text, top_level("factor", cfg, std::move(results), std::move(verdicts)));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const RunConfig& cfg, std::uint32_t seed, int rules) {
  toeplitz::SelfCheckOptions opt;
  opt.radius = std::min<std::int64_t>(cfg.radius, 512);
  opt.period_cap = std::min<std::int64_t>(cfg.period_cap, 24);
  opt.seed = seed;
  opt.random_rules = rules;

  const auto checks = toeplitz::run_selfcheck(opt);
  std::string text;
  Json verdicts = Json::array();
  bool all = true;
  for (const auto& r : checks) {
    all = all && r.pass;
    text += fmt::format("[{}] {}{}\n", r.pass ? "PASS" : "FAIL", r.name,
                        r.pass ? "" : ": " + r.detail);
    verdicts.push_back(
        Json{{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
  }
  text += fmt::format("{}\n", all ? "all checks passed" : "CHECKS FAILED");
  emit(cfg, text,
       top_level("verify", cfg, Json{{"checks", checks.size()}},
                 std::move(verdicts)));
  return all ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tpz: finite-window analysis of two-sided symbolic sequences, Toeplitz "
      "construction and odometer factors"};
  app.require_subcommand(1);

  RunConfig cfg;
  app.add_option("--radius", cfg.radius, "window radius (default 4096)");
  app.add_option("--period-cap", cfg.period_cap,
                 "largest period to scan (default 64)");
  app.add_option("--depth", cfg.depth, "structure depth cap (default 8)");
  app.add_option("--t-max", cfg.t_max, "shift range for factor checks");
  app.add_option("--format", cfg.format, "text | structured")
      ->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--out", cfg.out, "write the report to a file");

  std::string seq_file;
  std::string eta_out;
  std::vector<std::int64_t> moduli;
  std::string odo_op;
  std::vector<std::int64_t> odo_args;
  std::uint32_t seed = 1;
  int rules = 32;

  auto* analyze = app.add_subcommand("analyze", "skeleton table, aperiodic part, recurrence");
  analyze->add_option("file", seq_file, "sequence definition file")->required();

  auto* structure = app.add_subcommand("structure", "periodic structure with provenance");
  structure->add_option("file", seq_file)->required();

  auto* eta = app.add_subcommand("eta", "construct a Toeplitz sequence in the orbit closure");
  eta->add_option("file", seq_file)->required();
  eta->add_option("--eta-out", eta_out, "where to write the eta definition");

  auto* odometer = app.add_subcommand("odometer", "odometer arithmetic and partitions");
  odometer->add_option("--moduli", moduli, "regular moduli chain")
      ->required()
      ->delimiter(',');
  odometer->add_option("op", odo_op,
                       "element | add | step | distance | partition | table")
      ->required();
  odometer->add_option("args", odo_args, "integer arguments for the op");

  auto* factor = app.add_subcommand("factor", "addresses, semiconjugacy, fibers");
  factor->add_option("file", seq_file)->required();

  auto* verify = app.add_subcommand("verify", "run the library invariant suite");
  verify->add_option("--seed", seed, "random corpus seed");
  verify->add_option("--rules", rules, "number of random rules");

  try {
    app.parse(argc, argv);
    cfg.validate();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(seq_file, cfg);
    if (structure->parsed()) return cmd_structure(seq_file, cfg);
    if (eta->parsed()) return cmd_eta(seq_file, cfg, eta_out);
    if (odometer->parsed()) return cmd_odometer(moduli, odo_op, odo_args, cfg);
    if (factor->parsed()) return cmd_factor(seq_file, cfg);
    if (verify->parsed()) return cmd_verify(cfg, seed, rules);
  } catch (const toeplitz::ParseError& e) {
    std::cerr << fmt::format("parse error: {}\n", e.what());
    return kExitUsage;
  } catch (const toeplitz::UndefinedPosition& e) {
    std::cerr << fmt::format(
        "{}: {} (position outside the certified coverage; construct a deeper "
        "structure with --depth or a larger --radius)\n",
        toeplitz::errc::coverage_gap, e.what());
    return kExitInconclusive;
  } catch (const toeplitz::InconclusiveError& e) {
    std::cerr << fmt::format("{}: {}\n", e.code(), e.what());
    return kExitInconclusive;
  } catch (const toeplitz::InvariantViolation& e) {
    std::cerr << fmt::format("internal invariant violation: {}\n", e.what());
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << fmt::format("error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("unexpected error: {}\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
