#include "toeplitz/reports.hpp"

namespace toeplitz {

Json to_json(const MpValue& m) {
  if (m.is_infinite()) return "inf";
  return m.value();
}

Json to_json(const SkeletonMap& sk, const Alphabet& alphabet) {
  Json j;
  j["period"] = sk.period;
  j["evidence_radius"] = sk.evidence_radius;
  j["domain_size"] = sk.domain_size();
  Json assignment = Json::object();
  for (std::int64_t r = 0; r < sk.period; ++r) {
    if (const auto s = sk.slots[static_cast<std::size_t>(r)])
      assignment[std::to_string(r)] = alphabet.label(*s);
  }
  j["assignment"] = std::move(assignment);
  return j;
}

Json to_json(const StructureResult& result) {
  Json entries = Json::array();
  for (const auto& e : result.structure.entries) {
    entries.push_back(Json{{"q", e.q},
                           {"max_block", to_json(e.m)},
                           {"raw_p", e.raw_p},
                           {"reduced_k", e.reduced_k}});
  }
  Json trace = Json::array();
  for (const auto& row : result.trace) {
    trace.push_back(Json{{"p", row.p},
                         {"reduced_k", row.reduced_k},
                         {"q", row.q},
                         {"max_block", to_json(row.m_q)},
                         {"kept", row.kept},
                         {"note", row.note}});
  }
  return Json{{"entries", std::move(entries)},
              {"witnessed_periodic", result.structure.witnessed_periodic},
              {"growth_witnessed", result.growth_witnessed},
              {"evidence_radius", result.structure.evidence_radius},
              {"trace", std::move(trace)},
              {"notes", result.notes}};
}

Json to_json(const RecurrenceReport& rep) {
  Json j;
  j["block"] = Json::array({rep.block_lo, rep.block_hi});
  j["search_radius"] = rep.search_radius;
  j["occurrences"] = rep.occurrences.size();
  j["max_gap"] = rep.max_gap;
  if (!rep.occurrences.empty()) {
    j["first_occurrence"] = rep.occurrences.front();
    j["last_occurrence"] = rep.occurrences.back();
  }
  return j;
}

Json to_json(const EtaConstruction& c, const Alphabet& alphabet) {
  Json levels = Json::array();
  for (const auto& l : c.levels) {
    levels.push_back(Json{{"q", l.q},
                          {"block", l.block},
                          {"anchor", l.anchor},
                          {"shift", l.shift},
                          {"coverage", Json::array({l.cover_lo, l.cover_hi})},
                          {"p_set", to_json(l.p_set, alphabet)}});
  }
  Json transitions = Json::array();
  for (const auto& t : c.transitions) {
    transitions.push_back(
        Json{{"s", t.s}, {"d_left", t.d_left}, {"d_right", t.d_right}});
  }
  Json chain = Json::array();
  for (const auto& e : c.chain.entries)
    chain.push_back(Json{{"q", e.q}, {"max_block", e.m}});
  return Json{{"chain", std::move(chain)},
              {"levels", std::move(levels)},
              {"transitions", std::move(transitions)},
              {"certified", Json::array({c.certified_lo, c.certified_hi})},
              {"skeleton_radius", c.skeleton_radius},
              {"verify_radius", c.verify_radius}};
}

Json to_json(const EtaReport& rep) {
  Json inclusions = Json::array();
  for (const auto& inc : rep.inclusions)
    inclusions.push_back(Json{{"q", inc.q}, {"included", inc.included}});
  return Json{{"aperiodic_empty", rep.aperiodic_empty},
              {"aperiodic_count", rep.aperiodic.size()},
              {"inclusions", std::move(inclusions)},
              {"covered_positions", rep.covered_positions},
              {"gap_positions", rep.gap_positions},
              {"recurrence", to_json(rep.recurrence)}};
}

Json to_json(const OdometerElement& e) {
  Json j;
  j["coords"] = e.coords();
  j["rep"] = e.rep();
  j["text"] = e.str();
  return j;
}

Json to_json(const PartitionVerdict& v) {
  return Json{{"level", v.level},
              {"length", v.length},
              {"class_size", v.class_size},
              {"disjoint_and_covering", v.disjoint_and_covering},
              {"cyclically_permuted", v.cyclically_permuted},
              {"sizes_uniform", v.sizes_uniform},
              {"isometric", v.isometric},
              {"ok", v.ok()},
              {"counterexample", v.counterexample}};
}

Json to_json(const SkeletonAddress& a) {
  Json j = to_json(a.element);
  j["levels"] = a.levels;
  return j;
}

Json to_json(const SemiconjugacyVerdict& v) {
  return Json{{"t_range", Json::array({v.t_min, v.t_max})},
              {"ok", v.ok()},
              {"failures", v.failures}};
}

Json to_json(const LevelPartitionVerdict& v) {
  return Json{{"q", v.q},
              {"each_point_one_class", v.each_point_one_class},
              {"shift_advances_class", v.shift_advances_class},
              {"nested_in_previous", v.nested_in_previous},
              {"ok", v.ok()},
              {"failures", v.failures}};
}

Json to_json(const FiberReport& rep) {
  Json groups = Json::array();
  for (const auto& g : rep.groups) {
    groups.push_back(Json{{"address", g.address},
                          {"rep", g.address_rep},
                          {"members", g.members},
                          {"disagreements", g.disagreements},
                          {"toeplitz_consistent", g.toeplitz_consistent}});
  }
  Json unaddressed = Json::array();
  for (const auto& [label, why] : rep.unaddressed)
    unaddressed.push_back(Json{{"label", label}, {"reason", why}});
  return Json{{"groups", std::move(groups)},
              {"unaddressed", std::move(unaddressed)}};
}

}  // namespace toeplitz
