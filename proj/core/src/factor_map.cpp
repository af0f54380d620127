#include "toeplitz/factor_map.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "toeplitz/errors.hpp"

namespace toeplitz {

OdometerSpace structure_space(const PeriodicStructure& ps,
                              std::size_t max_depth) {
  if (ps.entries.empty())
    throw std::invalid_argument("structure_space: empty periodic structure");
  std::vector<std::int64_t> moduli;
  for (const auto& e : ps.entries) {
    if (e.q == 1) continue;  // Z_1 carries no information
    moduli.push_back(e.q);
    if (max_depth > 0 && moduli.size() == max_depth) break;
  }
  if (moduli.empty())
    throw std::invalid_argument(
        "structure_space: structure has no nontrivial period");
  return OdometerSpace(std::move(moduli));
}

void require_coherent_levels(const std::vector<std::int64_t>& levels,
                             const std::vector<std::int64_t>& periods) {
  if (levels.size() != periods.size())
    throw std::invalid_argument("levels/periods size mismatch");
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    if (mod_floor(levels[i + 1], periods[i]) != levels[i])
      throw InconclusiveError(
          errc::incoherent,
          fmt::format("alignment {} at level {} (q={}) contradicts alignment "
                      "{} at level {} (q={}); the window witness is spurious, "
                      "raise the radius",
                      levels[i + 1], i + 2, periods[i + 1], levels[i], i + 1,
                      periods[i]));
  }
}

SkeletonAddress address(const SequenceRule& y, const SequenceRule& x,
                        const PeriodicStructure& ps, std::int64_t radius) {
  const OdometerSpace space = structure_space(ps);
  const auto& periods = space.moduli();

  std::vector<std::int64_t> levels;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    const std::int64_t q = periods[i];
    const SkeletonMap sk_x = skeleton(x, q, radius);
    if (shift_stabilizer(sk_x) != q)
      throw std::invalid_argument(fmt::format(
          "address: structure level q={} is not essential at radius {}; the "
          "class index would be ambiguous",
          q, radius));
    const auto offsets = skeleton_align(x, y, q, radius);
    if (offsets.empty())
      throw InconclusiveError(
          errc::no_address,
          fmt::format("no alignment at level q={} within radius {}: the point "
                      "is not witnessed inside the orbit closure's fiber "
                      "structure",
                      q, radius));
    levels.push_back(offsets.front());
  }
  require_coherent_levels(levels, periods);

  SkeletonAddress addr{from_integer(space, levels.back()), levels};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (addr.element.coord(i + 1) != levels[i])
      throw InvariantViolation("address: coherent vector is not the reduction "
                               "of its deepest coordinate");
  }
  return addr;
}

SemiconjugacyVerdict verify_semiconjugacy(const SequenceRule& x,
                                          const PeriodicStructure& ps,
                                          std::int64_t t_max,
                                          std::int64_t radius) {
  if (t_max < 0) throw std::invalid_argument("t_max must be >= 0");
  const OdometerSpace space = structure_space(ps);

  SemiconjugacyVerdict v;
  v.t_min = -t_max;
  v.t_max = t_max;

  std::vector<OdometerElement> addresses;
  for (std::int64_t t = -t_max; t <= t_max; ++t) {
    const SkeletonAddress a =
        address(SequenceRule::shift_of(x, t), x, ps, radius);
    if (a.element != from_integer(space, t))
      v.failures.push_back(
          fmt::format("address(S^{}(x)) = {} but the integer reduction is {}",
                      t, a.element.str(), from_integer(space, t).str()));
    addresses.push_back(a.element);
  }
  for (std::size_t i = 0; i + 1 < addresses.size(); ++i) {
    if (addresses[i + 1] != step(addresses[i]))
      v.failures.push_back(fmt::format(
          "one-step law fails at t={}: {} then {}",
          v.t_min + static_cast<std::int64_t>(i), addresses[i].str(),
          addresses[i + 1].str()));
  }
  return v;
}

std::vector<LevelPartitionVerdict> verify_address_partition(
    const SequenceRule& x, const PeriodicStructure& ps,
    const OrbitSample& sample, std::int64_t radius) {
  if (sample.empty())
    throw std::invalid_argument("verify_address_partition: empty sample");
  const OdometerSpace space = structure_space(ps);
  const auto& periods = space.moduli();

  // Per point and level: the unique alignment class, when it exists.
  struct PointClasses {
    std::vector<std::optional<std::int64_t>> j;
    std::vector<std::optional<std::int64_t>> j_shifted;
  };
  std::vector<PointClasses> classes(sample.size());
  for (std::size_t s = 0; s < sample.size(); ++s) {
    classes[s].j.resize(periods.size());
    classes[s].j_shifted.resize(periods.size());
    for (std::size_t i = 0; i < periods.size(); ++i) {
      const auto offs = skeleton_align(x, sample[s].rule, periods[i], radius);
      if (offs.size() == 1) classes[s].j[i] = offs.front();
      const auto offs_shift = skeleton_align(
          x, SequenceRule::shift_of(sample[s].rule, 1), periods[i], radius);
      if (offs_shift.size() == 1) classes[s].j_shifted[i] = offs_shift.front();
    }
  }

  std::vector<LevelPartitionVerdict> out;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    LevelPartitionVerdict v;
    v.q = periods[i];
    v.each_point_one_class = true;
    v.shift_advances_class = true;
    v.nested_in_previous = true;

    for (std::size_t s = 0; s < sample.size(); ++s) {
      const auto& j = classes[s].j[i];
      if (!j) {
        v.each_point_one_class = false;
        v.failures.push_back(fmt::format(
            "'{}' has no unique class at q={}", sample[s].label, v.q));
        continue;
      }
      const auto& js = classes[s].j_shifted[i];
      if (!js || *js != mod_floor(*j + 1, v.q)) {
        v.shift_advances_class = false;
        v.failures.push_back(
            fmt::format("shift of '{}' lands in class {} instead of {} at q={}",
                        sample[s].label, js ? std::to_string(*js) : "none",
                        mod_floor(*j + 1, v.q), v.q));
      }
      if (i > 0) {
        const auto& prev = classes[s].j[i - 1];
        if (!prev || mod_floor(*j, periods[i - 1]) != *prev) {
          v.nested_in_previous = false;
          v.failures.push_back(fmt::format(
              "'{}' class {} at q={} is not nested in class {} at q={}",
              sample[s].label, *j, v.q,
              prev ? std::to_string(*prev) : "none", periods[i - 1]));
        }
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

FiberReport fiber_report(const SequenceRule& x, const PeriodicStructure& ps,
                         const OrbitSample& sample, std::int64_t radius,
                         std::int64_t aperiodic_cap) {
  FiberReport rep;
  std::map<std::int64_t, std::vector<std::size_t>> by_rep;
  std::vector<std::optional<SkeletonAddress>> addrs(sample.size());

  for (std::size_t s = 0; s < sample.size(); ++s) {
    try {
      addrs[s] = address(sample[s].rule, x, ps, radius);
      by_rep[addrs[s]->element.rep()].push_back(s);
    } catch (const InconclusiveError& e) {
      rep.unaddressed.emplace_back(sample[s].label, e.what());
    }
  }

  for (const auto& [key, members] : by_rep) {
    FiberGroup g;
    g.address_rep = key;
    g.address = addrs[members.front()]->element.str();
    for (std::size_t s : members) g.members.push_back(sample[s].label);

    if (members.size() >= 2) {
      // Witnessed disagreement positions between the first member and any
      // other: evidence that the shared fiber is not a singleton.
      const SequenceRule& first = sample[members.front()].rule;
      for (std::size_t mi = 1; mi < members.size(); ++mi) {
        const SequenceRule& other = sample[members[mi]].rule;
        for (std::int64_t n = -radius; n < radius; ++n) {
          if (!first.is_defined(n) || !other.is_defined(n)) continue;
          if (first.eval(n) != other.eval(n)) {
            g.disagreements.push_back(n);
            if (g.disagreements.size() >= 16) break;
          }
        }
        if (g.disagreements.size() >= 16) break;
      }
    } else {
      g.toeplitz_consistent =
          aperiodic_positions(sample[members.front()].rule, aperiodic_cap,
                              radius)
              .empty();
    }
    rep.groups.push_back(std::move(g));
  }
  return rep;
}

}  // namespace toeplitz
