#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "toeplitz/alphabet.hpp"

namespace toeplitz {

// Remainder in [0, m) for any integer n.
constexpr std::int64_t mod_floor(std::int64_t n, std::int64_t m) {
  std::int64_t r = n % m;
  return r < 0 ? r + m : r;
}

// The p-periodic part of a sequence, encoded as a partial map from residues
// mod p to symbols: residue r is assigned sigma iff every observed position
// n ≡ r (mod p) carried sigma. Membership of an integer n is a pure residue
// test, so a SkeletonMap simultaneously encodes the position set
// { n : n mod p in domain } and its symbol fibers.
//
// evidence_radius records the window [-N, N) that witnessed the map;
// 0 means the map was derived symbolically (exact) or constructed directly.
struct SkeletonMap {
  std::int64_t period = 1;
  std::int64_t evidence_radius = 0;
  std::vector<std::optional<SymbolId>> slots;  // size == period

  SkeletonMap() = default;
  SkeletonMap(std::int64_t p, std::int64_t radius)
      : period(p), evidence_radius(radius), slots(static_cast<std::size_t>(p)) {}

  bool contains(std::int64_t n) const {
    return slots[static_cast<std::size_t>(mod_floor(n, period))].has_value();
  }
  std::optional<SymbolId> at(std::int64_t n) const {
    return slots[static_cast<std::size_t>(mod_floor(n, period))];
  }

  std::size_t domain_size() const {
    std::size_t k = 0;
    for (const auto& s : slots) k += s.has_value();
    return k;
  }
  bool empty_domain() const { return domain_size() == 0; }
  bool full_domain() const { return domain_size() == static_cast<std::size_t>(period); }

  std::vector<std::int64_t> domain_residues() const {
    std::vector<std::int64_t> out;
    for (std::int64_t r = 0; r < period; ++r)
      if (slots[static_cast<std::size_t>(r)]) out.push_back(r);
    return out;
  }

  // The map of the shifted position set: if this encodes Per_p(x), the result
  // encodes Per_p(x) - t, i.e. membership of n tests (n + t) against *this.
  SkeletonMap shifted(std::int64_t t) const {
    SkeletonMap out(period, evidence_radius);
    for (std::int64_t r = 0; r < period; ++r)
      out.slots[static_cast<std::size_t>(mod_floor(r - t, period))] =
          slots[static_cast<std::size_t>(r)];
    return out;
  }

  // Same domain and values (evidence radius ignored).
  friend bool operator==(const SkeletonMap& a, const SkeletonMap& b) {
    return a.period == b.period && a.slots == b.slots;
  }
  friend bool operator!=(const SkeletonMap& a, const SkeletonMap& b) {
    return !(a == b);
  }
};

// True iff shifting the partial map by t (mod p) preserves both domain and
// values. Stable shifts form a subgroup of Z_p.
bool is_shift_stable(const SkeletonMap& sk, std::int64_t t);

}  // namespace toeplitz
