#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "toeplitz/rational.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Odometer arithmetic at finite depth.
//
// A regular chain n_1 | n_2 | ... | n_D of strictly increasing moduli defines
// the depth-D truncation of the inverse limit of the cyclic groups Z_{n_i}
// with the coordinatewise "+1" map. Coherence (a_i = a_{i+1} mod n_i) makes
// the deepest coordinate a canonical representative, so elements store a
// single residue mod n_D and materialize the full coordinate vector only for
// display and the metric. All equalities below are equalities at depth D.
// ---------------------------------------------------------------------------

class OdometerSpace {
 public:
  OdometerSpace() = default;
  // Validates regularity: every modulus >= 1, strictly increasing, each
  // dividing the next. Reports the first violated divisibility.
  explicit OdometerSpace(std::vector<std::int64_t> moduli);

  std::size_t depth() const { return moduli_ ? moduli_->size() : 0; }
  // 1-based level index, matching the coordinate rendering (a_1, ..., a_D).
  std::int64_t modulus(std::size_t level) const;
  std::int64_t last_modulus() const;
  const std::vector<std::int64_t>& moduli() const;

  friend bool operator==(const OdometerSpace& a, const OdometerSpace& b) {
    if (a.moduli_ == b.moduli_) return true;
    if (!a.moduli_ || !b.moduli_) return false;
    return *a.moduli_ == *b.moduli_;
  }
  friend bool operator!=(const OdometerSpace& a, const OdometerSpace& b) {
    return !(a == b);
  }

 private:
  std::shared_ptr<const std::vector<std::int64_t>> moduli_;
};

class OdometerElement {
 public:
  OdometerElement() = default;
  OdometerElement(OdometerSpace space, std::int64_t representative);

  const OdometerSpace& space() const { return space_; }
  // Canonical representative in [0, n_D).
  std::int64_t rep() const { return rep_; }
  // Coordinate a_level = rep mod n_level, 1-based.
  std::int64_t coord(std::size_t level) const;
  std::vector<std::int64_t> coords() const;
  std::string str() const;  // "(a_1, a_2, ..., a_D)"

  friend bool operator==(const OdometerElement& a, const OdometerElement& b) {
    return a.space_ == b.space_ && a.rep_ == b.rep_;
  }
  friend bool operator!=(const OdometerElement& a, const OdometerElement& b) {
    return !(a == b);
  }

 private:
  OdometerSpace space_;
  std::int64_t rep_ = 0;
};

// Reduction of an integer: coords k mod n_i, coherent by construction.
// from_integer(space, 1) is the generator e.
OdometerElement from_integer(const OdometerSpace& space, std::int64_t k);
OdometerElement generator(const OdometerSpace& space);

// Componentwise group operations; both arguments must share moduli.
OdometerElement add(const OdometerElement& a, const OdometerElement& b);
OdometerElement negate(const OdometerElement& a);

// The odometer map g: x -> x + e, and its inverse.
OdometerElement step(const OdometerElement& a);
OdometerElement inverse_step(const OdometerElement& a);

// 1/m where m is the first (1-based) level at which the coordinate vectors
// disagree; 0 when they agree through depth D (a truncation statement, not
// equality in the full inverse limit).
Rational natural_distance(const OdometerElement& a, const OdometerElement& b);

// Membership test a_level == residue. Lower coordinates are then forced by
// coherence: a_k = residue mod n_k for every k < level.
class CylinderSet {
 public:
  CylinderSet(OdometerSpace space, std::size_t level, std::int64_t residue);
  std::size_t level() const { return level_; }
  std::int64_t residue() const { return residue_; }
  bool contains(const OdometerElement& e) const;

 private:
  OdometerSpace space_;
  std::size_t level_ = 1;
  std::int64_t residue_ = 0;
};

// All n_D depth-D elements, in representative order.
std::vector<OdometerElement> all_elements(const OdometerSpace& space);

// Checks that the cylinder family {V_j : a_level = j} is a periodic
// partition of length n_level: clopen-at-depth classes that are pairwise
// disjoint, cover everything, are cyclically permuted by the step map with
// wraparound, and all have size n_D / n_level. Also verifies that the step
// map is an isometry for the natural metric (exhaustively over pairs for
// small spaces, on a deterministic sample above that).
struct PartitionVerdict {
  std::size_t level = 1;
  std::int64_t length = 1;          // n_level
  std::int64_t class_size = 1;      // n_D / n_level
  bool disjoint_and_covering = false;
  bool cyclically_permuted = false;
  bool sizes_uniform = false;
  bool isometric = false;
  std::string counterexample;       // empty when everything holds

  bool ok() const {
    return disjoint_and_covering && cyclically_permuted && sizes_uniform &&
           isometric;
  }
};

PartitionVerdict verify_partition(const OdometerSpace& space, std::size_t level);

}  // namespace toeplitz
