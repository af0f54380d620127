#include "toeplitz/odometer.hpp"

#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "toeplitz/errors.hpp"
#include "toeplitz/skeleton_map.hpp"  // mod_floor

namespace toeplitz {

namespace {
constexpr std::int64_t kModulusCap = std::int64_t{1} << 31;
}

OdometerSpace::OdometerSpace(std::vector<std::int64_t> moduli) {
  if (moduli.empty())
    throw std::invalid_argument("odometer needs at least one modulus");
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    if (moduli[i] < 1)
      throw std::invalid_argument(
          fmt::format("modulus n_{} = {} must be >= 1", i + 1, moduli[i]));
    if (moduli[i] > kModulusCap)
      throw std::invalid_argument(
          fmt::format("modulus n_{} = {} exceeds 2^31", i + 1, moduli[i]));
  }
  for (std::size_t i = 0; i + 1 < moduli.size(); ++i) {
    if (moduli[i + 1] % moduli[i] != 0)
      throw std::invalid_argument(fmt::format(
          "moduli are not regular: n_{} = {} does not divide n_{} = {}", i + 1,
          moduli[i], i + 2, moduli[i + 1]));
    if (moduli[i + 1] <= moduli[i])
      throw std::invalid_argument(fmt::format(
          "moduli must be strictly increasing: n_{} = {} vs n_{} = {}", i + 1,
          moduli[i], i + 2, moduli[i + 1]));
  }
  moduli_ = std::make_shared<const std::vector<std::int64_t>>(std::move(moduli));
}

std::int64_t OdometerSpace::modulus(std::size_t level) const {
  if (level < 1 || level > depth())
    throw std::invalid_argument(
        fmt::format("level {} out of range 1..{}", level, depth()));
  return (*moduli_)[level - 1];
}

std::int64_t OdometerSpace::last_modulus() const {
  if (!moduli_) throw std::logic_error("empty OdometerSpace");
  return moduli_->back();
}

const std::vector<std::int64_t>& OdometerSpace::moduli() const {
  if (!moduli_) throw std::logic_error("empty OdometerSpace");
  return *moduli_;
}

OdometerElement::OdometerElement(OdometerSpace space, std::int64_t representative)
    : space_(std::move(space)), rep_(representative) {
  if (rep_ < 0 || rep_ >= space_.last_modulus())
    throw std::invalid_argument(
        fmt::format("representative {} out of range mod {}", rep_,
                    space_.last_modulus()));
}

std::int64_t OdometerElement::coord(std::size_t level) const {
  return rep_ % space_.modulus(level);
}

std::vector<std::int64_t> OdometerElement::coords() const {
  std::vector<std::int64_t> out;
  out.reserve(space_.depth());
  for (std::size_t i = 1; i <= space_.depth(); ++i) out.push_back(coord(i));
  return out;
}

std::string OdometerElement::str() const {
  std::string s = "(";
  for (std::size_t i = 1; i <= space_.depth(); ++i) {
    if (i > 1) s += ", ";
    s += std::to_string(coord(i));
  }
  s += ")";
  return s;
}

OdometerElement from_integer(const OdometerSpace& space, std::int64_t k) {
  return OdometerElement(space, mod_floor(k, space.last_modulus()));
}

OdometerElement generator(const OdometerSpace& space) {
  return from_integer(space, 1);
}

namespace {
void require_same_space(const OdometerElement& a, const OdometerElement& b) {
  if (a.space() != b.space())
    throw std::invalid_argument("odometer elements over different moduli");
}
}  // namespace

OdometerElement add(const OdometerElement& a, const OdometerElement& b) {
  require_same_space(a, b);
  const std::int64_t n = a.space().last_modulus();
  return OdometerElement(a.space(), (a.rep() + b.rep()) % n);
}

OdometerElement negate(const OdometerElement& a) {
  const std::int64_t n = a.space().last_modulus();
  return OdometerElement(a.space(), mod_floor(-a.rep(), n));
}

OdometerElement step(const OdometerElement& a) {
  return add(a, generator(a.space()));
}

OdometerElement inverse_step(const OdometerElement& a) {
  return add(a, negate(generator(a.space())));
}

Rational natural_distance(const OdometerElement& a, const OdometerElement& b) {
  require_same_space(a, b);
  for (std::size_t i = 1; i <= a.space().depth(); ++i) {
    if (a.coord(i) != b.coord(i))
      return Rational(1, static_cast<std::int64_t>(i));
  }
  return Rational(0);
}

CylinderSet::CylinderSet(OdometerSpace space, std::size_t level,
                         std::int64_t residue)
    : space_(std::move(space)), level_(level), residue_(residue) {
  const std::int64_t n = space_.modulus(level);  // validates level
  if (residue < 0 || residue >= n)
    throw std::invalid_argument(
        fmt::format("cylinder residue {} out of range mod {}", residue, n));
}

bool CylinderSet::contains(const OdometerElement& e) const {
  if (e.space() != space_)
    throw std::invalid_argument("cylinder and element over different moduli");
  return e.coord(level_) == residue_;
}

std::vector<OdometerElement> all_elements(const OdometerSpace& space) {
  std::vector<OdometerElement> out;
  const std::int64_t n = space.last_modulus();
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) out.emplace_back(space, k);
  return out;
}

PartitionVerdict verify_partition(const OdometerSpace& space, std::size_t level) {
  const std::int64_t n_k = space.modulus(level);  // validates level
  const std::int64_t n_d = space.last_modulus();

  PartitionVerdict v;
  v.level = level;
  v.length = n_k;
  v.class_size = n_d / n_k;

  const auto elements = all_elements(space);

  // Classes by the level coordinate; membership is exclusive by definition,
  // verified by counting.
  std::vector<std::vector<std::int64_t>> classes(static_cast<std::size_t>(n_k));
  std::int64_t assigned = 0;
  for (const auto& e : elements) {
    std::int64_t hits = 0;
    for (std::int64_t j = 0; j < n_k; ++j) {
      if (CylinderSet(space, level, j).contains(e)) {
        classes[static_cast<std::size_t>(j)].push_back(e.rep());
        ++hits;
      }
    }
    assigned += hits;
    if (hits != 1 && v.counterexample.empty())
      v.counterexample =
          fmt::format("element {} lies in {} classes", e.str(), hits);
  }
  v.disjoint_and_covering =
      assigned == static_cast<std::int64_t>(elements.size()) &&
      v.counterexample.empty();

  v.sizes_uniform = true;
  for (std::int64_t j = 0; j < n_k; ++j) {
    if (static_cast<std::int64_t>(classes[static_cast<std::size_t>(j)].size()) !=
        v.class_size) {
      v.sizes_uniform = false;
      if (v.counterexample.empty())
        v.counterexample = fmt::format(
            "class {} has {} elements, expected {}", j,
            classes[static_cast<std::size_t>(j)].size(), v.class_size);
    }
  }

  // Step must carry class j exactly onto class j+1, wrapping at n_k.
  v.cyclically_permuted = true;
  for (std::int64_t j = 0; j < n_k; ++j) {
    std::vector<std::int64_t> image;
    for (std::int64_t rep : classes[static_cast<std::size_t>(j)])
      image.push_back(step(OdometerElement(space, rep)).rep());
    std::sort(image.begin(), image.end());
    std::vector<std::int64_t> target =
        classes[static_cast<std::size_t>((j + 1) % n_k)];
    std::sort(target.begin(), target.end());
    if (image != target) {
      v.cyclically_permuted = false;
      if (v.counterexample.empty())
        v.counterexample =
            fmt::format("step(V_{}) != V_{}", j, (j + 1) % n_k);
      break;
    }
  }

  // Isometry of the step map under the natural metric.
  v.isometric = true;
  auto check_pair = [&](std::int64_t a, std::int64_t b) {
    const OdometerElement ea(space, a), eb(space, b);
    if (natural_distance(step(ea), step(eb)) != natural_distance(ea, eb)) {
      v.isometric = false;
      if (v.counterexample.empty())
        v.counterexample = fmt::format(
            "step is not isometric on ({}, {})", ea.str(), eb.str());
    }
  };
  if (n_d <= 64) {
    for (std::int64_t a = 0; a < n_d && v.isometric; ++a)
      for (std::int64_t b = a; b < n_d && v.isometric; ++b) check_pair(a, b);
  } else {
    std::mt19937 rng(0xb5u);
    std::uniform_int_distribution<std::int64_t> pick(0, n_d - 1);
    for (int i = 0; i < 2048 && v.isometric; ++i) check_pair(pick(rng), pick(rng));
  }

  return v;
}

}  // namespace toeplitz
