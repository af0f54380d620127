#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace toeplitz {

// Index into an Alphabet. Everything downstream stores symbols as ids;
// labels only matter at the I/O boundary.
using SymbolId = std::uint32_t;

// A finite, ordered set of distinct symbol labels. Cheap to copy (shared
// immutable payload); two alphabets compare equal iff their label lists do.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> labels);

  std::size_t size() const { return data_ ? data_->labels.size() : 0; }
  const std::string& label(SymbolId id) const;
  const std::vector<std::string>& labels() const;

  // Returns the id of `label`, or throws std::invalid_argument.
  SymbolId id_of(const std::string& label) const;
  bool contains(const std::string& label) const;

  bool valid(SymbolId id) const { return id < size(); }
  void require(SymbolId id) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return a.data_->labels == b.data_->labels;
  }
  friend bool operator!=(const Alphabet& a, const Alphabet& b) {
    return !(a == b);
  }

 private:
  struct Data {
    std::vector<std::string> labels;
  };
  std::shared_ptr<const Data> data_;
};

// Convenience for tests and built-in corpora: labels "a", "b", "c", ...
Alphabet letters_alphabet(std::size_t n);

}  // namespace toeplitz
