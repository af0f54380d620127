#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "toeplitz/sequence.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Sequence-definition files.
//
// Line-oriented key/value text with brace blocks for nested rules:
//
//   # two-sided sequence over {a, b, c}
//   alphabet: a b c
//   kind: toeplitz_fill
//   stage: 2 0 a
//   stage: 4 1 b
//   stage: 4 3 c
//
// Kind-specific fields:
//   constant       symbol: <label>
//   periodic       pattern: <label>...
//   toeplitz_fill  stage: <period> <residue> <label>   (one per stage)
//   substitution   rule: <label> => <label>...          (one per symbol)
//                  seed: <label>     left_seed: <label>
//   shift_of       offset: <int>     base { ... }
//   splice         skeleton { period: <p> [radius: <r>] entry: <res> <label>... }
//                  [filler { ... }]
//
// Nested blocks (base/filler) inherit the top-level alphabet. '#' starts a
// comment; blank lines are ignored. serialize_rule emits canonical text that
// parses back to a rule with identical evaluations.
// ---------------------------------------------------------------------------

class ParseError : public std::invalid_argument {
 public:
  ParseError(int line, const std::string& message)
      : std::invalid_argument("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

SequenceRule parse_rule(const std::string& text);
SequenceRule load_rule_file(const std::filesystem::path& path);

std::string serialize_rule(const SequenceRule& rule);
void save_rule_file(const std::filesystem::path& path, const SequenceRule& rule);

}  // namespace toeplitz
