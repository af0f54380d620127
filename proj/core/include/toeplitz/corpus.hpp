#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "toeplitz/sequence.hpp"

namespace toeplitz {

// ---------------------------------------------------------------------------
// Built-in example sequences. Tests, the self-check suite and the benchmarks
// all need the same families: honest aperiodic input, sequences that are
// Toeplitz by construction with prescribed skeleton growth, and mixed random
// rules for property sweeps.
// ---------------------------------------------------------------------------

// Two-sided fixed point of the squared Thue-Morse substitution
// (a -> abba, b -> baab) over {a, b}: aperiodic on every residue class.
SequenceRule thue_morse_rule();

// Constant on the even positions, Thue-Morse on the odd ones: the canonical
// input whose only witnessed period is 2, so structure analysis reports no
// growth evidence.
SequenceRule even_constant_odd_aperiodic_rule();

// The four-symbol fill with stages (2,0)->a, (4,1)->b, (4,3)->c: the classic
// small Toeplitz-by-construction sequence abac abac ...
SequenceRule abac_rule();

// Fill with two incomparable essential periods (4 and 6) whose structure
// chains through lcm(4,6) = 12 before closing periodically at 24.
SequenceRule crossed_fill_rule();

// A fill built level by level: evens constant, then enough residue classes
// mod each level period to guarantee a maximal block that clears the growth
// margin 3*q + M against the previous level, closed off periodically at
// full_period. The result is Toeplitz by construction and its refined
// growth chain passes through exactly the requested level periods.
struct TelescopeSpec {
  std::vector<std::int64_t> level_periods;  // e.g. {2, 16, 128}, each dividing
                                            // the next, first entry 2
  std::int64_t full_period = 0;             // multiple of the last level, >= 4x
  std::uint32_t seed = 0;                   // symbol draw
};

struct TelescopeRule {
  SequenceRule rule;
  std::vector<std::int64_t> level_periods;
  std::vector<std::int64_t> level_blocks;  // designed maximal block per level
  std::int64_t full_period = 0;
};

TelescopeRule make_telescope(const TelescopeSpec& spec);

// A spread of telescope shapes (depth 3 and 4, several growth factors and
// symbol seeds). `count` of them, deterministic.
std::vector<TelescopeRule> telescope_family(std::size_t count);

// Random rule of any kind over an alphabet of 2..4 symbols; always total.
// Parameters stay small enough that window analyses are cheap.
SequenceRule random_rule(std::mt19937& rng);

}  // namespace toeplitz
