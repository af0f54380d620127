#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace toeplitz {

// Library-wide invariant sweeps behind the CLI `verify` command: algebraic
// laws, window-witness soundness, construction margins and factor-map
// equivariance, all run on built-in and seeded random inputs. Deterministic
// for a fixed seed.
struct SelfCheckOptions {
  std::int64_t radius = 512;
  std::int64_t period_cap = 24;
  std::uint32_t seed = 1;
  int random_rules = 32;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_selfcheck(const SelfCheckOptions& options);

}  // namespace toeplitz
