#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fracbranch {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast property checks of the numeric core (a few seconds in total):
/// gamma recurrence, terminating 2F1 against direct summation, the CMS map,
/// sampler moments and the s* algebra.
std::vector<SelftestCheck> run_selftest(std::uint64_t seed = 20240611);

}  // namespace fracbranch
