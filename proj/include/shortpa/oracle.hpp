#pragma once

// Exhaustive alternating-quantifier evaluation over bounded domains. This is
// the independent reference every other route is checked against.

#include "shortpa/formula.hpp"

#include <cstdint>
#include <vector>

namespace shortpa {

struct OracleOptions {
  // Maximum number of (partial) assignments visited before giving up.
  std::uint64_t cap = 10'000'000;
  // Cut a subtree as soon as interval evaluation of the matrix over the
  // remaining box is already decided. With prune == false the cap is checked
  // against the full nominal domain size up front.
  bool prune = true;
  unsigned jobs = 1;
};

bool brute_force_decide(const Formula& f, const OracleOptions& opt = {});

struct CountResult {
  Int count = 0;
  std::vector<IntVec> points;  // lexicographically sorted
};

CountResult brute_force_count(const Formula& f, const OracleOptions& opt = {});

}  // namespace shortpa
