#pragma once

// Runtime series for the scaling check: a fixed three-block template whose
// constants grow in bit length, and a companion series that widens the
// quantifier ranges instead.

#include "shortpa/formula.hpp"
#include "shortpa/solver.hpp"

#include <cstdint>
#include <vector>

namespace shortpa {

// E a A b E c over [0,7] with coefficients and right-hand sides of `bits`
// bits: their top five bits are fixed, the rest come from the seed.
Formula scaling_formula(std::size_t bits, std::uint64_t seed = 1);
// The same template with ranges [0, 2^ell - 1] and small constants.
Formula range_formula(std::size_t ell);

struct ScalingPoint {
  std::size_t x = 0;     // bit length or range bits
  double seconds = 0;    // median of the repeats
  bool result = false;
  bool oracle = false;
  std::size_t kpt_pieces = 0;
};

std::vector<ScalingPoint> scaling_series(const std::vector<std::size_t>& bits, std::size_t repeats = 3,
                                         const SolverOptions& opt = {});
std::vector<ScalingPoint> range_series(const std::vector<std::size_t>& ells, std::size_t repeats = 1,
                                       const SolverOptions& opt = {});
// Least-squares slope of log(seconds) against log(x).
double loglog_slope(const std::vector<ScalingPoint>& pts);

}  // namespace shortpa
