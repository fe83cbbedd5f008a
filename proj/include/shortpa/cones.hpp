#pragma once

// Rational cones: pulling triangulation and signed unimodular decomposition.

#include "shortpa/arith.hpp"

#include <vector>

namespace shortpa {

struct SignedCone {
  int sign = 1;
  IntMatrix gens;  // rows
};

// Simplicial cones (rows = generators) of a pulling triangulation of the
// pointed cone spanned by `gens`; every cell spans the same linear space.
std::vector<IntMatrix> triangulate_cone(const IntMatrix& gens);

// Unimodular cones whose signed indicator sum equals the simplicial cone
// spanned by the rows of `w` (square, nonsingular), modulo lower-dimensional
// cones.
std::vector<SignedCone> unimodular_decomposition(const IntMatrix& w);

}  // namespace shortpa
