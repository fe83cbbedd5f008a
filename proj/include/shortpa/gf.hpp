#pragma once

// Short rational generating functions  sum_i c_i t^{a_i} / prod_j (1 - t^{b_ij}).

#include "shortpa/arith.hpp"
#include "shortpa/polyhedra.hpp"

#include <cstddef>
#include <map>
#include <vector>

namespace shortpa {

struct GFTerm {
  Rational c;
  IntVec a;
  std::vector<IntVec> bs;  // every b nonzero; repeats allowed
  bool operator==(const GFTerm&) const = default;
};

struct ShortGF {
  std::size_t nvars = 0;
  std::vector<GFTerm> terms;

  ShortGF() = default;
  explicit ShortGF(std::size_t n) : nvars(n) {}
  bool operator==(const ShortGF&) const = default;
};

struct Progression {
  Int first;
  Int step;   // >= 1
  Int count;  // >= 1
  bool operator==(const Progression&) const = default;
};

// Finite union of arithmetic progressions inside `host`.
struct APSet {
  Interval host;
  std::vector<Progression> progressions;

  Int cardinality() const;
  bool contains(const Int& z) const;
  std::vector<Int> elements() const;
};

// Builds the canonical (disjoint, sorted) APSet of an explicit finite set.
APSet apset_from_values(const Interval& host, std::vector<Int> values);
// Disjoint canonical form of an arbitrary union of progressions.
APSet canonicalize(const APSet& s);

struct TauMap {
  IntVec weights;
  Int apply(const IntVec& x) const { return dot(weights, x); }
};

// Sum over terms of ceil(log2|p q| + 1), plus ceil(log2|x| + 1) over every
// numerator and denominator exponent entry (an entry 0 counts 1).
std::size_t gf_length(const ShortGF& g);

ShortGF gf_monomial(const IntVec& a, const Rational& c = 1);
ShortGF gf_add(const ShortGF& a, const ShortGF& b);
ShortGF gf_scale(const Rational& c, const ShortGF& a);
// Multiplies every term by t^d.
ShortGF gf_shift(const ShortGF& g, const IntVec& d);
// Product of two short GFs (term-by-term, denominators concatenated).
ShortGF gf_mul(const ShortGF& a, const ShortGF& b);
// Indicator of the integer box [lo, hi] (lo <= hi coordinate-wise), or zero.
ShortGF box_gf(const IntVec& lo, const IntVec& hi);

// Merges terms with equal (a, bs) and drops zero coefficients. Best effort.
ShortGF simplify(const ShortGF& g);
// Orients every denominator to be lexicographically positive.
ShortGF orient(const ShortGF& g);
// Deterministic term order (used for JSON and golden comparisons).
ShortGF sorted(const ShortGF& g);

using Expansion = std::map<IntVec, Rational>;
// Laurent coefficients (in the lexicographic orientation) inside [lo, hi];
// zero coefficients are omitted.
Expansion expand(const ShortGF& g, const IntVec& lo, const IntVec& hi, std::size_t cap = 5'000'000);

// Value at t = 1 of a GF representing a finite set (weighted count).
Rational count_rational(const ShortGF& g);
Int count(const ShortGF& g);

// x -> E x on every exponent (E is m x n). Throws when some E b = 0.
ShortGF monomial_substitution(const ShortGF& g, const IntMatrix& e);
// Same map, but factors with E b = 0 are resolved by the limit along a generic
// auxiliary direction, so the result is the honest rational-function value.
ShortGF monomial_substitution_limit(const ShortGF& g, const IntMatrix& e);

ShortGF pack(const ShortGF& f, std::size_t ell);
ShortGF unpack(const ShortGF& g, std::size_t n, std::size_t ell);
ShortGF tau_hadamard(const ShortGF& a, const ShortGF& b, const TauMap& tau);

ShortGF apset_to_gf(const APSet& s);

// GF of P cap Z^d for a pointed rational polyhedron (equality rows are given
// as inequality pairs; strict rows are read over the integers).
ShortGF polyhedron_gf(const HPolyhedron& p);

}  // namespace shortpa
