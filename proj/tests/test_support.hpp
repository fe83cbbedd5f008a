#pragma once

// Random formula generation and a deliberately naive evaluator for tests.

#include "shortpa/formula.hpp"

#include <random>

namespace shortpa::testing {

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline BoolExpr random_expr(std::mt19937_64& rng, const std::vector<QuantBlock>& blocks, int atoms, int cmax) {
  if (atoms == 1) {
    LinearAtom a;
    Int scale = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t j = 0; j < blocks[b].dim; ++j) {
        if (uniform(rng, 0, 2) == 0) continue;
        int c = uniform(rng, -cmax, cmax);
        if (c == 0) continue;
        a.coeffs[VarRef{b, j}] = c;
        scale += abs(Int(c)) * blocks[b].bound->hi;
      }
    if (a.coeffs.empty()) a.coeffs[VarRef{blocks.size() - 1, 0}] = uniform(rng, 0, 1) ? 1 : -1;
    int s = static_cast<int>(std::min<Int>(scale, 200));
    a.rhs = uniform(rng, -s / 2, s / 2 + 1);
    int r = uniform(rng, 0, 5);
    a.rel = r < 3 ? Rel::Le : (r < 5 ? Rel::Lt : Rel::Eq);
    BoolExpr e = BoolExpr::leaf(a);
    return uniform(rng, 0, 5) == 0 ? BoolExpr::negation(e) : e;
  }
  int left = uniform(rng, 1, atoms - 1);
  std::vector<BoolExpr> kids{random_expr(rng, blocks, left, cmax), random_expr(rng, blocks, atoms - left, cmax)};
  BoolExpr e = uniform(rng, 0, 1) ? BoolExpr::conj(kids) : BoolExpr::disj(kids);
  return uniform(rng, 0, 6) == 0 ? BoolExpr::negation(e) : e;
}

// k alternating blocks ending in E, dimensions <= nmax, at most amax atoms,
// bounds [0, 2^l - 1] with l <= lmax, coefficients in [-cmax, cmax].
inline Formula random_sentence(std::mt19937_64& rng, int k, int nmax, int amax, int lmax, int cmax, bool with_free) {
  Formula f;
  static const char* names[] = {"p", "a", "b", "c", "d", "e", "g"};
  if (with_free) {
    int l = uniform(rng, 1, lmax);
    f.blocks.push_back(QuantBlock{Quant::Free, names[0], static_cast<std::size_t>(uniform(rng, 1, nmax)),
                                  Bound{0, pow2(l) - 1}});
  }
  for (int i = 0; i < k; ++i) {
    Quant q = ((k - 1 - i) % 2 == 0) ? Quant::Exists : Quant::Forall;
    int l = uniform(rng, 1, lmax);
    f.blocks.push_back(
        QuantBlock{q, names[1 + i], static_cast<std::size_t>(uniform(rng, 1, nmax)), Bound{0, pow2(l) - 1}});
  }
  f.matrix = random_expr(rng, f.blocks, uniform(rng, 1, amax), cmax);
  return f;
}

// Straight recursion over every assignment, no pruning, no shortcuts.
inline bool naive_rec(const Formula& f, std::size_t b, std::size_t j, std::vector<IntVec>& x) {
  if (b == f.blocks.size()) return eval(f.matrix, x);
  if (j == f.blocks[b].dim) return naive_rec(f, b + 1, 0, x);
  bool exists = f.blocks[b].quant == Quant::Exists;
  for (Int v = f.blocks[b].bound->lo; v <= f.blocks[b].bound->hi; ++v) {
    x[b][j] = v;
    if (naive_rec(f, b, j + 1, x) == exists) return exists;
  }
  return !exists;
}

inline bool naive_decide(const Formula& f) {
  std::vector<IntVec> x;
  for (const auto& b : f.blocks) x.emplace_back(b.dim, Int(0));
  return naive_rec(f, 0, 0, x);
}

}  // namespace shortpa::testing
