#pragma once

// Decision and counting for bounded sentences: normalize to disassociated
// form, partition the innermost parameter line, and recurse over the F1/F2
// split of the nested z-windows.

#include "shortpa/formula.hpp"
#include "shortpa/gf.hpp"
#include "shortpa/kannan.hpp"
#include "shortpa/normalize.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace shortpa {

struct SolverOptions {
  LiftStyle style = LiftStyle::Compact;
  Provider provider = Provider::Enumerative;
  std::size_t max_k = 6;
  std::size_t piece_cap = 10'000;         // KPT pieces meeting one node's window
  std::uint64_t work_budget = 200'000'000;  // window evaluations
  std::size_t trace_cap = 10'000;         // recorded nodes
};

// One F2 recursion node: the window of z_K values reachable once z_1..z_level
// are fixed, the pieces meeting it, and the split of its children.
struct NodeStats {
  std::size_t level = 0;
  Int lo, hi;
  std::size_t pieces = 0;   // r at this node
  std::size_t f2 = 0;       // children straddling a piece boundary
  std::size_t f1_runs = 0;  // maximal child runs inside one piece
  bool outcome = false;
};

struct DecisionTrace {
  std::string sentence;
  bool negated = false;          // solved through the negation
  std::vector<Quant> quants;     // z_1..z_K
  std::vector<std::size_t> t;    // cumulative bit bounds
  std::size_t inner_dim = 0;
  std::size_t kpt_pieces = 0;
  std::vector<NodeStats> nodes;  // preorder, at most trace_cap entries
  std::size_t node_count = 0;
  std::size_t max_f2 = 0;
  bool f2_bound_held = true;     // |F2| <= r at every node
  std::uint64_t work = 0;
};

bool decide(const Formula& f, const SolverOptions& opt = {}, DecisionTrace* trace = nullptr);

// Indicator GF of {x in [-N, N]^{n_1} : F(x)} for the free block x.
ShortGF count_gf(const Formula& f, const Int& N, const SolverOptions& opt = {}, DecisionTrace* trace = nullptr);
Int count(const Formula& f, const Int& N, const SolverOptions& opt = {});

// Innermost parametric system of a disassociated form: K_z = {z_k : Lambda(z, z_k)}.
ParametricSystem parametric_system(const DisassociatedForm& d);

}  // namespace shortpa
