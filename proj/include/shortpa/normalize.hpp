#pragma once

// Reduction of a bounded sentence to disassociated form: bit-bounded blocks,
// DNF, a single lifted system, singleton prefix blocks, chained floor relations.

#include "shortpa/formula.hpp"
#include "shortpa/polyhedra.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace shortpa {

// Every block ranges over [0, 2^ells[i]); lower bounds are shifted to 0 and
// ranges widened with guard atoms (conjoined for free/exists blocks, added as
// a negated disjunct for forall blocks). Empty blocks are dropped and
// adjacent blocks with the same quantifier merged.
struct BitBounded {
  Formula formula;
  std::vector<std::size_t> ells;
  IntVec free_shift;  // original lower bound of each free coordinate
};
BitBounded bit_bound(const Formula& f);

struct DNFSystems {
  std::size_t dim = 0;  // flattened coordinates, block-major
  std::vector<HPolyhedron> systems;
  std::vector<std::vector<LinearAtom>> atoms;  // matrix atoms of each system
};
DNFSystems to_dnf(const Formula& f);

enum class LiftStyle { Lifted, Compact };

struct Lifting {
  HPolyhedron R;        // over (x, labels)
  std::size_t labels = 0;
  bool hull = false;    // convex hull (true) or big-M encoding
  std::vector<IntVec> label_of;  // label vector of each nonempty system
};
// Integer points of R project onto the union of the systems' integer points.
// `box` bounds every x coordinate; the hull route is used when the lifted
// dimension fits under the polyhedra cap, big-M otherwise.
Lifting union_to_single_system(const DNFSystems& d, LiftStyle style, const std::vector<Bound>& box);

// Concatenation: blocks before the last become singletons
// y_i = sum_j 2^{j ell_i} x_{i,j}; digits move to the last block. The
// matrix must be a conjunction of atoms.
struct Concatenated {
  Formula formula;
  std::vector<std::size_t> bits;  // bit length of each prefix singleton
};
Concatenated concat_variables(const Formula& f, const std::vector<std::size_t>& ells);

struct FloorRelation {
  LinearAtom upper;  // 2^l z_j - z_{j+1} <= 0
  LinearAtom lower;  // z_{j+1} - 2^l z_j < 2^l
};

struct DisassociatedForm {
  std::vector<Quant> quants;       // z_1..z_K
  std::vector<std::size_t> bits;   // bit length added by each z_j
  std::vector<std::size_t> t;      // cumulative bit bounds
  std::vector<FloorRelation> relations;
  std::size_t inner_dim = 0;       // dimension of z_k
  Bound inner_bound;
  HPolyhedron lambda;              // over (z_K, z_k), or z_k alone when K = 0
  bool odd = false;                // k = K + 1 odd

  std::size_t chain() const { return quants.size(); }
  Formula formula() const;
};
DisassociatedForm disassociate(const Concatenated& c);

struct PipelineTrace {
  BitBounded bounded;
  DNFSystems dnf;
  Formula dnf_formula;
  Lifting lifting;
  Formula lifted_formula;
  Concatenated concat;
  DisassociatedForm result;

  // Stage name and formula, in order.
  std::vector<std::pair<std::string, Formula>> stages() const;
};

// The last quantified block must be existential; a formula without one gets
// an empty existential block.
PipelineTrace normalize_pipeline(const Formula& f, LiftStyle style = LiftStyle::Compact);

}  // namespace shortpa
