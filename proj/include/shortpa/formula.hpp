#pragma once

// Prenex Presburger formulas over bounded integer vector variables: AST,
// s-expression parser/printer, size measure and the integer negation rules.

#include "shortpa/arith.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shortpa {

// Coordinate `coord` (0-based) of quantifier block `block`.
struct VarRef {
  std::size_t block = 0;
  std::size_t coord = 0;
  auto operator<=>(const VarRef&) const = default;
};

enum class Rel { Le, Lt, Eq };

// sum(coeffs[v] * v)  rel  rhs, all integral.
struct LinearAtom {
  std::map<VarRef, Int> coeffs;
  Int rhs = 0;
  Rel rel = Rel::Le;

  bool is_constant() const { return coeffs.empty(); }
  bool operator==(const LinearAtom&) const = default;
};

struct BoolExpr {
  enum class Kind { True, False, Atom, And, Or, Not };
  Kind kind = Kind::True;
  LinearAtom atom;
  std::vector<BoolExpr> kids;

  static BoolExpr truth(bool v) { return BoolExpr{v ? Kind::True : Kind::False, {}, {}}; }
  static BoolExpr leaf(LinearAtom a) { return BoolExpr{Kind::Atom, std::move(a), {}}; }
  static BoolExpr conj(std::vector<BoolExpr> k) { return BoolExpr{Kind::And, {}, std::move(k)}; }
  static BoolExpr disj(std::vector<BoolExpr> k) { return BoolExpr{Kind::Or, {}, std::move(k)}; }
  static BoolExpr negation(BoolExpr e) { return BoolExpr{Kind::Not, {}, {std::move(e)}}; }

  bool operator==(const BoolExpr&) const = default;
};

enum class Quant { Exists, Forall, Free };

// Inclusive integer range applied to every coordinate of a block.
struct Bound {
  Int lo = 0;
  Int hi = 0;
  bool operator==(const Bound&) const = default;
};

struct QuantBlock {
  Quant quant = Quant::Exists;
  std::string name;
  std::size_t dim = 1;
  std::optional<Bound> bound;
  bool operator==(const QuantBlock&) const = default;
};

// blocks[0] may be the unquantified (free) block; the rest alternate.
struct Formula {
  std::vector<QuantBlock> blocks;
  BoolExpr matrix;

  bool has_free() const { return !blocks.empty() && blocks[0].quant == Quant::Free; }
  std::size_t first_quantified() const { return has_free() ? 1 : 0; }
  std::size_t quantifier_count() const { return blocks.size() - first_quantified(); }
  bool is_bounded() const;
  bool operator==(const Formula&) const = default;
};

struct SentenceClass {
  std::size_t k = 0;
  std::vector<std::size_t> nbar;
  std::size_t a = 0;
};

Formula parse_formula(std::string_view text);
std::string print_formula(const Formula& f);
std::string print_expr(const BoolExpr& e, const std::vector<QuantBlock>& blocks);
std::string var_name(const VarRef& v, const std::vector<QuantBlock>& blocks);

SentenceClass sentence_class(const Formula& f);
std::size_t atom_count(const BoolExpr& e);

// Sum over constants c of (ceil(log2(|c|+1)) + 1), plus one per AST node.
std::size_t binary_length(const Formula& f);

// Sets every block's bound to [0, 2^ells[i]). Replacing an existing bound
// records a warning.
Formula bound_quantifiers(const Formula& f, const std::vector<std::size_t>& ells,
                          std::vector<std::string>* warnings = nullptr);

// Flips every quantifier and negates the matrix.
Formula negate(const Formula& f);

// Negation normal form with only Le/Eq atoms: strict and negated atoms are
// rewritten using integrality (not(a <= b) is b + 1 <= a).
BoolExpr to_nnf(const BoolExpr& e);
LinearAtom negate_atom_le(const LinearAtom& a);  // a must be Le

// Drops constant atoms / trivially true or false subterms.
BoolExpr simplify(const BoolExpr& e);

Int lhs_value(const LinearAtom& a, const std::vector<IntVec>& assignment);
bool eval_atom(const LinearAtom& a, const std::vector<IntVec>& assignment);
bool eval(const BoolExpr& e, const std::vector<IntVec>& assignment);

// Convenience constructors used by the transformation stages.
LinearAtom make_atom(std::map<VarRef, Int> coeffs, Rel rel, Int rhs);
// Shifts the matrix so that var is replaced by (var + offset) in every atom.
BoolExpr substitute_shift(const BoolExpr& e, const VarRef& v, const Int& offset);

// Doignon-Bell-Scarf splitting of one existential block: "exists x in box:
// rows" becomes the conjunction of "exists x in box: S" over all
// 2^n-row subsets S. The box is the search domain handed to each piece; it
// must be wide enough to contain a witness of every feasible subsystem.
std::vector<Formula> dbs_split(const std::vector<LinearAtom>& rows, std::size_t n, const Bound& box,
                               std::size_t subset_cap = 100000);

}  // namespace shortpa
