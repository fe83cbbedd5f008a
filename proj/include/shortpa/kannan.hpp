#pragma once

// Parametric lattice feasibility on a one-dimensional parameter line:
// K_z = {x : A x <= alpha z + nu}. A partition of the z-range into pieces,
// each carrying test pairs whose floor candidates witness feasibility.

#include "shortpa/formula.hpp"
#include "shortpa/gf.hpp"
#include "shortpa/polyhedra.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace shortpa {

struct ParametricSystem {
  IntMatrix A;  // m x n
  IntVec alpha, nu;
  Interval z_range;

  std::size_t m() const { return A.size(); }
  std::size_t n() const { return A.empty() ? 0 : A[0].size(); }
  bool member(const IntVec& x, const Int& z) const;
  // Integer range of z; throws when infinite.
  std::pair<Int, Int> integer_range() const;
  // Dimension checks and boundedness of K_z.
  void validate() const;
};

// Candidate Tp(floor(T(z))): T(z)_i = (p_i z + q_i) / d_i, Tp(y) = M y + c.
struct TestPair {
  IntVec p, q, d;
  IntMatrix M;
  IntVec c;

  static TestPair constant(const IntVec& x);
  static TestPair floors(IntVec p, IntVec q, IntVec d);  // Tp = identity
  IntVec candidate(const Int& z) const;
  bool is_constant() const;
  bool operator==(const TestPair&) const = default;
};

struct PartitionPiece {
  Interval interval;  // [a, b) with integer endpoints
  std::vector<TestPair> tests;
};

struct KPTResult {
  std::vector<PartitionPiece> pieces;
};

enum class Provider { Enumerative, Merged };

struct KptOptions {
  Int max_denominator = 12;
  std::size_t piece_cap = 1'000'000;
  std::size_t test_cap = 64;
};

// Lattice witness of K_z by a depth-first scan over (z, x).
class ParametricScanner {
 public:
  explicit ParametricScanner(const ParametricSystem& s);
  std::optional<IntVec> witness(const Int& z) const;

 private:
  std::size_t n_;
  LatticeScanner scan_;
};

KPTResult kpt_partition_1d(const ParametricSystem& s, Provider provider, const KptOptions& opt = {});

struct KptCheck {
  bool ok = true;
  std::optional<Int> witness;  // first violating z
  std::string reason;
};
KptCheck verify_kpt(const KPTResult& r, const ParametricSystem& s);

enum class Polarity { Exists, Forall };

// "Tp(floor(T(b))) in K_b" written with fresh variables t = floor(T(b)):
// exists-form  t <= T, t > T - 1, rows;   forall-form  t > T or t <= T - 1 or rows.
struct FloorFragment {
  struct Row {  // lhs_const + coeffs . t  <=  rhs_const + rhs_slope * b
    RatVec coeffs;
    Rational lhs_const;
    Rational rhs_const;
    Rational rhs_slope;
  };
  Polarity polarity = Polarity::Exists;
  std::string param = "z";
  std::string var = "t";
  IntVec p, q, d;  // t_i = floor((p_i b + q_i) / d_i)
  std::vector<Row> rows;

  std::size_t dim() const { return p.size(); }
  std::vector<std::string> lines() const;
  std::string print() const;
  // Free parameter block over `param_range`; the t block gets a range wide
  // enough to contain the floors.
  Formula to_formula(const Bound& param_range) const;
};

FloorFragment floor_condition_to_formula(const TestPair& tp, const ParametricSystem& s, Polarity polarity);

// Gamma_i: free z over the piece, forall u (one block of |tests| * n
// coordinates, constant tests inlined).
Formula piece_condition(const PartitionPiece& piece, const ParametricSystem& s);

// {z in piece : K_z has an integer point}, from the test pairs.
APSet piece_feasible_set(const PartitionPiece& piece, const ParametricSystem& s, const Int& period_cap = 1'000'000);

// forall z in range, exists x in K_z.
bool base_case_decide(const ParametricSystem& s, Provider provider = Provider::Enumerative);

}  // namespace shortpa
