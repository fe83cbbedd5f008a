#pragma once

// Exact rational polyhedra in small fixed dimension: H/V conversion by double
// description, emptiness, projection, and lattice-point scanning.

#include "shortpa/arith.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace shortpa {

// {x : A x <= b}, with row i strict (<) when strict[i].
struct HPolyhedron {
  std::size_t dim = 0;
  RatMatrix A;
  RatVec b;
  std::vector<bool> strict;

  HPolyhedron() = default;
  explicit HPolyhedron(std::size_t n) : dim(n) {}

  std::size_t rows() const { return A.size(); }
  void add_row(RatVec a, Rational rhs, bool is_strict = false);
  void add_row(const IntVec& a, const Int& rhs, bool is_strict = false);
  // Both a.x <= rhs and -a.x <= -rhs.
  void add_equality(const IntVec& a, const Int& rhs);
  // lo <= x_j <= hi for every coordinate.
  void add_box(const Int& lo, const Int& hi);
};

struct VPolytope {
  std::size_t dim = 0;
  std::vector<RatVec> vertices;
};

// Real interval with rational endpoints; either side may be open or infinite.
struct Interval {
  std::optional<Rational> lo, hi;  // nullopt = infinite
  bool lo_open = false;
  bool hi_open = false;

  static Interval closed(const Int& a, const Int& b) { return Interval{Rational(a), Rational(b), false, false}; }
  // [a, b) as used for the bit-bounded ranges.
  static Interval half_open(const Rational& a, const Rational& b) { return Interval{a, b, false, true}; }
  bool contains(const Rational& z) const;
  // Smallest / largest integer inside, if bounded on that side.
  std::optional<Int> first_integer() const;
  std::optional<Int> last_integer() const;
  bool has_integers() const;
  bool operator==(const Interval&) const = default;
};

// Largest dimension accepted by vertex/facet conversion (default 6).
std::size_t dimension_cap();
void set_dimension_cap(std::size_t n);

bool contains(const HPolyhedron& p, const RatVec& x);
bool contains(const HPolyhedron& p, const IntVec& x);

bool is_empty(const HPolyhedron& p);
// The two exact routes behind is_empty, exposed for cross-checking.
bool is_empty_fm(const HPolyhedron& p);
bool is_empty_lp(const HPolyhedron& p);

// True when the recession cone {d : A d <= 0} is {0}.
bool is_bounded(const HPolyhedron& p);

struct LpResult {
  enum class Status { Infeasible, Unbounded, Optimal };
  Status status = Status::Infeasible;
  Rational value;
  RatVec x;
};
// Maximises c.x over the closure of p (strict rows read as non-strict).
LpResult lp_maximize(const HPolyhedron& p, const RatVec& c);

// Fourier-Motzkin projection onto the first `keep` coordinates. Equality
// pairs are used for substitution before pairwise combination.
HPolyhedron fm_project(const HPolyhedron& p, std::size_t keep);

VPolytope vertices_from_facets(const HPolyhedron& p);
HPolyhedron facets_from_vertices(const VPolytope& v);

// Extreme rays (primitive integer vectors) of the pointed cone {y : H y >= 0}.
IntMatrix extreme_rays(const IntMatrix& h);

// Integer points of a bounded polyhedron, sorted lexicographically.
std::vector<IntVec> enumerate_lattice_points(const HPolyhedron& p, std::size_t cap = 1'000'000);
std::optional<IntVec> integer_lexmin(const HPolyhedron& p);

// Depth-first scan of P cap Z^n along coordinates 0..n-1, driven by
// precomputed integer-tightened projections so every level has exact
// rational bounds. Coordinates may be fixed from the front (`prefix`).
class LatticeScanner {
 public:
  explicit LatticeScanner(const HPolyhedron& p);
  std::size_t dim() const { return dim_; }
  // First point in lexicographic order extending the prefix.
  std::optional<IntVec> first(const IntVec& prefix = {}) const;
  // Visits points extending prefix in lex order until f returns false.
  void each(const IntVec& prefix, const std::function<bool(const IntVec&)>& f) const;
  // Range of coordinate prefix.size() given the prefix (nullopt if empty or unbounded).
  std::optional<std::pair<Int, Int>> range(const IntVec& prefix) const;

 private:
  struct Row {
    IntVec a;  // length dim_
    Int b;
  };
  std::size_t dim_;
  std::vector<std::vector<Row>> proj_;  // proj_[j]: rows over coordinates 0..j
  std::vector<std::pair<Int, Int>> box_;
  std::vector<bool> exact_;  // exact_[j]: proj_[j] kept every cutting row
  bool empty_ = false;

  bool bounds(std::size_t j, const IntVec& x, Int& lo, Int& hi, bool& has_lo, bool& has_hi) const;
  bool lp_bounds(std::size_t j, const IntVec& x, Int& lo, Int& hi) const;
  bool dfs(std::size_t j, IntVec& x, const std::function<bool(const IntVec&)>& f) const;
};

}  // namespace shortpa
