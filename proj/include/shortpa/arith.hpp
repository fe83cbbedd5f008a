#pragma once

// Exact integer / rational arithmetic and the small dense linear algebra
// shared by every module. Nothing here ever touches floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shortpa {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rational>;
using IntMatrix = std::vector<IntVec>;  // row-major
using RatMatrix = std::vector<RatVec>;

// Base class for all library errors; `kind` lets the CLI map errors to exit codes.
class Error : public std::runtime_error {
 public:
  enum class Kind { Input, Cap, Math, Verify };
  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

inline Error input_error(const std::string& m) { return Error(Error::Kind::Input, m); }
inline Error cap_error(const std::string& m) { return Error(Error::Kind::Cap, m); }
inline Error math_error(const std::string& m) { return Error(Error::Kind::Math, m); }

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int floor_of(const Rational& r);
Int ceil_of(const Rational& r);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
Int abs(const Int& a);
int sign(const Int& a);
int sign(const Rational& a);
Int pow2(std::size_t e);

// Number of binary digits of |x| (0 for x == 0).
std::size_t bit_length(const Int& x);

std::string to_string(const Int& x);
std::string to_string(const Rational& x);  // "p/q", or "p" when q == 1
Rational parse_rational(std::string_view s);  // accepts "p", "-p", "p/q"
Int parse_int(std::string_view s);

// Divides by the gcd of all entries (no-op on the zero vector).
IntVec primitive(IntVec v);
Int content(const IntVec& v);

// Clears denominators of a rational row, returning the integer row scaled by the
// positive lcm of all denominators.
IntVec clear_denominators(const RatVec& v);

RatVec to_rational(const IntVec& v);
IntMatrix transpose(const IntMatrix& m);
Int dot(const IntVec& a, const IntVec& b);
Rational dot(const RatVec& a, const RatVec& b);
bool is_zero(const IntVec& v);
bool lex_positive(const IntVec& v);

// Fraction-free determinant.
Int determinant(IntMatrix m);

// Rank and reduced row echelon form over Q.
std::size_t rank(const RatMatrix& m);
std::size_t rank(const IntMatrix& m);
RatMatrix rref(RatMatrix m, std::vector<std::size_t>* pivots = nullptr);

// Basis (as integer row vectors) of {x : m x = 0}.
IntMatrix nullspace(const IntMatrix& m, std::size_t ncols);

// Inverse of a nonsingular square matrix over Q.
RatMatrix inverse(const RatMatrix& m);

// General integer solution of E x = f: returns x0 and a matrix U whose columns
// form a lattice basis of {x in Z^n : E x = 0}, or nullopt if no integer
// solution exists.
struct IntegerSolution {
  IntVec particular;
  IntMatrix basis;  // n rows, k columns
};
std::optional<IntegerSolution> solve_integer(const IntMatrix& e, const IntVec& f, std::size_t n);

// Exact LLL reduction (delta = 3/4) of the rows of `basis`.
IntMatrix lll_reduce(IntMatrix basis);

}  // namespace shortpa
