#include "shortpa/arith.hpp"

#include <algorithm>
#include <utility>

namespace shortpa {

Int floor_div(const Int& a, const Int& b) {
  if (b == 0) throw math_error("division by zero");
  Int q = a / b;  // truncates toward zero
  Int r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

Int floor_of(const Rational& r) {
  return floor_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

Int ceil_of(const Rational& r) {
  return ceil_div(boost::multiprecision::numerator(r), boost::multiprecision::denominator(r));
}

Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

Int gcd(const Int& a, const Int& b) {
  Int x = abs(a), y = abs(b);
  while (y != 0) {
    Int t = x % y;
    x = std::move(y);
    y = std::move(t);
  }
  return x;
}

Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

int sign(const Int& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }
int sign(const Rational& a) { return a > 0 ? 1 : (a < 0 ? -1 : 0); }

Int pow2(std::size_t e) {
  Int r = 1;
  r <<= e;
  return r;
}

std::size_t bit_length(const Int& x) {
  if (x == 0) return 0;
  return boost::multiprecision::msb(abs(x)) + 1;
}

std::string to_string(const Int& x) { return x.str(); }

std::string to_string(const Rational& x) {
  const Int& d = boost::multiprecision::denominator(x);
  if (d == 1) return boost::multiprecision::numerator(x).str();
  return boost::multiprecision::numerator(x).str() + "/" + d.str();
}

Int parse_int(std::string_view s) {
  if (s.empty()) throw input_error("empty integer literal");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw input_error("bad integer literal '" + std::string(s) + "'");
  for (std::size_t j = i; j < s.size(); ++j)
    if (s[j] < '0' || s[j] > '9') throw input_error("bad integer literal '" + std::string(s) + "'");
  Int v(std::string(s.substr(i)));
  return s[0] == '-' ? Int(-v) : v;
}

Rational parse_rational(std::string_view s) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  Int p = parse_int(s.substr(0, slash));
  Int q = parse_int(s.substr(slash + 1));
  if (q == 0) throw input_error("zero denominator in '" + std::string(s) + "'");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  return Rational(p, q);
}

Int content(const IntVec& v) {
  Int g = 0;
  for (const auto& x : v) {
    g = gcd(g, x);
    if (g == 1) break;
  }
  return g;
}

IntVec primitive(IntVec v) {
  Int g = content(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

IntVec clear_denominators(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm(l, boost::multiprecision::denominator(x));
  IntVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(boost::multiprecision::numerator(x) * (l / boost::multiprecision::denominator(x)));
  return out;
}

RatVec to_rational(const IntVec& v) {
  RatVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.emplace_back(x);
  return r;
}

IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m[0].size(), IntVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

Rational dot(const RatVec& a, const RatVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

bool lex_positive(const IntVec& v) {
  for (const auto& x : v)
    if (x != 0) return x > 0;
  return false;
}

Int determinant(IntMatrix m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  int s = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      s = -s;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return s * m[n - 1][n - 1];
}

RatMatrix rref(RatMatrix m, std::vector<std::size_t>* pivots) {
  if (pivots) pivots->clear();
  if (m.empty()) return m;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return m;
}

std::size_t rank(const RatMatrix& m) {
  std::vector<std::size_t> piv;
  rref(m, &piv);
  return piv.size();
}

std::size_t rank(const IntMatrix& m) {
  RatMatrix r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(to_rational(row));
  return rank(r);
}

IntMatrix nullspace(const IntMatrix& m, std::size_t ncols) {
  RatMatrix r;
  for (const auto& row : m) r.push_back(to_rational(row));
  std::vector<std::size_t> piv;
  if (!r.empty()) r = rref(std::move(r), &piv);
  std::vector<bool> is_piv(ncols, false);
  for (auto p : piv) is_piv[p] = true;
  IntMatrix basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    RatVec v(ncols, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r[i][f];
    basis.push_back(primitive(clear_denominators(v)));
  }
  return basis;
}

RatMatrix inverse(const RatMatrix& m) {
  const std::size_t n = m.size();
  RatMatrix aug(n, RatVec(2 * n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<std::size_t> piv;
  aug = rref(std::move(aug), &piv);
  if (piv.size() < n || piv[n - 1] != n - 1) throw math_error("singular matrix");
  RatMatrix inv(n, RatVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  return inv;
}

std::optional<IntegerSolution> solve_integer(const IntMatrix& e, const IntVec& f, std::size_t n) {
  // Column-style Hermite reduction: E U = L with U unimodular.
  IntMatrix l = e;
  IntMatrix u(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  auto col_op = [&](std::size_t dst, std::size_t src, const Int& q) {  // col dst -= q * col src
    for (auto& row : l) row[dst] -= q * row[src];
    for (auto& row : u) row[dst] -= q * row[src];
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    for (auto& row : l) std::swap(row[a], row[b]);
    for (auto& row : u) std::swap(row[a], row[b]);
  };
  std::vector<std::optional<std::size_t>> pivot_of_row(e.size());
  std::size_t c = 0;
  for (std::size_t i = 0; i < e.size() && c < n; ++i) {
    while (true) {
      // pick the smallest nonzero |entry| in row i among columns >= c
      std::optional<std::size_t> best;
      for (std::size_t j = c; j < n; ++j)
        if (l[i][j] != 0 && (!best || abs(l[i][j]) < abs(l[i][*best]))) best = j;
      if (!best) break;
      if (*best != c) col_swap(*best, c);
      bool done = true;
      for (std::size_t j = c + 1; j < n; ++j) {
        if (l[i][j] == 0) continue;
        col_op(j, c, floor_div(l[i][j], l[i][c]));
        if (l[i][j] != 0) done = false;
      }
      if (done) break;
    }
    if (l[i][c] != 0) {
      pivot_of_row[i] = c;
      ++c;
    }
  }
  IntVec y(n, 0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    Int rest = f[i];
    std::size_t limit = pivot_of_row[i] ? *pivot_of_row[i] : c;
    for (std::size_t j = 0; j < limit; ++j) rest -= l[i][j] * y[j];
    if (pivot_of_row[i]) {
      std::size_t p = *pivot_of_row[i];
      if (rest % l[i][p] != 0) return std::nullopt;
      y[p] = rest / l[i][p];
    } else if (rest != 0) {
      return std::nullopt;
    }
  }
  IntegerSolution sol;
  sol.particular.assign(n, 0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < c; ++j) sol.particular[r] += u[r][j] * y[j];
  sol.basis.assign(n, IntVec{});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = c; j < n; ++j) sol.basis[r].push_back(u[r][j]);
  return sol;
}

IntMatrix lll_reduce(IntMatrix b) {
  const std::size_t n = b.size();
  if (n <= 1) return b;
  auto to_rat = [](const IntVec& v) { return to_rational(v); };
  std::vector<RatVec> bstar(n);
  RatMatrix mu(n, RatVec(n, 0));
  std::vector<Rational> norm(n);
  auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      bstar[i] = to_rat(b[i]);
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = norm[j] == 0 ? Rational(0) : dot(to_rat(b[i]), bstar[j]) / norm[j];
        for (std::size_t t = 0; t < bstar[i].size(); ++t) bstar[i][t] -= mu[i][j] * bstar[j][t];
      }
      norm[i] = dot(bstar[i], bstar[i]);
    }
  };
  gram_schmidt();
  const Rational delta(3, 4);
  std::size_t k = 1;
  while (k < n) {
    for (std::size_t j = k; j-- > 0;) {
      Int q = floor_of(mu[k][j] + Rational(1, 2));
      if (q != 0) {
        for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= q * b[j][t];
        gram_schmidt();
      }
    }
    if (norm[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norm[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

}  // namespace shortpa
