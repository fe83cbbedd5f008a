#include "shortpa/gf.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace shortpa {

namespace {

IntVec add(const IntVec& x, const IntVec& y) {
  IntVec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

IntVec scaled(const IntVec& x, const Int& k) {
  IntVec r(x);
  for (auto& v : r) v *= k;
  return r;
}

IntVec apply(const IntMatrix& e, const IntVec& x) {
  IntVec r(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) r[i] = dot(e[i], x);
  return r;
}

std::size_t clog2_plus1(const Int& x) {
  Int v = abs(x);
  if (v == 0) return 1;
  return bit_length(v - 1) + 1;
}

void check_term(const GFTerm& t, std::size_t n) {
  if (t.a.size() != n) throw input_error("GF exponent has wrong length");
  for (const auto& b : t.bs) {
    if (b.size() != n) throw input_error("GF denominator has wrong length");
    if (is_zero(b)) throw input_error("GF denominator exponent is zero");
  }
}

// Binomial coefficient C(e, i) for an arbitrary integer e.
Rational binom(const Int& e, std::size_t i) {
  Rational r = 1;
  for (std::size_t k = 0; k < i; ++k) r = r * Rational(e - Int(k)) / Rational(Int(k + 1));
  return r;
}

using Ser = std::vector<Rational>;

Ser binom_series(const Int& e, std::size_t order) {
  Ser s(order + 1);
  Rational r = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    s[k] = r;
    r = r * Rational(e - Int(k)) / Rational(Int(k + 1));
  }
  return s;
}

Ser mul(const Ser& x, const Ser& y, std::size_t order) {
  Ser r(order + 1);
  for (std::size_t i = 0; i < x.size() && i <= order; ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size() && i + j <= order; ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

Ser inverse_series(const Ser& x, std::size_t order) {
  Ser r(order + 1);
  r[0] = Rational(1) / x[0];
  for (std::size_t k = 1; k <= order; ++k) {
    Rational s = 0;
    for (std::size_t i = 1; i <= k && i < x.size(); ++i) s += x[i] * r[k - i];
    r[k] = -s / x[0];
  }
  return r;
}

// 1 / (1 - (1+s)^m) = s^{-1} * result, m != 0.
Ser pole_factor(const Int& m, std::size_t order) {
  Ser g(order + 1);
  for (std::size_t i = 0; i <= order; ++i) g[i] = binom(m, i + 1);
  Ser inv = inverse_series(g, order);
  for (auto& v : inv) v = -v;
  return inv;
}

// Small integer vector w with w.b != 0 for every b in `avoid`.
IntVec generic_weights(std::size_t n, const std::vector<IntVec>& avoid) {
  std::mt19937_64 rng(0x5eedc0de);
  for (long radius = 1;; radius *= 2) {
    std::uniform_int_distribution<long> d(-radius, radius);
    for (int attempt = 0; attempt < 64; ++attempt) {
      IntVec w(n);
      for (auto& v : w) v = d(rng);
      bool ok = true;
      for (const auto& b : avoid)
        if (dot(w, b) == 0) {
          ok = false;
          break;
        }
      if (ok) return w;
    }
    if (radius > (1L << 40)) throw math_error("no generic weight vector found");
  }
}

// Extended gcd: returns g and x with a x = g (mod b).
Int mod_inverse(const Int& a, const Int& m) {
  Int old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    Int q = old_r / r;
    Int t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  Int x = old_s % m;
  if (x < 0) x += m;
  return x;
}

bool intersect(const Progression& p, const Progression& q) {
  Int lp = p.first + p.step * (p.count - 1), lq = q.first + q.step * (q.count - 1);
  Int lo = std::max(p.first, q.first), hi = std::min(lp, lq);
  if (lo > hi) return false;
  Int g = gcd(p.step, q.step);
  Int diff = q.first - p.first;
  if (diff % g != 0) return false;
  Int m = q.step / g;
  Int k = m == 1 ? Int(0) : ((diff / g) % m + m) % m * mod_inverse(p.step / g, m) % m;
  Int x = p.first + p.step * k;
  Int l = p.step * m;
  Int y = x + l * ceil_div(lo - x, l);
  return y <= hi;
}

}  // namespace

// ---------------------------------------------------------------- APSet

Int APSet::cardinality() const {
  Int n = 0;
  for (const auto& p : progressions) n += p.count;
  return n;
}

bool APSet::contains(const Int& z) const {
  for (const auto& p : progressions) {
    if (z < p.first) continue;
    Int d = z - p.first;
    if (d % p.step == 0 && d / p.step < p.count) return true;
  }
  return false;
}

std::vector<Int> APSet::elements() const {
  if (cardinality() > 10'000'000) throw cap_error("APSet too large to list");
  std::vector<Int> out;
  for (const auto& p : progressions)
    for (Int i = 0; i < p.count; ++i) out.push_back(p.first + p.step * i);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

APSet apset_from_values(const Interval& host, std::vector<Int> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  APSet s{host, {}};
  std::size_t i = 0;
  while (i < values.size()) {
    if (i + 1 == values.size()) {
      s.progressions.push_back({values[i], 1, 1});
      break;
    }
    Int step = values[i + 1] - values[i];
    std::size_t j = i + 1;
    while (j + 1 < values.size() && values[j + 1] - values[j] == step) ++j;
    s.progressions.push_back({values[i], step, Int(j - i + 1)});
    i = j + 1;
  }
  return s;
}

APSet canonicalize(const APSet& s) {
  APSet r{s.host, {}};
  for (const auto& p : s.progressions) {
    if (p.step < 1) throw input_error("progression step must be positive");
    if (p.count >= 1) r.progressions.push_back(p.count == 1 ? Progression{p.first, 1, 1} : p);
  }
  bool disjoint = true;
  for (std::size_t i = 0; i < r.progressions.size() && disjoint; ++i)
    for (std::size_t j = i + 1; j < r.progressions.size(); ++j)
      if (intersect(r.progressions[i], r.progressions[j])) {
        disjoint = false;
        break;
      }
  if (!disjoint) {
    if (r.cardinality() > 2'000'000) throw cap_error("overlapping progressions too large to merge");
    return apset_from_values(s.host, r.elements());
  }
  std::sort(r.progressions.begin(), r.progressions.end(), [](const Progression& a, const Progression& b) {
    return std::tie(a.first, a.step, a.count) < std::tie(b.first, b.step, b.count);
  });
  return r;
}

// ---------------------------------------------------------------- basics

std::size_t gf_length(const ShortGF& g) {
  std::size_t n = 0;
  for (const auto& t : g.terms) {
    n += clog2_plus1(numerator(t.c) * denominator(t.c));
    for (const auto& x : t.a) n += clog2_plus1(x);
    for (const auto& b : t.bs)
      for (const auto& x : b) n += clog2_plus1(x);
  }
  return n;
}

ShortGF gf_monomial(const IntVec& a, const Rational& c) {
  ShortGF g(a.size());
  if (c != 0) g.terms.push_back({c, a, {}});
  return g;
}

ShortGF gf_add(const ShortGF& a, const ShortGF& b) {
  if (a.nvars != b.nvars) throw input_error("GF dimension mismatch");
  ShortGF r = a;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  return r;
}

ShortGF gf_scale(const Rational& c, const ShortGF& a) {
  ShortGF r(a.nvars);
  if (c == 0) return r;
  for (auto t : a.terms) {
    t.c *= c;
    r.terms.push_back(std::move(t));
  }
  return r;
}

ShortGF gf_shift(const ShortGF& g, const IntVec& d) {
  if (d.size() != g.nvars) throw input_error("GF dimension mismatch");
  ShortGF r = g;
  for (auto& t : r.terms) t.a = add(t.a, d);
  return r;
}

ShortGF gf_mul(const ShortGF& x, const ShortGF& y) {
  if (x.nvars != y.nvars) throw input_error("GF dimension mismatch");
  ShortGF r(x.nvars);
  for (const auto& s : x.terms)
    for (const auto& t : y.terms) {
      GFTerm u{s.c * t.c, add(s.a, t.a), s.bs};
      u.bs.insert(u.bs.end(), t.bs.begin(), t.bs.end());
      r.terms.push_back(std::move(u));
    }
  return r;
}

ShortGF box_gf(const IntVec& lo, const IntVec& hi) {
  std::size_t n = lo.size();
  if (hi.size() != n) throw input_error("box bounds differ in length");
  ShortGF g(n);
  for (std::size_t j = 0; j < n; ++j)
    if (lo[j] > hi[j]) return g;
  std::vector<IntVec> bs;
  for (std::size_t j = 0; j < n; ++j) {
    IntVec e(n, 0);
    e[j] = 1;
    bs.push_back(e);
  }
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    IntVec a(n);
    int sgn = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1) {
        a[j] = hi[j] + 1;
        sgn = -sgn;
      } else {
        a[j] = lo[j];
      }
    }
    g.terms.push_back({Rational(sgn), a, bs});
  }
  return g;
}

ShortGF simplify(const ShortGF& g) {
  std::map<std::pair<IntVec, std::vector<IntVec>>, Rational> acc;
  for (const auto& t : g.terms) {
    auto bs = t.bs;
    std::sort(bs.begin(), bs.end());
    acc[{t.a, bs}] += t.c;
  }
  ShortGF r(g.nvars);
  for (auto& [k, c] : acc)
    if (c != 0) r.terms.push_back({c, k.first, k.second});
  return r;
}

ShortGF orient(const ShortGF& g) {
  ShortGF r(g.nvars);
  for (const auto& t0 : g.terms) {
    check_term(t0, g.nvars);
    GFTerm t = t0;
    for (auto& b : t.bs) {
      if (lex_positive(b)) continue;
      t.c = -t.c;
      for (std::size_t j = 0; j < b.size(); ++j) {
        t.a[j] -= b[j];
        b[j] = -b[j];
      }
    }
    r.terms.push_back(std::move(t));
  }
  return r;
}

ShortGF sorted(const ShortGF& g) {
  ShortGF r = g;
  for (auto& t : r.terms) std::sort(t.bs.begin(), t.bs.end());
  std::sort(r.terms.begin(), r.terms.end(), [](const GFTerm& x, const GFTerm& y) {
    return std::tie(x.a, x.bs, x.c) < std::tie(y.a, y.bs, y.c);
  });
  return r;
}

// ---------------------------------------------------------------- expansion and counting

Expansion expand(const ShortGF& g, const IntVec& lo, const IntVec& hi, std::size_t cap) {
  std::size_t n = g.nvars;
  if (lo.size() != n || hi.size() != n) throw input_error("expansion box has wrong dimension");
  Expansion out;
  std::size_t visited = 0;
  for (const auto& t : orient(g).terms) {
    std::size_t p = t.bs.size();
    if (p == 0) {
      bool in = true;
      for (std::size_t j = 0; j < n; ++j) in = in && lo[j] <= t.a[j] && t.a[j] <= hi[j];
      if (in) out[t.a] += t.c;
      continue;
    }
    HPolyhedron z(p);
    for (std::size_t i = 0; i < p; ++i) {
      IntVec row(p, 0);
      row[i] = -1;
      z.add_row(row, Int(0));
    }
    for (std::size_t j = 0; j < n; ++j) {
      IntVec row(p), neg(p);
      for (std::size_t i = 0; i < p; ++i) {
        row[i] = t.bs[i][j];
        neg[i] = -t.bs[i][j];
      }
      z.add_row(row, hi[j] - t.a[j]);
      z.add_row(neg, t.a[j] - lo[j]);
    }
    LatticeScanner sc(z);
    sc.each({}, [&](const IntVec& zeta) {
      if (++visited > cap) throw cap_error("expansion exceeds point cap");
      IntVec x = t.a;
      for (std::size_t i = 0; i < p; ++i)
        if (zeta[i] != 0)
          for (std::size_t j = 0; j < n; ++j) x[j] += zeta[i] * t.bs[i][j];
      out[x] += t.c;
      return true;
    });
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Rational count_rational(const ShortGF& g) {
  std::vector<IntVec> dens;
  for (const auto& t : g.terms) {
    check_term(t, g.nvars);
    dens.insert(dens.end(), t.bs.begin(), t.bs.end());
  }
  IntVec w = generic_weights(g.nvars, dens);
  std::map<long, Rational> acc;
  for (const auto& t : g.terms) {
    std::size_t p = t.bs.size();
    Ser s = binom_series(dot(w, t.a), p);
    for (const auto& b : t.bs) s = mul(s, pole_factor(dot(w, b), p), p);
    for (std::size_t j = 0; j <= p; ++j) acc[long(j) - long(p)] += t.c * s[j];
  }
  for (const auto& [e, v] : acc)
    if (e < 0 && v != 0) throw math_error("pole at t = 1: the GF does not represent a finite set");
  return acc[0];
}

Int count(const ShortGF& g) {
  Rational r = count_rational(g);
  if (denominator(r) != 1) throw math_error("GF value at t = 1 is not an integer: " + to_string(r));
  return numerator(r);
}

// ---------------------------------------------------------------- substitution

ShortGF monomial_substitution(const ShortGF& g, const IntMatrix& e) {
  for (const auto& row : e)
    if (row.size() != g.nvars) throw input_error("substitution matrix has wrong width");
  ShortGF r(e.size());
  for (const auto& t : g.terms) {
    check_term(t, g.nvars);
    GFTerm u{t.c, apply(e, t.a), {}};
    for (const auto& b : t.bs) {
      IntVec eb = apply(e, b);
      if (is_zero(eb)) throw math_error("monomial substitution sends a denominator exponent to 0");
      u.bs.push_back(std::move(eb));
    }
    r.terms.push_back(std::move(u));
  }
  return r;
}

namespace {

// Series in s whose coefficients are short GFs; index = power of s.
using GSer = std::vector<std::vector<GFTerm>>;

std::vector<GFTerm> merge(std::size_t n, std::vector<GFTerm> v) {
  ShortGF g(n);
  g.terms = std::move(v);
  return simplify(g).terms;
}

GSer gmul(std::size_t n, const GSer& x, const GSer& y, std::size_t order) {
  GSer r(order + 1);
  for (std::size_t i = 0; i < x.size() && i <= order; ++i)
    for (std::size_t j = 0; j < y.size() && i + j <= order; ++j)
      for (const auto& s : x[i])
        for (const auto& t : y[j]) {
          GFTerm u{s.c * t.c, add(s.a, t.a), s.bs};
          u.bs.insert(u.bs.end(), t.bs.begin(), t.bs.end());
          r[i + j].push_back(std::move(u));
        }
  for (auto& v : r) v = merge(n, std::move(v));
  return r;
}

// 1/(1 - t^c (1+s)^m) as a series in s: sum_j s^j sum_r [s^j]h^r t^{rc}/(1-t^c)^{r+1},
// with h = (1+s)^m - 1.
GSer shifted_geometric(const IntVec& c, const Int& m, std::size_t order) {
  Ser h = binom_series(m, order);
  h[0] = 0;
  GSer r(order + 1);
  Ser hr(order + 1, 0);
  hr[0] = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    std::vector<IntVec> bs(k + 1, c);
    for (std::size_t j = 0; j <= order; ++j)
      if (hr[j] != 0) r[j].push_back({hr[j], scaled(c, Int(k)), bs});
    hr = mul(hr, h, order);
  }
  return r;
}

}  // namespace

ShortGF monomial_substitution_limit(const ShortGF& g, const IntMatrix& e) {
  for (const auto& row : e)
    if (row.size() != g.nvars) throw input_error("substitution matrix has wrong width");
  std::size_t m = e.size();
  std::vector<IntVec> degenerate;
  for (const auto& t : g.terms) {
    check_term(t, g.nvars);
    for (const auto& b : t.bs)
      if (is_zero(apply(e, b))) degenerate.push_back(b);
  }
  if (degenerate.empty()) return monomial_substitution(g, e);
  IntVec lambda = generic_weights(g.nvars, degenerate);

  ShortGF r(m);
  for (const auto& t : g.terms) {
    std::size_t poles = 0;
    for (const auto& b : t.bs)
      if (is_zero(apply(e, b))) ++poles;
    if (poles == 0) {
      GFTerm u{t.c, apply(e, t.a), {}};
      for (const auto& b : t.bs) u.bs.push_back(apply(e, b));
      r.terms.push_back(std::move(u));
      continue;
    }
    std::size_t order = poles;
    // Scalar part: numerator (1+s)^{lambda.a} times the pole factors.
    Ser scalar = binom_series(dot(lambda, t.a), order);
    std::vector<IntVec> fixed;
    GSer series(order + 1);
    series[0].push_back({Rational(1), IntVec(m, 0), {}});
    for (const auto& b : t.bs) {
      IntVec eb = apply(e, b);
      Int mb = dot(lambda, b);
      if (is_zero(eb)) {
        scalar = mul(scalar, pole_factor(mb, order), order);
      } else if (mb == 0) {
        fixed.push_back(eb);
      } else {
        series = gmul(m, series, shifted_geometric(eb, mb, order), order);
      }
    }
    // Constant term: s^{-poles} * scalar * series, take s^0.
    IntVec ea = apply(e, t.a);
    for (std::size_t i = 0; i <= order; ++i) {
      if (scalar[i] == 0) continue;
      for (const auto& piece : series[order - i]) {
        GFTerm u{t.c * scalar[i] * piece.c, add(ea, piece.a), piece.bs};
        u.bs.insert(u.bs.end(), fixed.begin(), fixed.end());
        r.terms.push_back(std::move(u));
      }
    }
  }
  return simplify(r);
}

ShortGF pack(const ShortGF& f, std::size_t ell) {
  IntMatrix e(1, IntVec(f.nvars));
  for (std::size_t j = 0; j < f.nvars; ++j) e[0][j] = pow2(ell * j);
  try {
    return monomial_substitution(f, e);
  } catch (const Error& err) {
    if (err.kind() != Error::Kind::Math) throw;
    return monomial_substitution_limit(f, e);
  }
}

ShortGF tau_hadamard(const ShortGF& a0, const ShortGF& b0, const TauMap& tau) {
  if (b0.nvars != 1) throw input_error("tau-Hadamard: second factor must be univariate");
  if (tau.weights.size() != a0.nvars) throw input_error("tau-Hadamard: weight vector has wrong length");
  std::size_t n = a0.nvars;
  ShortGF a = orient(a0), b = orient(b0);
  ShortGF out(n);
  for (const auto& s : a.terms) {
    std::size_t p = s.bs.size();
    for (const auto& t : b.terms) {
      std::size_t q = t.bs.size();
      // P = {(zeta, xi) >= 0 : tau(a + sum zeta_i b_i) = c + sum xi_j d_j}.
      HPolyhedron poly(p + q);
      IntVec row(p + q);
      for (std::size_t i = 0; i < p; ++i) row[i] = tau.apply(s.bs[i]);
      for (std::size_t j = 0; j < q; ++j) row[p + j] = -t.bs[j][0];
      poly.add_equality(row, t.a[0] - tau.apply(s.a));
      for (std::size_t i = 0; i < p + q; ++i) {
        IntVec r(p + q, 0);
        r[i] = -1;
        poly.add_row(r, Int(0));
      }
      ShortGF d;
      if (p + q == 0) {
        d = ShortGF(0);
        if (tau.apply(s.a) == t.a[0]) d.terms.push_back({Rational(1), {}, {}});
      } else {
        d = polyhedron_gf(poly);
      }
      IntMatrix e(n, IntVec(p + q, 0));
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = 0; k < n; ++k) e[k][i] = s.bs[i][k];
      ShortGF sub = monomial_substitution_limit(d, e);
      out = gf_add(out, gf_scale(s.c * t.c, gf_shift(sub, s.a)));
    }
  }
  return simplify(out);
}

ShortGF unpack(const ShortGF& g, std::size_t n, std::size_t ell) {
  if (g.nvars != 1) throw input_error("unpack expects a univariate GF");
  Int big = pow2(ell);
  ShortGF box = box_gf(IntVec(n, 0), IntVec(n, big - 1));
  TauMap tau{IntVec(n)};
  for (std::size_t j = 0; j < n; ++j) tau.weights[j] = pow2(ell * j);
  return tau_hadamard(box, g, tau);
}

ShortGF apset_to_gf(const APSet& s) {
  ShortGF g(1);
  for (const auto& p : s.progressions) {
    g.terms.push_back({Rational(1), {p.first}, {{p.step}}});
    g.terms.push_back({Rational(-1), {p.first + p.step * p.count}, {{p.step}}});
  }
  return g;
}

}  // namespace shortpa
