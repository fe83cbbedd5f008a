#include "shortpa/cones.hpp"

#include "shortpa/gf.hpp"
#include "shortpa/polyhedra.hpp"

#include <algorithm>
#include <set>

namespace shortpa {

namespace {

RatMatrix to_rat(const IntMatrix& m) {
  RatMatrix r;
  for (const auto& row : m) r.push_back(to_rational(row));
  return r;
}

// Facet normals (full coordinates) of the pointed cone spanned by `gens`,
// taken inside its linear span.
IntMatrix cone_facets(const IntMatrix& gens) {
  std::vector<std::size_t> pivots;
  rref(to_rat(gens), &pivots);
  IntMatrix h;
  for (const auto& g : gens) {
    IntVec row;
    for (auto j : pivots) row.push_back(g[j]);
    h.push_back(row);
  }
  IntMatrix out;
  for (const auto& y : extreme_rays(h)) {
    IntVec a(gens[0].size(), 0);
    for (std::size_t k = 0; k < pivots.size(); ++k) a[pivots[k]] = y[k];
    out.push_back(a);
  }
  return out;
}

void pull(const IntMatrix& gens, const std::vector<std::size_t>& idx, std::vector<std::vector<std::size_t>>& out) {
  IntMatrix sub;
  for (auto i : idx) sub.push_back(gens[i]);
  std::size_t d = idx.empty() ? 0 : rank(sub);
  if (idx.size() == d) {
    out.push_back(idx);
    return;
  }
  std::size_t g0 = idx[0];
  for (const auto& a : cone_facets(sub)) {
    if (dot(a, gens[g0]) == 0) continue;
    std::vector<std::size_t> face;
    for (auto i : idx)
      if (dot(a, gens[i]) == 0) face.push_back(i);
    std::vector<std::vector<std::size_t>> cells;
    pull(gens, face, cells);
    for (auto& c : cells) {
      c.insert(c.begin(), g0);
      out.push_back(std::move(c));
    }
  }
}

void decompose(const IntMatrix& w, int sgn, std::vector<SignedCone>& out) {
  const std::size_t k = w.size();
  Int det = abs(determinant(w));
  if (det == 0) throw math_error("unimodular_decomposition: singular cone");
  if (det == 1) {
    out.push_back({sgn, w});
    return;
  }
  // beta-lattice {W^{-T} z : z integral} has basis rows of W^{-1}; scale by det.
  RatMatrix inv = inverse(to_rat(w));
  IntMatrix basis(k, IntVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) basis[i][j] = numerator(inv[i][j] * Rational(det));
  IntMatrix red = lll_reduce(basis);

  IntVec best;
  Int best_norm = det;
  for (long radius = 1; radius <= 3 && best.empty(); ++radius) {
    std::vector<long> coef(k, -radius);
    while (true) {
      IntVec v(k, 0);
      for (std::size_t i = 0; i < k; ++i)
        if (coef[i] != 0)
          for (std::size_t j = 0; j < k; ++j) v[j] += Int(coef[i]) * red[i][j];
      if (!is_zero(v)) {
        Int norm = 0;
        for (const auto& x : v) norm = std::max(norm, abs(x));
        if (norm < best_norm) {
          best_norm = norm;
          best = v;
        }
      }
      std::size_t i = 0;
      while (i < k && coef[i] == radius) coef[i++] = -radius;
      if (i == k) break;
      ++coef[i];
    }
  }
  if (best.empty()) throw math_error("unimodular_decomposition: no short lattice vector found");

  bool any_positive = false;
  for (const auto& x : best) any_positive = any_positive || x > 0;
  if (!any_positive)
    for (auto& x : best) x = -x;
  IntVec z(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) z[j] += best[i] * w[i][j];
  for (auto& x : z) x /= det;
  z = primitive(z);
  for (std::size_t i = 0; i < k; ++i) {
    if (best[i] == 0) continue;
    IntMatrix wi = w;
    wi[i] = z;
    decompose(wi, best[i] > 0 ? sgn : -sgn, out);
  }
}

struct Row {
  IntVec a;
  Int b;
};

// Integer-tightened primitive row; returns false when the row is 0 <= negative.
bool tighten(const RatVec& a, const Rational& b, bool strict, std::vector<Row>& out) {
  Int l = 1;
  for (const auto& x : a) l = lcm(l, denominator(x));
  IntVec ai(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) ai[j] = numerator(a[j] * Rational(l));
  Rational bi = b * Rational(l);
  Int g = content(ai);
  if (g == 0) return strict ? bi > 0 : bi >= 0;
  for (auto& x : ai) x /= g;
  bi /= Rational(g);
  out.push_back({ai, strict ? ceil_of(bi) - 1 : floor_of(bi)});
  return true;
}

HPolyhedron to_poly(std::size_t n, const std::vector<Row>& rows) {
  HPolyhedron p(n);
  for (const auto& r : rows) p.add_row(r.a, r.b);
  return p;
}

// Brion: sum of vertex tangent cone GFs of the full-dimensional pointed
// polyhedron {y : a.y <= b}.
ShortGF brion(std::size_t k, const std::vector<Row>& rows) {
  IntMatrix h;
  for (const auto& r : rows) {
    IntVec row(k + 1);
    for (std::size_t j = 0; j < k; ++j) row[j] = -r.a[j];
    row[k] = r.b;
    h.push_back(row);
  }
  IntVec lam(k + 1, 0);
  lam[k] = 1;
  h.push_back(lam);
  ShortGF out(k);
  for (const auto& ray : extreme_rays(h)) {
    if (ray[k] == 0) continue;
    RatVec v(k);
    for (std::size_t j = 0; j < k; ++j) v[j] = Rational(ray[j], ray[k]);
    IntMatrix gens;
    std::set<IntVec> seen;
    for (const auto& r : rows) {
      if (dot(to_rational(r.a), v) != Rational(r.b)) continue;
      IntVec g = r.a;
      for (auto& x : g) x = -x;
      if (seen.insert(g).second) gens.push_back(g);
    }
    for (const auto& cell : triangulate_cone(gens)) {
      for (const auto& sc : unimodular_decomposition(cell)) {
        RatMatrix u = inverse(to_rat(sc.gens));
        IntVec mu(k);
        for (std::size_t i = 0; i < k; ++i) mu[i] = ceil_of(dot(to_rational(sc.gens[i]), v));
        GFTerm t{Rational(sc.sign), IntVec(k, 0), {}};
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) t.a[i] += numerator(u[i][j]) * mu[j];
        for (std::size_t j = 0; j < k; ++j) {
          IntVec col(k);
          for (std::size_t i = 0; i < k; ++i) col[i] = numerator(u[i][j]);
          t.bs.push_back(col);
        }
        out.terms.push_back(std::move(t));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<IntMatrix> triangulate_cone(const IntMatrix& gens0) {
  IntMatrix gens;
  std::set<IntVec> seen;
  for (const auto& g : gens0) {
    if (is_zero(g)) continue;
    IntVec p = primitive(g);
    if (seen.insert(p).second) gens.push_back(p);
  }
  if (gens.empty()) return {};
  std::vector<std::size_t> idx(gens.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::vector<std::size_t>> cells;
  pull(gens, idx, cells);
  std::vector<IntMatrix> out;
  for (const auto& c : cells) {
    IntMatrix m;
    for (auto i : c) m.push_back(gens[i]);
    out.push_back(m);
  }
  return out;
}

std::vector<SignedCone> unimodular_decomposition(const IntMatrix& w) {
  if (w.empty() || w.size() != w[0].size()) throw input_error("unimodular_decomposition: need a square generator matrix");
  std::vector<SignedCone> out;
  decompose(w, 1, out);
  return out;
}

ShortGF polyhedron_gf(const HPolyhedron& p) {
  const std::size_t n = p.dim;
  ShortGF zero(n);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (!tighten(p.A[i], p.b[i], p.strict[i], rows)) return zero;
  if (n == 0) return gf_monomial({});
  HPolyhedron q = to_poly(n, rows);
  if (is_empty_lp(q)) return zero;
  {
    IntMatrix a;
    for (const auto& r : rows) a.push_back(r.a);
    if (a.empty() || rank(a) < n) throw input_error("polyhedron_gf: polyhedron contains a line");
  }

  // Implicit equalities, then an integral parametrisation of the affine hull.
  IntMatrix eq;
  IntVec rhs;
  std::vector<bool> is_eq(rows.size(), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    RatVec c = to_rational(rows[i].a);
    for (auto& x : c) x = -x;
    LpResult lp = lp_maximize(q, c);
    if (lp.status == LpResult::Status::Optimal && lp.value == -Rational(rows[i].b)) {
      is_eq[i] = true;
      eq.push_back(rows[i].a);
      rhs.push_back(rows[i].b);
    }
  }
  auto sol = solve_integer(eq, rhs, n);
  if (!sol) return zero;
  const IntVec& x0 = sol->particular;
  const std::size_t k = sol->basis.empty() ? 0 : sol->basis[0].size();
  if (k == 0) return contains(q, x0) ? gf_monomial(x0) : zero;

  std::vector<Row> yrows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (is_eq[i]) continue;
    RatVec a(k, Rational(0));
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t r = 0; r < n; ++r) a[j] += Rational(rows[i].a[r] * sol->basis[r][j]);
    if (!tighten(a, Rational(rows[i].b - dot(rows[i].a, x0)), false, yrows)) return zero;
  }
  HPolyhedron qy = to_poly(k, yrows);

  ShortGF gy(k);
  bool done = false;
  if (is_bounded(qy)) {
    try {
      for (const auto& y : enumerate_lattice_points(qy, 20000)) gy.terms.push_back({Rational(1), y, {}});
      done = true;
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::Cap) throw;
      gy.terms.clear();
    }
  }
  if (!done) gy = brion(k, yrows);

  ShortGF out(n);
  auto lift = [&](const IntVec& y, bool affine) {
    IntVec x = affine ? x0 : IntVec(n, 0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < k; ++j) x[r] += sol->basis[r][j] * y[j];
    return x;
  };
  for (const auto& t : gy.terms) {
    GFTerm u{t.c, lift(t.a, true), {}};
    for (const auto& b : t.bs) u.bs.push_back(lift(b, false));
    out.terms.push_back(std::move(u));
  }
  return simplify(out);
}

}  // namespace shortpa
