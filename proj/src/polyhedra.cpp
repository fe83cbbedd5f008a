#include "shortpa/polyhedra.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <map>

namespace shortpa {

namespace {

std::size_t g_dimension_cap = 6;

// Row a.x <= b (or < b) with integer data, the working form of elimination.
// `hist` records the input rows combined into this one (Chernikov's rule).
struct IRow {
  IntVec a;
  Int b;
  bool strict = false;
  boost::dynamic_bitset<> hist;
};

IRow to_irow(const RatVec& a, const Rational& b, bool strict) {
  RatVec all = a;
  all.push_back(b);
  IntVec v = clear_denominators(all);
  IRow r;
  r.b = v.back();
  v.pop_back();
  r.a = std::move(v);
  r.strict = strict;
  return r;
}

bool zero_row(const IRow& r) { return is_zero(r.a); }

bool constant_ok(const IRow& r) { return r.strict ? r.b > 0 : r.b >= 0; }

// Real mode divides by the content of (a, b). Integer mode turns strict rows
// into non-strict ones and rounds b down after dividing by the content of a,
// which is exact on integer points.
void normalize(IRow& r, bool integer_mode) {
  if (integer_mode) {
    if (r.strict) {
      r.b -= 1;
      r.strict = false;
    }
    Int g = content(r.a);
    if (g > 1) {
      for (auto& x : r.a) x /= g;
      r.b = floor_div(r.b, g);
    }
    return;
  }
  Int g = gcd(content(r.a), r.b);
  if (g > 1) {
    for (auto& x : r.a) x /= g;
    r.b /= g;
  }
}

// Keeps the tightest row per direction. Returns false on a violated constant row.
bool dedupe(std::vector<IRow>& rows) {
  std::map<IntVec, IRow> best;
  for (auto& r : rows) {
    if (zero_row(r)) {
      if (!constant_ok(r)) return false;
      continue;
    }
    auto it = best.find(r.a);
    if (it == best.end()) {
      best.emplace(r.a, std::move(r));
    } else if (r.b < it->second.b || (r.b == it->second.b && r.strict)) {
      it->second = std::move(r);
    }
  }
  rows.clear();
  for (auto& [k, r] : best) rows.push_back(std::move(r));
  return true;
}

HPolyhedron from_irows(const std::vector<IRow>& rows, std::size_t dim) {
  HPolyhedron p(dim);
  for (const auto& r : rows) {
    RatVec a(dim);
    for (std::size_t j = 0; j < dim; ++j) a[j] = Rational(r.a[j]);
    p.add_row(std::move(a), Rational(r.b), r.strict);
  }
  return p;
}

void drop_redundant(std::vector<IRow>& rows, std::size_t dim);

constexpr std::size_t kRedundancyThreshold = 160;
constexpr std::size_t kRowCap = 20000;
constexpr std::size_t kScanRows = 150;

// Eliminates coordinate j as the `step`-th elimination (1-based). Sets
// `infeasible` when a contradiction appears.
using Box = std::vector<std::pair<Int, Int>>;

// Keeps rows that cut into the box, at most kScanRows of them (deepest cuts
// first). Any subset of valid rows is a valid relaxation. Returns whether a
// cutting row was dropped.
bool relax(std::vector<IRow>& rows, const Box& box) {
  std::vector<std::pair<Int, std::size_t>> depth;
  std::vector<IRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (std::count_if(rows[i].a.begin(), rows[i].a.end(), [](const Int& x) { return x != 0; }) == 1) {
      out.push_back(rows[i]);
      continue;
    }
    Int mx = 0;
    for (std::size_t c = 0; c < rows[i].a.size(); ++c) {
      const Int& a = rows[i].a[c];
      if (a != 0) mx += a * (a > 0 ? box[c].second : box[c].first);
    }
    if (mx > rows[i].b) depth.emplace_back(mx - rows[i].b, i);
  }
  std::stable_sort(depth.begin(), depth.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  const bool dropped = depth.size() > kScanRows;
  if (dropped) depth.resize(kScanRows);
  for (const auto& d : depth) out.push_back(std::move(rows[d.second]));
  rows = std::move(out);
  return dropped;
}

std::vector<IRow> eliminate(std::vector<IRow> rows, std::size_t j, std::size_t step, bool integer_mode,
                            bool& infeasible, const Box* box = nullptr, bool* dropped = nullptr) {
  std::vector<IRow> out;
  // An equality pair with a nonzero j-coefficient allows substitution.
  std::map<IntVec, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) index.emplace(rows[i].a, i);
  std::optional<std::size_t> eq;
  for (std::size_t i = 0; i < rows.size() && !eq; ++i) {
    const auto& r = rows[i];
    if (r.a[j] == 0 || r.strict) continue;
    IntVec neg = r.a;
    for (auto& x : neg) x = -x;
    auto it = index.find(neg);
    if (it != index.end() && !rows[it->second].strict && rows[it->second].b == -r.b) eq = i;
  }
  if (eq) {
    const IRow& e = rows[*eq];
    IntVec neg = e.a;
    for (auto& x : neg) x = -x;
    std::size_t partner = index.at(neg);
    Int ej = abs(e.a[j]);
    int es = sign(e.a[j]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == *eq || i == partner) continue;
      const IRow& s = rows[i];
      if (s.a[j] == 0) {
        out.push_back(s);
        continue;
      }
      IRow t;
      t.a.resize(s.a.size());
      Int f = s.a[j] * es;
      for (std::size_t c = 0; c < s.a.size(); ++c) t.a[c] = ej * s.a[c] - f * e.a[c];
      t.b = ej * s.b - f * e.b;
      t.strict = s.strict;
      t.hist = s.hist | e.hist;
      out.push_back(std::move(t));
    }
  } else {
    std::vector<const IRow*> pos, neg;
    for (const auto& r : rows) {
      if (r.a[j] > 0)
        pos.push_back(&r);
      else if (r.a[j] < 0)
        neg.push_back(&r);
      else
        out.push_back(r);
    }
    if (out.size() + pos.size() * neg.size() > kRowCap)
      throw cap_error("Fourier-Motzkin elimination exceeds " + std::to_string(kRowCap) + " rows");
    for (const IRow* p : pos)
      for (const IRow* n : neg) {
        boost::dynamic_bitset<> h = p->hist | n->hist;
        if (h.count() > step + 1) continue;
        IRow t;
        t.hist = std::move(h);
        t.a.resize(p->a.size());
        Int cp = p->a[j], cn = -n->a[j];
        for (std::size_t c = 0; c < t.a.size(); ++c) t.a[c] = cn * p->a[c] + cp * n->a[c];
        t.b = cn * p->b + cp * n->b;
        t.strict = p->strict || n->strict;
        out.push_back(std::move(t));
      }
  }
  for (auto& r : out) normalize(r, integer_mode);
  if (!dedupe(out)) {
    infeasible = true;
    return {};
  }
  if (box) {
    if (relax(out, *box) && dropped) *dropped = true;
  } else if (out.size() > kRedundancyThreshold)
    drop_redundant(out, out.front().a.size());
  return out;
}

// Strict rows never get dropped unless strictly implied, so semantics are kept.
void drop_redundant(std::vector<IRow>& rows, std::size_t dim) {
  std::vector<bool> keep(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<IRow> others;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (k != i && keep[k]) others.push_back(rows[k]);
    HPolyhedron q = from_irows(others, dim);
    RatVec c(dim);
    for (std::size_t t = 0; t < dim; ++t) c[t] = Rational(rows[i].a[t]);
    LpResult lp = lp_maximize(q, c);
    if (lp.status != LpResult::Status::Optimal) continue;
    if (lp.value < rows[i].b || (lp.value == rows[i].b && !rows[i].strict)) keep[i] = false;
  }
  std::vector<IRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (keep[i]) out.push_back(std::move(rows[i]));
  rows = std::move(out);
}

std::vector<IRow> irows(const HPolyhedron& p) {
  std::vector<IRow> out;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    out.push_back(to_irow(p.A[i], p.b[i], p.strict[i]));
    out.back().hist.resize(p.rows());
    out.back().hist.set(i);
  }
  return out;
}

// Dense two-phase simplex with Bland's rule on y >= 0, T y = rhs. The
// tableau is kept integral with one common denominator (fraction-free
// pivoting), so no rational normalisation happens inside the loop.
class Simplex {
 public:
  Simplex(const RatMatrix& t, const RatVec& rhs, std::size_t ncols) : n_(ncols) {
    Int l = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      l = lcm(l, denominator(rhs[i]));
      for (const auto& x : t[i]) l = lcm(l, denominator(x));
    }
    den_ = 1;
    for (std::size_t i = 0; i < t.size(); ++i) {
      IntVec row(n_);
      for (std::size_t j = 0; j < n_; ++j) row[j] = numerator(t[i][j] * Rational(l));
      t_.push_back(std::move(row));
      rhs_.push_back(numerator(rhs[i] * Rational(l)));
    }
    scale_ = l;
  }
  Simplex(IntMatrix t, IntVec rhs) : t_(std::move(t)), rhs_(std::move(rhs)), n_(t_.empty() ? 0 : t_.front().size()) {}

  // Returns false when the phase-1 optimum is positive (infeasible).
  bool phase1() {
    const std::size_t m = t_.size();
    for (std::size_t i = 0; i < m; ++i)
      if (rhs_[i] < 0) {
        for (auto& x : t_[i]) x = -x;
        rhs_[i] = -rhs_[i];
      }
    // Rows owning a unit column start with it in the basis; the rest get an
    // artificial column. Row i is rescaled so that its unit entry is 1.
    std::vector<std::size_t> nonzeros(n_, 0);
    for (const auto& row : t_)
      for (std::size_t j = 0; j < n_; ++j)
        if (row[j] != 0) ++nonzeros[j];
    basis_.assign(m, SIZE_MAX);
    std::vector<bool> used(n_, false);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        if (!used[j] && nonzeros[j] == 1 && t_[i][j] > 0) {
          const Int g = t_[i][j];
          bool divides = true;
          for (const auto& x : t_[i]) divides = divides && x % g == 0;
          divides = divides && rhs_[i] % g == 0;
          if (!divides) continue;
          for (auto& x : t_[i]) x /= g;
          rhs_[i] /= g;
          basis_[i] = j;
          used[j] = true;
          break;
        }
    art_start_ = n_;
    total_ = n_;
    for (std::size_t i = 0; i < m; ++i) {
      if (basis_[i] != SIZE_MAX) continue;
      for (std::size_t k = 0; k < m; ++k) t_[k].push_back(Int(k == i ? 1 : 0));
      basis_[i] = total_++;
    }
    if (total_ > n_) {
      IntVec c(total_, Int(0));
      for (std::size_t j = n_; j < total_; ++j) c[j] = -1;
      run(c, total_);
      for (std::size_t i = 0; i < m; ++i)
        if (basis_[i] >= art_start_ && rhs_[i] != 0) return false;
    }
    // Drive remaining artificials (all at level zero) out of the basis.
    for (std::size_t i = 0; i < basis_.size();) {
      if (basis_[i] < art_start_) {
        ++i;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (t_[i][j] != 0) {
          col = j;
          break;
        }
      if (col == n_) {
        t_.erase(t_.begin() + i);
        rhs_.erase(rhs_.begin() + i);
        basis_.erase(basis_.begin() + i);
        continue;
      }
      pivot(i, col);
      ++i;
    }
    return true;
  }

  // Maximises c over the original columns; false when unbounded.
  bool phase2(const RatVec& c) {
    Int l = 1;
    for (const auto& x : c) l = lcm(l, denominator(x));
    IntVec full(total_, Int(0));
    for (std::size_t j = 0; j < n_; ++j) full[j] = numerator(c[j] * Rational(l));
    return run(full, n_);
  }

  RatVec solution() const {
    RatVec y(n_, Rational(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < n_) y[basis_[i]] = Rational(rhs_[i], den_);
    return y;
  }

 private:
  IntMatrix t_;
  IntVec rhs_;
  Int den_ = 1;
  Int scale_ = 1;
  std::size_t n_;
  std::size_t art_start_ = 0;
  std::size_t total_ = 0;
  std::vector<std::size_t> basis_;

  void pivot(std::size_t r, std::size_t c) {
    if (t_[r][c] < 0) {
      for (auto& x : t_[r]) x = -x;
      rhs_[r] = -rhs_[r];
    }
    const Int p = t_[r][c];
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == r) continue;
      const Int f = t_[i][c];
      auto& row = t_[i];
      for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] *= p;
        if (f != 0 && t_[r][j] != 0) row[j] -= f * t_[r][j];
        row[j] /= den_;
      }
      rhs_[i] = (rhs_[i] * p - f * rhs_[r]) / den_;
    }
    den_ = p;
    basis_[r] = c;
  }

  // Columns >= allowed never enter.
  bool run(const IntVec& c, std::size_t allowed) {
    while (true) {
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        Int d = c[j] * den_;
        for (std::size_t i = 0; i < basis_.size(); ++i)
          if (t_[i][j] != 0 && c[basis_[i]] != 0) d -= c[basis_[i]] * t_[i][j];
        if (d > 0) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;
      std::optional<std::size_t> leave;
      for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (t_[i][enter] <= 0) continue;
        if (!leave) {
          leave = i;
          continue;
        }
        // rhs_i / t_i < rhs_l / t_l
        Int lhs = rhs_[i] * t_[*leave][enter], rhs = rhs_[*leave] * t_[i][enter];
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[*leave])) leave = i;
      }
      if (!leave) return false;
      pivot(*leave, enter);
    }
  }
};

}  // namespace

std::size_t dimension_cap() { return g_dimension_cap; }
void set_dimension_cap(std::size_t n) { g_dimension_cap = n; }

void HPolyhedron::add_row(RatVec a, Rational rhs, bool is_strict) {
  if (a.size() != dim) throw input_error("polyhedron row has wrong dimension");
  A.push_back(std::move(a));
  b.push_back(std::move(rhs));
  strict.push_back(is_strict);
}

void HPolyhedron::add_row(const IntVec& a, const Int& rhs, bool is_strict) {
  add_row(to_rational(a), Rational(rhs), is_strict);
}

void HPolyhedron::add_equality(const IntVec& a, const Int& rhs) {
  add_row(a, rhs);
  IntVec n = a;
  for (auto& x : n) x = -x;
  add_row(n, -rhs);
}

void HPolyhedron::add_box(const Int& lo, const Int& hi) {
  for (std::size_t j = 0; j < dim; ++j) {
    IntVec e(dim, Int(0));
    e[j] = 1;
    add_row(e, hi);
    e[j] = -1;
    add_row(e, -lo);
  }
}

bool Interval::contains(const Rational& z) const {
  if (lo && (lo_open ? z <= *lo : z < *lo)) return false;
  if (hi && (hi_open ? z >= *hi : z > *hi)) return false;
  return true;
}

std::optional<Int> Interval::first_integer() const {
  if (!lo) return std::nullopt;
  Int f = ceil_of(*lo);
  if (lo_open && Rational(f) == *lo) ++f;
  return f;
}

std::optional<Int> Interval::last_integer() const {
  if (!hi) return std::nullopt;
  Int f = floor_of(*hi);
  if (hi_open && Rational(f) == *hi) --f;
  return f;
}

bool Interval::has_integers() const {
  auto a = first_integer(), b = last_integer();
  if (!a || !b) return true;
  return *a <= *b;
}

bool contains(const HPolyhedron& p, const RatVec& x) {
  if (x.size() != p.dim) throw input_error("contains: dimension mismatch");
  for (std::size_t i = 0; i < p.rows(); ++i) {
    Rational v = dot(p.A[i], x);
    if (p.strict[i] ? v >= p.b[i] : v > p.b[i]) return false;
  }
  return true;
}

bool contains(const HPolyhedron& p, const IntVec& x) { return contains(p, to_rational(x)); }

LpResult lp_maximize(const HPolyhedron& p, const RatVec& c) {
  // y = (x+, x-, s): A x+ - A x- + s = b.
  const std::size_t n = p.dim, m = p.rows();
  RatMatrix t(m, RatVec(2 * n + m, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      t[i][j] = p.A[i][j];
      t[i][n + j] = -p.A[i][j];
    }
    t[i][2 * n + i] = 1;
  }
  Simplex s(t, p.b, 2 * n + m);
  LpResult r;
  if (!s.phase1()) return r;
  RatVec cc(2 * n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) {
    cc[j] = c[j];
    cc[n + j] = -c[j];
  }
  if (!s.phase2(cc)) {
    r.status = LpResult::Status::Unbounded;
    return r;
  }
  RatVec y = s.solution();
  r.status = LpResult::Status::Optimal;
  r.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) r.x[j] = y[j] - y[n + j];
  r.value = dot(c, r.x);
  return r;
}

bool is_empty_lp(const HPolyhedron& p) {
  bool any_strict = std::any_of(p.strict.begin(), p.strict.end(), [](bool s) { return s; });
  if (!any_strict) {
    RatVec c(p.dim, Rational(0));
    return lp_maximize(p, c).status == LpResult::Status::Infeasible;
  }
  // Maximise a slack e on the strict rows, capped at 1.
  HPolyhedron q(p.dim + 1);
  for (std::size_t i = 0; i < p.rows(); ++i) {
    RatVec a = p.A[i];
    a.push_back(Rational(p.strict[i] ? 1 : 0));
    q.add_row(std::move(a), p.b[i]);
  }
  RatVec e(p.dim + 1, Rational(0));
  e.back() = 1;
  q.add_row(e, Rational(1));
  LpResult r = lp_maximize(q, e);
  return r.status == LpResult::Status::Infeasible || r.value <= 0;
}

bool is_empty_fm(const HPolyhedron& p) {
  std::vector<IRow> rows = irows(p);
  for (auto& r : rows) normalize(r, false);
  if (!dedupe(rows)) return true;
  bool infeasible = false;
  for (std::size_t j = p.dim; j-- > 0;) {
    if (rows.empty()) return false;
    rows = eliminate(std::move(rows), j, p.dim - j, false, infeasible);
    if (infeasible) return true;
  }
  return false;
}

bool is_empty(const HPolyhedron& p) {
  if (p.dim <= g_dimension_cap) {
    try {
      return is_empty_fm(p);
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::Cap) throw;
    }
  }
  return is_empty_lp(p);
}

bool is_bounded(const HPolyhedron& p) {
  HPolyhedron rec(p.dim);
  for (std::size_t i = 0; i < p.rows(); ++i) rec.add_row(p.A[i], Rational(0));
  for (std::size_t j = 0; j < p.dim; ++j) {
    RatVec e(p.dim, Rational(0));
    e[j] = 1;
    rec.add_row(e, Rational(1));
    e[j] = -1;
    rec.add_row(e, Rational(1));
  }
  for (std::size_t j = 0; j < p.dim; ++j)
    for (int s : {1, -1}) {
      RatVec c(p.dim, Rational(0));
      c[j] = s;
      LpResult r = lp_maximize(rec, c);
      if (r.status != LpResult::Status::Optimal || r.value > 0) return false;
    }
  return true;
}

HPolyhedron fm_project(const HPolyhedron& p, std::size_t keep) {
  if (keep > p.dim) throw input_error("fm_project: keep exceeds dimension");
  std::vector<IRow> rows = irows(p);
  for (auto& r : rows) normalize(r, false);
  bool infeasible = !dedupe(rows);
  for (std::size_t j = p.dim; j-- > keep && !infeasible;)
    rows = eliminate(std::move(rows), j, p.dim - j, false, infeasible);
  HPolyhedron out(keep);
  if (infeasible) {
    out.add_row(RatVec(keep, Rational(0)), Rational(-1));
    return out;
  }
  for (const auto& r : rows) {
    RatVec a(keep);
    for (std::size_t c = 0; c < keep; ++c) a[c] = Rational(r.a[c]);
    out.add_row(std::move(a), Rational(r.b), r.strict);
  }
  return out;
}

IntMatrix extreme_rays(const IntMatrix& h) {
  if (h.empty()) throw math_error("extreme_rays: cone is not pointed");
  const std::size_t D = h[0].size(), m = h.size();
  // Pick D independent rows for the starting simplicial cone.
  std::vector<std::size_t> order, rest;
  IntMatrix basis_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (order.size() < D) {
      basis_rows.push_back(h[i]);
      if (rank(basis_rows) == basis_rows.size()) {
        order.push_back(i);
        continue;
      }
      basis_rows.pop_back();
    }
    rest.push_back(i);
  }
  if (order.size() < D) throw math_error("extreme_rays: cone is not pointed");
  RatMatrix hs(D, RatVec(D));
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) hs[i][j] = Rational(h[order[i]][j]);
  RatMatrix inv = inverse(hs);

  struct Ray {
    IntVec v;
    boost::dynamic_bitset<> zero;
  };
  std::vector<Ray> rays;
  for (std::size_t k = 0; k < D; ++k) {
    RatVec col(D);
    for (std::size_t i = 0; i < D; ++i) col[i] = inv[i][k];
    Ray r{primitive(clear_denominators(col)), boost::dynamic_bitset<>(m)};
    for (std::size_t i = 0; i < D; ++i)
      if (i != k) r.zero.set(order[i]);
    rays.push_back(std::move(r));
  }

  for (std::size_t idx : rest) {
    const IntVec& row = h[idx];
    std::vector<Int> val(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(row, rays[r].v);
      if (val[r] > 0)
        pos.push_back(r);
      else if (val[r] < 0)
        neg.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r)
        if (val[r] == 0) rays[r].zero.set(idx);
      continue;
    }
    for (std::size_t p : pos)
      for (std::size_t n : neg) {
        boost::dynamic_bitset<> common = rays[p].zero & rays[n].zero;
        if (common.count() + 2 < D) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.is_subset_of(rays[r].zero)) adjacent = false;
        }
        if (!adjacent) continue;
        IntVec v(D);
        for (std::size_t c = 0; c < D; ++c) v[c] = val[p] * rays[n].v[c] - val[n] * rays[p].v[c];
        Ray nr{primitive(std::move(v)), common};
        nr.zero.set(idx);
        next.push_back(std::move(nr));
      }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (val[r] < 0) continue;
      Ray keep = rays[r];
      if (val[r] == 0) keep.zero.set(idx);
      next.push_back(std::move(keep));
    }
    rays = std::move(next);
  }
  IntMatrix out;
  for (auto& r : rays) out.push_back(std::move(r.v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

HPolyhedron closure(const HPolyhedron& p) {
  HPolyhedron q = p;
  std::fill(q.strict.begin(), q.strict.end(), false);
  return q;
}

void check_cap(std::size_t n) {
  if (n > g_dimension_cap)
    throw cap_error("dimension " + std::to_string(n) + " exceeds polyhedra cap " + std::to_string(g_dimension_cap));
}

}  // namespace

VPolytope vertices_from_facets(const HPolyhedron& p) {
  check_cap(p.dim);
  HPolyhedron c = closure(p);
  if (is_empty(c)) throw input_error("vertices_from_facets: empty polyhedron");
  if (!is_bounded(c)) throw input_error("vertices_from_facets: unbounded polyhedron");
  VPolytope out;
  out.dim = p.dim;
  if (p.dim == 0) {
    out.vertices.push_back({});
    return out;
  }
  // Homogenise: (x, l) with l b - A x >= 0 and l >= 0.
  IntMatrix h;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    IRow r = to_irow(c.A[i], c.b[i], false);
    IntVec row;
    for (const auto& x : r.a) row.push_back(-x);
    row.push_back(r.b);
    h.push_back(std::move(row));
  }
  IntVec lam(p.dim + 1, Int(0));
  lam.back() = 1;
  h.push_back(lam);
  for (const auto& ray : extreme_rays(h)) {
    if (ray.back() == 0) throw input_error("vertices_from_facets: unbounded polyhedron");
    RatVec v(p.dim);
    for (std::size_t j = 0; j < p.dim; ++j) v[j] = Rational(ray[j], ray.back());
    out.vertices.push_back(std::move(v));
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
  return out;
}

HPolyhedron facets_from_vertices(const VPolytope& v) {
  check_cap(v.dim);
  if (v.vertices.empty()) throw input_error("facets_from_vertices: no vertices");
  std::vector<RatVec> pts = v.vertices;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = v.dim;
  HPolyhedron out(n);

  // Affine hull: equalities a.x = a.v0 for a orthogonal to all differences.
  RatMatrix diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RatVec d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(std::move(d));
  }
  IntMatrix dint;
  for (const auto& d : diffs) dint.push_back(clear_denominators(d));
  for (const auto& a : nullspace(dint, n)) {
    RatVec ar = to_rational(a);
    Rational beta = dot(ar, pts[0]);
    RatVec na = ar;
    for (auto& x : na) x = -x;
    out.add_row(ar, beta);
    out.add_row(na, -beta);
  }
  std::vector<std::size_t> piv;
  if (!diffs.empty()) rref(diffs, &piv);
  const std::size_t d = piv.size();
  if (d == 0) return out;

  // Valid inequalities a.x <= beta on the projection to the pivot coordinates.
  IntMatrix h;
  for (const auto& p : pts) {
    RatVec row;
    for (std::size_t j : piv) row.push_back(-p[j]);
    row.push_back(Rational(1));
    h.push_back(clear_denominators(row));
  }
  for (const auto& ray : extreme_rays(h)) {
    IntVec a(ray.begin(), ray.begin() + d);
    if (is_zero(a)) continue;
    RatVec full(n, Rational(0));
    for (std::size_t k = 0; k < d; ++k) full[piv[k]] = Rational(a[k]);
    out.add_row(std::move(full), Rational(ray.back()));
  }
  return out;
}

LatticeScanner::LatticeScanner(const HPolyhedron& p) : dim_(p.dim), proj_(p.dim) {
  std::vector<IRow> rows = irows(p);
  for (auto& r : rows) normalize(r, true);
  if (!dedupe(rows)) {
    empty_ = true;
    return;
  }
  if (dim_ == 0) return;
  auto store = [&](std::size_t j, const std::vector<IRow>& rs) {
    for (const auto& r : rs) proj_[j].push_back(Row{r.a, r.b});
  };
  store(dim_ - 1, rows);

  // Coordinate box of the relaxation; projections below the top level only
  // prune the scan, so they may be relaxed when the box is finite.
  std::optional<Box> box;
  {
    HPolyhedron q = from_irows(rows, dim_);
    Box bx;
    for (std::size_t j = 0; j < dim_ && bx.size() == j; ++j) {
      RatVec c(dim_, Rational(0));
      c[j] = 1;
      LpResult up = lp_maximize(q, c);
      if (up.status == LpResult::Status::Infeasible) {
        empty_ = true;
        return;
      }
      c[j] = -1;
      LpResult dn = lp_maximize(q, c);
      if (up.status == LpResult::Status::Optimal && dn.status == LpResult::Status::Optimal)
        bx.emplace_back(ceil_of(-dn.value), floor_of(up.value));
    }
    if (bx.size() == dim_) {
      for (std::size_t j = 0; j < dim_; ++j)
        if (bx[j].first > bx[j].second) {
          empty_ = true;
          return;
        }
      for (std::size_t j = 0; j < dim_; ++j) {
        IRow lo, hi;
        lo.a.assign(dim_, 0);
        hi.a.assign(dim_, 0);
        hi.a[j] = 1;
        hi.b = bx[j].second;
        lo.a[j] = -1;
        lo.b = -bx[j].first;
        lo.hist.resize(rows.front().hist.size());
        hi.hist.resize(rows.front().hist.size());
        rows.push_back(lo);
        rows.push_back(hi);
      }
      box = bx;
      box_ = std::move(bx);
    }
  }
  bool infeasible = false, dropped = false;
  exact_.assign(dim_, true);
  for (std::size_t j = dim_ - 1; j > 0; --j) {
    rows = eliminate(std::move(rows), j, dim_ - j, true, infeasible, box ? &*box : nullptr, &dropped);
    if (infeasible) {
      empty_ = true;
      return;
    }
    store(j - 1, rows);
    exact_[j - 1] = !dropped;
  }
}

// Rational bounds of coordinate j over the full system with x_0..x_{j-1}
// fixed. Returns false when that slice is empty. Coordinates are shifted to
// the box corner, and rows the box already implies are skipped.
bool LatticeScanner::lp_bounds(std::size_t j, const IntVec& x, Int& lo, Int& hi) const {
  const std::size_t n = dim_ - j;
  std::vector<IntVec> rows;
  IntVec rhs;
  for (const auto& r : proj_[dim_ - 1]) {
    Int b = r.b, worst = 0;
    for (std::size_t i = 0; i < j; ++i)
      if (r.a[i] != 0) b -= r.a[i] * x[i];
    IntVec a(r.a.begin() + static_cast<std::ptrdiff_t>(j), r.a.end());
    for (std::size_t k = 0; k < n; ++k) {
      const Int& c = a[k];
      if (c == 0) continue;
      b -= c * box_[j + k].first;
      if (c > 0) worst += c * (box_[j + k].second - box_[j + k].first);
    }
    if (worst <= b) continue;
    if (b < 0 && is_zero(a)) return false;
    rows.push_back(std::move(a));
    rhs.push_back(std::move(b));
  }
  for (std::size_t k = 0; k < n; ++k) {
    IntVec e(n, Int(0));
    e[k] = 1;
    rows.push_back(std::move(e));
    rhs.push_back(box_[j + k].second - box_[j + k].first);
  }
  const std::size_t m = rows.size();
  for (std::size_t i = 0; i < m; ++i) {
    rows[i].resize(n + m, Int(0));
    rows[i][n + i] = 1;
  }
  Simplex sx(std::move(rows), std::move(rhs));
  if (!sx.phase1()) return false;
  RatVec c(n + m, Rational(0));
  c[0] = 1;
  sx.phase2(c);
  hi = std::min(hi, box_[j].first + floor_of(sx.solution()[0]));
  c[0] = -1;
  sx.phase2(c);
  lo = std::max(lo, box_[j].first + ceil_of(sx.solution()[0]));
  return lo <= hi;
}

bool LatticeScanner::bounds(std::size_t j, const IntVec& x, Int& lo, Int& hi, bool& has_lo, bool& has_hi) const {
  has_lo = has_hi = false;
  for (const auto& r : proj_[j]) {
    const Int& c = r.a[j];
    Int rhs = r.b;
    for (std::size_t i = 0; i < j; ++i)
      if (r.a[i] != 0) rhs -= r.a[i] * x[i];
    if (c == 0) {
      if (rhs < 0) return false;
      continue;
    }
    if (c > 0) {
      Int u = floor_div(rhs, c);
      if (!has_hi || u < hi) hi = u;
      has_hi = true;
    } else {
      Int l = ceil_div(rhs, c);
      if (!has_lo || l > lo) lo = l;
      has_lo = true;
    }
  }
  return true;
}

std::optional<std::pair<Int, Int>> LatticeScanner::range(const IntVec& prefix) const {
  if (empty_ || prefix.size() >= dim_) return std::nullopt;
  if (!prefix.empty())
    for (const auto& r : proj_[prefix.size() - 1]) {
      Int v = 0;
      for (std::size_t i = 0; i < prefix.size(); ++i) v += r.a[i] * prefix[i];
      if (v > r.b) return std::nullopt;
    }
  Int lo, hi;
  bool hl, hh;
  if (!bounds(prefix.size(), prefix, lo, hi, hl, hh)) return std::nullopt;
  if (!hl || !hh || lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

bool LatticeScanner::dfs(std::size_t j, IntVec& x, const std::function<bool(const IntVec&)>& f) const {
  if (j == dim_) return f(x);
  Int lo, hi;
  bool hl, hh;
  if (!bounds(j, x, lo, hi, hl, hh)) return true;
  if (!hl || !hh) throw input_error("lattice scan: unbounded coordinate " + std::to_string(j));
  if (lo > hi || (!exact_[j] && !lp_bounds(j, x, lo, hi))) return true;
  for (Int v = lo; v <= hi; ++v) {
    x[j] = v;
    if (!dfs(j + 1, x, f)) return false;
  }
  return true;
}

void LatticeScanner::each(const IntVec& prefix, const std::function<bool(const IntVec&)>& f) const {
  if (empty_) return;
  if (prefix.size() > dim_) throw input_error("lattice scan: prefix too long");
  if (!prefix.empty())
    for (const auto& r : proj_[prefix.size() - 1]) {
      Int v = 0;
      for (std::size_t i = 0; i < prefix.size(); ++i) v += r.a[i] * prefix[i];
      if (v > r.b) return;
    }
  IntVec x(dim_, Int(0));
  std::copy(prefix.begin(), prefix.end(), x.begin());
  dfs(prefix.size(), x, f);
}

std::optional<IntVec> LatticeScanner::first(const IntVec& prefix) const {
  std::optional<IntVec> out;
  each(prefix, [&](const IntVec& x) {
    out = x;
    return false;
  });
  return out;
}

std::vector<IntVec> enumerate_lattice_points(const HPolyhedron& p, std::size_t cap) {
  if (!is_bounded(p)) throw input_error("enumerate_lattice_points: unbounded polyhedron");
  std::vector<IntVec> out;
  LatticeScanner s(p);
  s.each({}, [&](const IntVec& x) {
    if (out.size() >= cap) throw cap_error("lattice point cap " + std::to_string(cap) + " exceeded");
    out.push_back(x);
    return true;
  });
  return out;
}

std::optional<IntVec> integer_lexmin(const HPolyhedron& p) {
  if (!is_bounded(p)) throw input_error("integer_lexmin: unbounded polyhedron");
  return LatticeScanner(p).first();
}

}  // namespace shortpa
