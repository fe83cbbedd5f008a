#include "shortpa/kannan.hpp"

#include <algorithm>
#include <numeric>

namespace shortpa {

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, IntVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntVec mat_vec(const IntMatrix& m, const IntVec& v) {
  IntVec r(m.size(), 0);
  for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
  return r;
}

// Integer w-range where a w <= b holds, intersected into [lo, hi].
bool restrict(const Int& a, const Int& b, Int& lo, Int& hi) {
  if (a == 0) return b >= 0;
  if (a > 0)
    hi = std::min(hi, floor_div(b, a));
  else
    lo = std::max(lo, ceil_div(-b, -a));
  return lo <= hi;
}

// Sorted union of closed integer intervals.
std::vector<std::pair<Int, Int>> merge(std::vector<std::pair<Int, Int>> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<Int, Int>> out;
  for (auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second + 1)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  return out;
}

PartitionPiece make_piece(const Int& a, const Int& b, std::vector<TestPair> tests) {
  return PartitionPiece{Interval::half_open(Rational(a), Rational(b + 1)), std::move(tests)};
}

std::pair<Int, Int> piece_range(const PartitionPiece& p) {
  auto a = p.interval.first_integer(), b = p.interval.last_integer();
  if (!a || !b) throw input_error("partition piece must be bounded");
  return {*a, *b};
}

// ---------------------------------------------------------------- providers

struct Run {
  Int a, b;
  std::optional<IntVec> witness;
};

std::vector<Run> enumerate_runs(const ParametricSystem& s, const KptOptions& opt) {
  auto [lo, hi] = s.integer_range();
  std::vector<Run> runs;
  if (lo > hi) return runs;
  ParametricScanner scan(s);
  Int z = lo;
  while (z <= hi) {
    if (runs.size() >= opt.piece_cap) throw cap_error("KPT piece cap exceeded");
    auto w = scan.witness(z);
    if (w) {
      Int end = hi;
      for (std::size_t r = 0; r < s.m(); ++r) {
        if (s.alpha[r] >= 0) continue;
        Int slack = s.nu[r] - dot(s.A[r], *w);
        end = std::min(end, floor_div(slack, -s.alpha[r]));
      }
      runs.push_back({z, end, w});
      z = end + 1;
    } else {
      Int end = z;
      while (end < hi && !scan.witness(end + 1)) ++end;
      runs.push_back({z, end, std::nullopt});
      z = end + 1;
    }
  }
  return runs;
}

// floor((p z + q) / d) == w at every sample, with d <= dmax.
std::optional<std::tuple<Int, Int, Int>> fit_floor(const std::vector<std::pair<Int, Int>>& samples, const Int& dmax) {
  const auto& [z0, w0] = samples.front();
  const auto& [z1, w1] = samples.back();
  for (Int d = 1; d <= dmax; ++d) {
    Int p0 = z1 == z0 ? Int(0) : floor_div(d * (w1 - w0), z1 - z0);
    for (Int p = p0 - 1; p <= p0 + 2; ++p) {
      // d w <= p z + q <= d w + d - 1
      Int qlo = d * w0 - p * z0, qhi = qlo + d - 1;
      for (const auto& [z, w] : samples) {
        qlo = std::max(qlo, Int(d * w - p * z));
        qhi = std::min(qhi, Int(d * w + d - 1 - p * z));
        if (qlo > qhi) break;
      }
      if (qlo <= qhi) return std::tuple{p, qlo, d};
    }
  }
  return std::nullopt;
}

std::optional<TestPair> fit_test(const std::vector<Run>& runs, std::size_t first, std::size_t last, std::size_t n,
                                 const Int& dmax) {
  IntVec p(n), q(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<Int, Int>> samples;
    for (std::size_t r = first; r <= last; ++r) {
      if (!runs[r].witness) continue;
      samples.emplace_back(runs[r].a, (*runs[r].witness)[i]);
      if (runs[r].b != runs[r].a) samples.emplace_back(runs[r].b, (*runs[r].witness)[i]);
    }
    auto f = fit_floor(samples, dmax);
    if (!f) return std::nullopt;
    std::tie(p[i], q[i], d[i]) = *f;
  }
  return TestPair::floors(p, q, d);
}

bool holds_on(const TestPair& tp, const ParametricSystem& s, const std::vector<Run>& runs, std::size_t first,
              std::size_t last) {
  for (std::size_t r = first; r <= last; ++r) {
    if (!runs[r].witness) continue;
    for (Int z = runs[r].a; z <= runs[r].b; ++z)
      if (!s.member(tp.candidate(z), z)) return false;
  }
  return true;
}

constexpr long kRefitBudget = 20000;

KPTResult merged(const ParametricSystem& s, const std::vector<Run>& runs, const KptOptions& opt) {
  KPTResult out;
  std::size_t i = 0;
  while (i < runs.size()) {
    std::size_t j = i;
    std::optional<TestPair> tp;
    if (runs[i].witness) tp = TestPair::constant(*runs[i].witness);
    while (j + 1 < runs.size()) {
      const Run& next = runs[j + 1];
      if (!next.witness) {
        ++j;
        continue;
      }
      if (tp && holds_on(*tp, s, runs, j + 1, j + 1)) {
        ++j;
        continue;
      }
      if (runs[j + 1].b - runs[i].a > kRefitBudget) break;
      auto fit = fit_test(runs, i, j + 1, s.n(), opt.max_denominator);
      if (!fit || !holds_on(*fit, s, runs, i, j + 1)) break;
      tp = fit;
      ++j;
    }
    std::vector<TestPair> tests;
    if (tp) tests.push_back(*tp);
    if (tp && !holds_on(*tp, s, runs, i, j)) {
      for (std::size_t r = i; r <= j; ++r) {
        std::vector<TestPair> t;
        if (runs[r].witness) t.push_back(TestPair::constant(*runs[r].witness));
        out.pieces.push_back(make_piece(runs[r].a, runs[r].b, std::move(t)));
      }
    } else {
      out.pieces.push_back(make_piece(runs[i].a, runs[j].b, std::move(tests)));
    }
    i = j + 1;
  }
  return out;
}

// ---------------------------------------------------------------- printing

std::string coeff_term(const Rational& a, const std::string& name) {
  Int num = numerator(a), den = denominator(a);
  std::string s = abs(num) == 1 ? name : to_string(abs(num)) + name;
  if (den != 1) s += "/" + to_string(den);
  return s;
}

// Terms in order; each is (coefficient, name) with name "" for a constant.
std::string affine(const std::vector<std::pair<Rational, std::string>>& terms) {
  std::string out;
  for (const auto& [a, name] : terms) {
    if (a == 0) continue;
    std::string body = name.empty() ? to_string(Rational(abs(a))) : coeff_term(abs(a), name);
    if (out.empty())
      out = (a < 0 ? "-" : "") + body;
    else
      out += (a < 0 ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

std::string tname(const FloorFragment& f, std::size_t i) {
  return f.dim() == 1 ? f.var : f.var + std::to_string(i + 1);
}

std::string floor_expr(const FloorFragment& f, std::size_t i, const Rational& shift) {
  return affine({{Rational(f.p[i], f.d[i]), f.param}, {Rational(f.q[i], f.d[i]) + shift, ""}});
}

// Integer atom  sum coeffs v + slope * z  <=  rhs  (strict when lt), scaled.
LinearAtom rational_atom(const std::map<VarRef, Rational>& coeffs, const Rational& rhs, bool lt) {
  Int l = denominator(rhs);
  for (const auto& [v, c] : coeffs) l = lcm(l, denominator(c));
  std::map<VarRef, Int> ic;
  for (const auto& [v, c] : coeffs)
    if (c != 0) ic[v] = numerator(Rational(c * l));
  return make_atom(std::move(ic), lt ? Rel::Lt : Rel::Le, numerator(Rational(rhs * l)));
}

// t_i <= T_i (upper), t_i > T_i - 1 (lower) and their negations, over
// z = VarRef{0,0} and t_i = tv.
BoolExpr floor_atom(const Int& p, const Int& q, const Int& d, const VarRef& tv, bool upper, bool negated) {
  // upper:  d t - p z <= q ; negated: d t - p z > q, i.e. -d t + p z < -q
  // lower:  d t - p z > q - d, i.e. -d t + p z < d - q ; negated: d t - p z <= q - d
  std::map<VarRef, Int> c;
  if (upper != negated) {
    c[tv] = d;
    if (p != 0) c[VarRef{0, 0}] = -p;
    return BoolExpr::leaf(make_atom(c, Rel::Le, upper ? q : Int(q - d)));
  }
  c[tv] = -d;
  if (p != 0) c[VarRef{0, 0}] = p;
  return BoolExpr::leaf(make_atom(c, Rel::Lt, upper ? Int(-q) : Int(d - q)));
}

BoolExpr row_expr(const FloorFragment::Row& r, const std::vector<VarRef>& tv, const IntVec* tvalue) {
  std::map<VarRef, Rational> c;
  Rational rhs = r.rhs_const - r.lhs_const;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) {
    if (tvalue)
      rhs -= r.coeffs[i] * Rational((*tvalue)[i]);
    else
      c[tv[i]] += r.coeffs[i];
  }
  if (r.rhs_slope != 0) c[VarRef{0, 0}] -= r.rhs_slope;
  LinearAtom a = rational_atom(c, rhs, false);
  if (a.is_constant()) return BoolExpr::truth(eval_atom(a, {}));
  return BoolExpr::leaf(a);
}

std::pair<Int, Int> floor_span(const IntVec& p, const IntVec& q, const IntVec& d, const Bound& zr) {
  Int lo = 0, hi = 0;
  bool first = true;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (const Int& z : {zr.lo, zr.hi}) {
      Int v = floor_div(p[i] * z + q[i], d[i]);
      if (first || v < lo) lo = v;
      if (first || v > hi) hi = v;
      first = false;
    }
  return {lo - 1, hi + 1};
}

std::vector<FloorFragment::Row> rows_of(const TestPair& tp, const ParametricSystem& s) {
  std::vector<FloorFragment::Row> rows;
  for (std::size_t r = 0; r < s.m(); ++r) {
    FloorFragment::Row row;
    IntVec am(tp.M.empty() ? 0 : tp.M[0].size(), 0);
    for (std::size_t j = 0; j < am.size(); ++j)
      for (std::size_t i = 0; i < s.n(); ++i) am[j] += s.A[r][i] * tp.M[i][j];
    row.coeffs = to_rational(am);
    row.lhs_const = Rational(dot(s.A[r], tp.c));
    row.rhs_const = Rational(s.nu[r]);
    row.rhs_slope = Rational(s.alpha[r]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------- system

bool ParametricSystem::member(const IntVec& x, const Int& z) const {
  for (std::size_t r = 0; r < m(); ++r)
    if (dot(A[r], x) > alpha[r] * z + nu[r]) return false;
  return true;
}

std::pair<Int, Int> ParametricSystem::integer_range() const {
  auto a = z_range.first_integer(), b = z_range.last_integer();
  if (!a || !b) throw input_error("parameter range must be finite");
  return {*a, *b};
}

void ParametricSystem::validate() const {
  if (alpha.size() != m() || nu.size() != m()) throw input_error("parametric system: row count mismatch");
  for (const auto& row : A)
    if (row.size() != n()) throw input_error("parametric system: ragged matrix");
  if (n() == 0) return;
  HPolyhedron cone(n());
  for (const auto& row : A) cone.add_row(row, Int(0));
  if (!is_bounded(cone)) throw input_error("parametric system: K_z is unbounded");
}

// ---------------------------------------------------------------- tests

TestPair TestPair::constant(const IntVec& x) {
  return TestPair{IntVec(x.size(), 0), x, IntVec(x.size(), 1), identity(x.size()), IntVec(x.size(), 0)};
}

TestPair TestPair::floors(IntVec p, IntVec q, IntVec d) {
  std::size_t n = p.size();
  return TestPair{std::move(p), std::move(q), std::move(d), identity(n), IntVec(n, 0)};
}

IntVec TestPair::candidate(const Int& z) const {
  IntVec y(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) y[i] = floor_div(p[i] * z + q[i], d[i]);
  IntVec x = mat_vec(M, y);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += c[i];
  return x;
}

bool TestPair::is_constant() const {
  return std::all_of(p.begin(), p.end(), [](const Int& v) { return v == 0; });
}

ParametricScanner::ParametricScanner(const ParametricSystem& s)
    : n_(s.n()), scan_([&] {
        auto [lo, hi] = s.integer_range();
        HPolyhedron h(1 + s.n());
        for (std::size_t r = 0; r < s.m(); ++r) {
          IntVec a{-s.alpha[r]};
          a.insert(a.end(), s.A[r].begin(), s.A[r].end());
          h.add_row(a, s.nu[r]);
        }
        IntVec e(1 + s.n(), 0);
        e[0] = 1;
        h.add_row(e, hi);
        e[0] = -1;
        h.add_row(e, -lo);
        return LatticeScanner(h);
      }()) {}

std::optional<IntVec> ParametricScanner::witness(const Int& z) const {
  auto p = scan_.first({z});
  if (!p) return std::nullopt;
  return IntVec(p->begin() + 1, p->end());
}

// ---------------------------------------------------------------- partition

KPTResult kpt_partition_1d(const ParametricSystem& s, Provider provider, const KptOptions& opt) {
  s.validate();
  auto runs = enumerate_runs(s, opt);
  if (provider == Provider::Merged) return merged(s, runs, opt);
  KPTResult out;
  for (auto& r : runs) {
    std::vector<TestPair> t;
    if (r.witness) t.push_back(TestPair::constant(*r.witness));
    out.pieces.push_back(make_piece(r.a, r.b, std::move(t)));
  }
  return out;
}

KptCheck verify_kpt(const KPTResult& r, const ParametricSystem& s) {
  auto [lo, hi] = s.integer_range();
  if (lo > hi) return {};
  ParametricScanner scan(s);
  Int next = lo;
  for (const auto& piece : r.pieces) {
    auto [a, b] = piece_range(piece);
    if (a > b) continue;
    if (a != next) return {false, std::min(a, next), a > next ? "integers not covered" : "pieces overlap"};
    for (Int z = a; z <= b; ++z) {
      bool truth = scan.witness(z).has_value();
      bool claimed = std::any_of(piece.tests.begin(), piece.tests.end(),
                                 [&](const TestPair& tp) { return s.member(tp.candidate(z), z); });
      if (truth != claimed) return {false, z, truth ? "feasible but no candidate lies in K_z" : "candidate check"};
    }
    next = b + 1;
  }
  if (next != hi + 1) return {false, next, "integers not covered"};
  return {};
}

// ---------------------------------------------------------------- fragments

std::vector<std::string> FloorFragment::lines() const {
  std::vector<std::string> out;
  const bool ex = polarity == Polarity::Exists;
  for (std::size_t i = 0; i < dim(); ++i) {
    out.push_back(tname(*this, i) + (ex ? " <= " : " > ") + floor_expr(*this, i, 0));
    out.push_back(tname(*this, i) + (ex ? " > " : " <= ") + floor_expr(*this, i, -1));
  }
  for (const auto& r : rows) {
    std::vector<std::pair<Rational, std::string>> lhs{{r.lhs_const, ""}};
    for (std::size_t i = 0; i < r.coeffs.size(); ++i) lhs.emplace_back(r.coeffs[i], tname(*this, i));
    out.push_back(affine(lhs) + " <= " + affine({{r.rhs_slope, param}, {r.rhs_const, ""}}));
  }
  return out;
}

std::string FloorFragment::print() const {
  auto ls = lines();
  const bool ex = polarity == Polarity::Exists;
  std::string out;
  if (dim() > 0) {
    out = ex ? "E " : "A ";
    for (std::size_t i = 0; i < dim(); ++i) out += (i ? ", " : "") + tname(*this, i);
    out += ": ";
  }
  for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? (ex || dim() == 0 ? " and " : " or ") : "") + ls[i];
  return out;
}

Formula FloorFragment::to_formula(const Bound& param_range) const {
  Formula f;
  f.blocks.push_back(QuantBlock{Quant::Free, param, 1, param_range});
  std::vector<VarRef> tv;
  for (std::size_t i = 0; i < dim(); ++i) tv.push_back(VarRef{1, i});
  std::vector<BoolExpr> rs;
  for (const auto& r : rows) rs.push_back(row_expr(r, tv, nullptr));
  BoolExpr inner = BoolExpr::conj(std::move(rs));
  if (dim() == 0) {
    f.matrix = inner;
    return f;
  }
  auto [lo, hi] = floor_span(p, q, d, param_range);
  const bool ex = polarity == Polarity::Exists;
  f.blocks.push_back(QuantBlock{ex ? Quant::Exists : Quant::Forall, var, dim(), Bound{lo, hi}});
  std::vector<BoolExpr> parts;
  for (std::size_t i = 0; i < dim(); ++i) {
    parts.push_back(floor_atom(p[i], q[i], d[i], tv[i], true, !ex));
    parts.push_back(floor_atom(p[i], q[i], d[i], tv[i], false, !ex));
  }
  parts.push_back(inner);
  f.matrix = ex ? BoolExpr::conj(std::move(parts)) : BoolExpr::disj(std::move(parts));
  return f;
}

FloorFragment floor_condition_to_formula(const TestPair& tp, const ParametricSystem& s, Polarity polarity) {
  FloorFragment f;
  f.polarity = polarity;
  f.p = tp.p;
  f.q = tp.q;
  f.d = tp.d;
  f.rows = rows_of(tp, s);
  return f;
}

Formula piece_condition(const PartitionPiece& piece, const ParametricSystem& s) {
  auto [a, b] = piece_range(piece);
  Formula f;
  f.blocks.push_back(QuantBlock{Quant::Free, "z", 1, Bound{a, b}});
  std::size_t udim = 0;
  Int ulo = 0, uhi = 0;
  for (const auto& tp : piece.tests) {
    if (tp.is_constant()) continue;
    auto [lo, hi] = floor_span(tp.p, tp.q, tp.d, Bound{a, b});
    if (udim == 0 || lo < ulo) ulo = lo;
    if (udim == 0 || hi > uhi) uhi = hi;
    udim += tp.p.size();
  }
  std::vector<BoolExpr> alts;
  std::size_t off = 0;
  for (const auto& tp : piece.tests) {
    auto rows = rows_of(tp, s);
    std::vector<BoolExpr> conj;
    if (tp.is_constant()) {
      IntVec t(tp.q.size());
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = floor_div(tp.q[i], tp.d[i]);
      for (const auto& r : rows) conj.push_back(row_expr(r, {}, &t));
      alts.push_back(BoolExpr::conj(std::move(conj)));
      continue;
    }
    std::vector<VarRef> tv;
    for (std::size_t i = 0; i < tp.p.size(); ++i) tv.push_back(VarRef{1, off + i});
    std::vector<BoolExpr> parts;
    for (std::size_t i = 0; i < tp.p.size(); ++i) {
      parts.push_back(floor_atom(tp.p[i], tp.q[i], tp.d[i], tv[i], true, true));
      parts.push_back(floor_atom(tp.p[i], tp.q[i], tp.d[i], tv[i], false, true));
    }
    for (const auto& r : rows) conj.push_back(row_expr(r, tv, nullptr));
    parts.push_back(BoolExpr::conj(std::move(conj)));
    alts.push_back(BoolExpr::disj(std::move(parts)));
    off += tp.p.size();
  }
  if (udim > 0) f.blocks.push_back(QuantBlock{Quant::Forall, "u", udim, Bound{ulo, uhi}});
  f.matrix = alts.empty() ? BoolExpr::truth(false) : BoolExpr::disj(std::move(alts));
  return f;
}

// ---------------------------------------------------------------- feasible set

APSet piece_feasible_set(const PartitionPiece& piece, const ParametricSystem& s, const Int& period_cap) {
  auto [a, b] = piece_range(piece);
  APSet out{piece.interval, {}};
  if (a > b || piece.tests.empty()) return out;
  Int L = 1;
  for (const auto& tp : piece.tests)
    for (const auto& d : tp.d) L = lcm(L, d);
  if (L > period_cap) throw cap_error("feasible set period exceeds cap");
  for (Int r = 0; r < L && a + r <= b; ++r) {
    const Int z0 = a + r;
    const Int W = floor_div(b - z0, L);
    std::vector<std::pair<Int, Int>> ws;
    for (const auto& tp : piece.tests) {
      // floor((p (z0 + L w) + q) / d) = f0 + (p L / d) w
      IntVec f0(tp.p.size()), g(tp.p.size());
      for (std::size_t i = 0; i < tp.p.size(); ++i) {
        f0[i] = floor_div(tp.p[i] * z0 + tp.q[i], tp.d[i]);
        g[i] = tp.p[i] * L / tp.d[i];
      }
      IntVec u = mat_vec(tp.M, f0), v = mat_vec(tp.M, g);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += tp.c[i];
      Int lo = 0, hi = W;
      bool ok = true;
      for (std::size_t row = 0; row < s.m() && ok; ++row)
        ok = restrict(dot(s.A[row], v) - s.alpha[row] * L, s.alpha[row] * z0 + s.nu[row] - dot(s.A[row], u), lo, hi);
      if (ok) ws.emplace_back(lo, hi);
    }
    for (const auto& [lo, hi] : merge(ws)) out.progressions.push_back({z0 + L * lo, L, hi - lo + 1});
  }
  return canonicalize(out);
}

bool base_case_decide(const ParametricSystem& s, Provider provider) {
  auto [lo, hi] = s.integer_range();
  if (lo > hi) return true;
  KPTResult r = kpt_partition_1d(s, provider);
  Int covered = 0;
  for (const auto& piece : r.pieces) covered += piece_feasible_set(piece, s).cardinality();
  return covered == hi - lo + 1;
}

}  // namespace shortpa
