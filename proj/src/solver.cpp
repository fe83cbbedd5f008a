#include "shortpa/solver.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>

namespace shortpa {

namespace {

Int count_in(const APSet& s, const Int& lo, const Int& hi) {
  Int n = 0;
  for (const auto& p : s.progressions) {
    Int last = p.first + p.step * (p.count - 1);
    Int a = std::max(lo, p.first), b = std::min(hi, last);
    if (a > b) continue;
    Int i0 = ceil_div(a - p.first, p.step), i1 = floor_div(b - p.first, p.step);
    if (i1 >= i0) n += i1 - i0 + 1;
  }
  return n;
}

// Breakpoints of a feasible set inside one piece; between consecutive
// breakpoints membership is periodic.
struct Regions {
  std::vector<Int> breaks;
  std::vector<Int> period;  // of region [breaks[r], breaks[r+1])
};

Regions make_regions(const APSet& s, const Int& lo, const Int& hi) {
  Regions r;
  r.breaks = {lo, hi + 1};
  for (const auto& p : s.progressions) {
    r.breaks.push_back(p.first);
    r.breaks.push_back(p.first + p.step * (p.count - 1) + 1);
  }
  std::sort(r.breaks.begin(), r.breaks.end());
  r.breaks.erase(std::unique(r.breaks.begin(), r.breaks.end()), r.breaks.end());
  for (std::size_t k = 0; k + 1 < r.breaks.size(); ++k) {
    Int L = 1;
    for (const auto& p : s.progressions)
      if (p.count > 1 && p.first <= r.breaks[k] && p.first + p.step * (p.count - 1) >= r.breaks[k + 1] - 1)
        L = lcm(L, p.step);
    r.period.push_back(L);
  }
  return r;
}

class Engine {
 public:
  Engine(const DisassociatedForm& d, const SolverOptions& opt, DecisionTrace* tr)
      : d_(d), opt_(opt), tr_(tr), sys_(parametric_system(d)) {
    KptOptions ko;
    ko.piece_cap = opt.piece_cap;
    kpt_ = kpt_partition_1d(sys_, opt.provider, ko);
    for (const auto& p : kpt_.pieces) {
      lo_.push_back(*p.interval.first_integer());
      hi_.push_back(*p.interval.last_integer());
      feas_.push_back(piece_feasible_set(p, sys_));
    }
    regions_.resize(kpt_.pieces.size());
    if (tr_) tr_->kpt_pieces = kpt_.pieces.size();
  }

  bool decide_root() { return node(0, 0, nullptr); }

  std::vector<Int> free_values() {
    std::vector<Int> out;
    node(0, 0, &out);
    return out;
  }

  std::uint64_t work() const { return work_; }

 private:
  struct Run {
    bool straddles;
    std::size_t piece;
    Int first, last;  // child indices
  };

  const DisassociatedForm& d_;
  const SolverOptions& opt_;
  DecisionTrace* tr_;
  ParametricSystem sys_;
  KPTResult kpt_;
  std::vector<Int> lo_, hi_;
  std::vector<APSet> feas_;
  std::vector<std::optional<Regions>> regions_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, Int>, bool> memo_;
  std::uint64_t work_ = 0;

  void tick() {
    if (++work_ > opt_.work_budget) throw cap_error("solver work budget exhausted");
  }

  // Length of the z_K window once z_1..z_j are fixed.
  Int len(std::size_t j) const { return pow2(d_.t.back() - (j == 0 ? 0 : d_.t[j - 1])); }

  std::vector<Run> split(std::size_t j, const Int& w0, std::size_t& pieces) const {
    const Int wend = w0 + len(j) - 1, cl = len(j + 1);
    auto pa = std::upper_bound(hi_.begin(), hi_.end(), w0 - 1) - hi_.begin();
    auto pb = std::upper_bound(lo_.begin(), lo_.end(), wend) - lo_.begin() - 1;
    pieces = static_cast<std::size_t>(pb - pa + 1);
    std::vector<Run> out;
    for (auto i = pa; i <= pb; ++i) {
      const std::size_t pi = static_cast<std::size_t>(i);
      if (i > pa && (lo_[pi] - w0) % cl != 0) {
        Int c = (lo_[pi] - w0) / cl;
        if (out.empty() || !out.back().straddles || out.back().first != c) out.push_back({true, pi, c, c});
      }
      Int a = std::max(lo_[pi], w0), b = std::min(hi_[pi], wend);
      Int cf = ceil_div(a - w0, cl), cla = floor_div(b + 1 - w0, cl) - 1;
      if (cf <= cla) out.push_back({false, pi, cf, cla});
    }
    return out;
  }

  bool node(std::size_t j, const Int& w0, std::vector<Int>* collect) {
    tick();
    std::size_t pieces = 0;
    auto runs = split(j, w0, pieces);
    if (pieces > opt_.piece_cap) throw cap_error("KPT piece count exceeds the per-node cap");
    std::size_t f2 = 0, f1 = 0;
    for (const auto& r : runs) (r.straddles ? f2 : f1) += 1;
    std::size_t slot = 0;
    if (tr_) {
      ++tr_->node_count;
      tr_->max_f2 = std::max(tr_->max_f2, f2);
      if (f2 > pieces) tr_->f2_bound_held = false;
      slot = tr_->nodes.size();
      if (slot < opt_.trace_cap) tr_->nodes.push_back({j, w0, w0 + len(j) - 1, pieces, f2, f1, false});
    }
    const Quant q = d_.quants[j];
    const Int cl = len(j + 1);
    bool result = q == Quant::Forall, decided = false;
    for (std::size_t k = 0; k < runs.size() && !decided; ++k) {
      const Run& r = runs[k];
      for (Int c = r.first; c <= r.last && !decided; ++c) {
        const Int cw = w0 + c * cl;
        bool v = r.straddles ? node(j + 1, cw, nullptr) : inside(j + 1, cw, r.piece);
        if (q == Quant::Free) {
          if (v) collect->push_back(c);
          result = result || v;
        } else if (v != result) {
          result = v;
          decided = true;
        }
      }
    }
    if (tr_ && slot < tr_->nodes.size()) tr_->nodes[slot].outcome = result;
    return result;
  }

  bool inside(std::size_t j, const Int& w0, std::size_t i) {
    tick();
    const Int l = len(j), wend = w0 + l - 1;
    const Int cnt = count_in(feas_[i], w0, wend);
    if (cnt == 0) return false;
    if (cnt == l) return true;
    if (!regions_[i]) regions_[i] = make_regions(feas_[i], lo_[i], hi_[i]);
    const Regions& rg = *regions_[i];
    auto r = static_cast<std::size_t>(std::upper_bound(rg.breaks.begin(), rg.breaks.end(), w0) - rg.breaks.begin() - 1);
    std::optional<std::tuple<std::size_t, std::size_t, std::size_t, Int>> key;
    if (wend < rg.breaks[r + 1]) {
      key = std::tuple{i, j, r, Int(w0 % rg.period[r])};
      if (auto it = memo_.find(*key); it != memo_.end()) return it->second;
    }
    const Quant q = d_.quants[j];
    const Int cl = len(j + 1), n = pow2(d_.bits[j]);
    bool result = q == Quant::Forall;
    for (Int c = 0; c < n; ++c)
      if (inside(j + 1, w0 + c * cl, i) != result) {
        result = !result;
        break;
      }
    if (key) memo_[*key] = result;
    return result;
  }
};

bool last_is_forall(const Formula& f) {
  return f.quantifier_count() > 0 && f.blocks.back().quant == Quant::Forall;
}

void check_input(const Formula& f, const SolverOptions& opt) {
  if (!f.is_bounded()) throw input_error("every block needs a bound");
  if (f.quantifier_count() > opt.max_k) throw cap_error("quantifier count exceeds cap");
}

void fill_trace(DecisionTrace* tr, const Formula& f, const DisassociatedForm& d) {
  if (!tr) return;
  tr->sentence = print_formula(f);
  tr->quants = d.quants;
  tr->t = d.t;
  tr->inner_dim = d.inner_dim;
}

}  // namespace

ParametricSystem parametric_system(const DisassociatedForm& d) {
  const std::size_t K = d.chain();
  if (K == 0) throw input_error("parametric system needs a parameter block");
  ParametricSystem s;
  const HPolyhedron& lam = d.lambda;
  for (std::size_t r = 0; r < lam.rows(); ++r) {
    Int l = denominator(lam.b[r]);
    for (const auto& a : lam.A[r]) l = lcm(l, denominator(a));
    IntVec row(lam.dim);
    for (std::size_t i = 0; i < lam.dim; ++i) row[i] = numerator(Rational(lam.A[r][i] * l));
    Rational b = lam.b[r] * l;
    Int ib = floor_of(b);
    if (lam.strict[r] && Rational(ib) == b) --ib;
    s.alpha.push_back(-row[0]);
    s.A.emplace_back(row.begin() + 1, row.end());
    s.nu.push_back(ib);
  }
  s.z_range = Interval::closed(0, pow2(d.t.back()) - 1);
  return s;
}

bool decide(const Formula& f, const SolverOptions& opt, DecisionTrace* trace) {
  if (f.has_free()) throw input_error("decide expects a sentence without free variables");
  check_input(f, opt);
  if (last_is_forall(f)) {
    bool v = !decide(negate(f), opt, trace);
    if (trace) trace->negated = true;
    return v;
  }
  PipelineTrace p = normalize_pipeline(f, opt.style);
  const DisassociatedForm& d = p.result;
  fill_trace(trace, f, d);
  if (d.chain() == 0) return LatticeScanner(d.lambda).first().has_value();
  Engine e(d, opt, trace);
  bool v = e.decide_root();
  if (trace) trace->work = e.work();
  return v;
}

ShortGF count_gf(const Formula& f0, const Int& N, const SolverOptions& opt, DecisionTrace* trace) {
  if (!f0.has_free()) throw input_error("counting needs a free block");
  if (N < 0) throw input_error("N must be nonnegative");
  Formula f = f0;
  f.blocks[0].bound = Bound{-N, N};
  check_input(f, opt);
  const std::size_t n1 = f.blocks[0].dim;
  if (last_is_forall(f)) {
    ShortGF box = box_gf(IntVec(n1, -N), IntVec(n1, N));
    ShortGF g = gf_add(box, gf_scale(-1, count_gf(negate(f), N, opt, trace)));
    if (trace) trace->negated = true;
    return g;
  }
  PipelineTrace p = normalize_pipeline(f, opt.style);
  const DisassociatedForm& d = p.result;
  fill_trace(trace, f, d);
  if (d.chain() == 0 || d.quants[0] != Quant::Free) throw math_error("counting: free block lost in normalization");
  Engine e(d, opt, trace);
  auto vals = e.free_values();
  if (trace) trace->work = e.work();
  APSet s = apset_from_values(Interval::half_open(0, Rational(pow2(d.t[0]))), vals);
  ShortGF g = apset_to_gf(s);
  if (n1 > 1) g = unpack(g, n1, p.bounded.ells[0]);
  return gf_shift(g, p.bounded.free_shift);
}

Int count(const Formula& f, const Int& N, const SolverOptions& opt) { return count(count_gf(f, N, opt)); }

}  // namespace shortpa
