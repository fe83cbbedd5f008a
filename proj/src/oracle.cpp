#include "shortpa/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <future>

namespace shortpa {

namespace {

struct CAtom {
  std::vector<std::pair<std::size_t, Int>> terms;
  Int rhs;
  Rel rel;
};

struct CNode {
  BoolExpr::Kind kind;
  std::size_t atom = 0;
  std::vector<CNode> kids;
};

class Evaluator {
 public:
  Evaluator(const Formula& f, const OracleOptions& opt, std::atomic<std::uint64_t>& visited)
      : opt_(opt), visited_(visited) {
    std::size_t off = 0;
    for (std::size_t b = 0; b < f.blocks.size(); ++b) {
      offset_.push_back(off);
      const auto& blk = f.blocks[b];
      if (!blk.bound) throw input_error("oracle: block '" + blk.name + "' is unbounded");
      for (std::size_t j = 0; j < blk.dim; ++j) {
        block_of_.push_back(b);
        dom_lo_.push_back(blk.bound->lo);
        dom_hi_.push_back(blk.bound->hi);
      }
      off += blk.dim;
      quant_.push_back(blk.quant);
    }
    lo_ = dom_lo_;
    hi_ = dom_hi_;
    inner_nonempty_.assign(f.blocks.size() + 1, true);
    for (std::size_t b = f.blocks.size(); b-- > 0;)
      inner_nonempty_[b] = inner_nonempty_[b + 1] && f.blocks[b].bound->lo <= f.blocks[b].bound->hi;
    root_ = compile(f.matrix);
  }

  std::size_t nvars() const { return block_of_.size(); }
  std::size_t free_dim() const { return quant_.empty() || quant_[0] != Quant::Free ? 0 : offset_.size() > 1 ? offset_[1] : nvars(); }
  const Int& dom_lo(std::size_t i) const { return dom_lo_[i]; }
  const Int& dom_hi(std::size_t i) const { return dom_hi_[i]; }
  void fix(std::size_t i, const Int& v) { lo_[i] = hi_[i] = v; }
  void release(std::size_t i) {
    lo_[i] = dom_lo_[i];
    hi_[i] = dom_hi_[i];
  }

  // Value of the quantified suffix starting at flat variable i.
  bool solve(std::size_t i) {
    tick();
    if (i == nvars()) return tri(root_) > 0;
    const std::size_t b = block_of_[i];
    if (opt_.prune && inner_nonempty_[b]) {
      int t = tri(root_);
      if (t != 0) return t > 0;
    }
    const bool exists = quant_[b] == Quant::Exists;
    for (Int v = dom_lo_[i]; v <= dom_hi_[i]; ++v) {
      fix(i, v);
      bool r = solve(i + 1);
      if (r == exists) {
        release(i);
        return exists;
      }
    }
    release(i);
    return !exists;
  }

  // Enumerate satisfying free points from flat variable i (< free_dim).
  void count(std::size_t i, IntVec& cur, std::vector<IntVec>& out, bool known_true) {
    tick();
    const std::size_t fd = free_dim();
    if (i == fd) {
      if (known_true || solve(fd)) out.push_back(cur);
      return;
    }
    if (!known_true && opt_.prune && inner_nonempty_[1]) {
      int t = tri(root_);
      if (t < 0) return;
      if (t > 0) known_true = true;
    }
    for (Int v = dom_lo_[i]; v <= dom_hi_[i]; ++v) {
      fix(i, v);
      cur.push_back(v);
      count(i + 1, cur, out, known_true);
      cur.pop_back();
    }
    release(i);
  }

  Quant quant(std::size_t block) const { return quant_[block]; }
  std::size_t block_of(std::size_t i) const { return block_of_[i]; }

 private:
  const OracleOptions& opt_;
  std::atomic<std::uint64_t>& visited_;
  std::vector<std::size_t> offset_, block_of_;
  std::vector<Quant> quant_;
  IntVec dom_lo_, dom_hi_, lo_, hi_;
  std::vector<bool> inner_nonempty_;
  std::vector<CAtom> atoms_;
  CNode root_;

  void tick() {
    if (visited_.fetch_add(1, std::memory_order_relaxed) + 1 > opt_.cap)
      throw cap_error("oracle search-space cap of " + std::to_string(opt_.cap) + " assignments exceeded");
  }

  CNode compile(const BoolExpr& e) {
    CNode n{e.kind, 0, {}};
    if (e.kind == BoolExpr::Kind::Atom) {
      CAtom a{{}, e.atom.rhs, e.atom.rel};
      for (const auto& [v, c] : e.atom.coeffs) a.terms.emplace_back(offset_[v.block] + v.coord, c);
      n.atom = atoms_.size();
      atoms_.push_back(std::move(a));
    }
    for (const auto& k : e.kids) n.kids.push_back(compile(k));
    return n;
  }

  int tri_atom(const CAtom& a) const {
    Int mn = 0, mx = 0;
    for (const auto& [i, c] : a.terms) {
      if (c > 0) {
        mn += c * lo_[i];
        mx += c * hi_[i];
      } else {
        mn += c * hi_[i];
        mx += c * lo_[i];
      }
    }
    switch (a.rel) {
      case Rel::Le:
        return mx <= a.rhs ? 1 : (mn > a.rhs ? -1 : 0);
      case Rel::Lt:
        return mx < a.rhs ? 1 : (mn >= a.rhs ? -1 : 0);
      case Rel::Eq:
        if (mn == mx) return mn == a.rhs ? 1 : -1;
        return (a.rhs < mn || a.rhs > mx) ? -1 : 0;
    }
    return 0;
  }

  int tri(const CNode& n) const {
    using K = BoolExpr::Kind;
    switch (n.kind) {
      case K::True:
        return 1;
      case K::False:
        return -1;
      case K::Atom:
        return tri_atom(atoms_[n.atom]);
      case K::Not:
        return -tri(n.kids[0]);
      case K::And: {
        int r = 1;
        for (const auto& k : n.kids) {
          int t = tri(k);
          if (t < 0) return -1;
          if (t == 0) r = 0;
        }
        return r;
      }
      case K::Or: {
        int r = -1;
        for (const auto& k : n.kids) {
          int t = tri(k);
          if (t > 0) return 1;
          if (t == 0) r = 0;
        }
        return r;
      }
    }
    return 0;
  }
};

void check_nominal(const Formula& f, const OracleOptions& opt) {
  if (opt.prune) return;
  Int space = 1;
  for (const auto& b : f.blocks) {
    if (!b.bound) throw input_error("oracle: block '" + b.name + "' is unbounded");
    Int w = b.bound->hi - b.bound->lo + 1;
    if (w < 0) w = 0;
    for (std::size_t j = 0; j < b.dim; ++j) space *= w;
  }
  if (space > opt.cap) throw cap_error("oracle search space " + to_string(space) + " exceeds cap");
}

}  // namespace

bool brute_force_decide(const Formula& f, const OracleOptions& opt) {
  if (f.has_free()) throw input_error("brute_force_decide: formula has a free block; use brute_force_count");
  check_nominal(f, opt);
  std::atomic<std::uint64_t> visited{0};
  Evaluator ev(f, opt, visited);
  if (ev.nvars() == 0) return ev.solve(0);
  if (opt.jobs <= 1) return ev.solve(0);

  // Split the outermost coordinate across workers and combine with the
  // quantifier's own operation.
  const bool exists = ev.quant(0) == Quant::Exists;
  std::vector<Int> values;
  for (Int v = ev.dom_lo(0); v <= ev.dom_hi(0); ++v) values.push_back(v);
  if (values.empty()) return !exists;
  const std::size_t chunks = std::min<std::size_t>(opt.jobs, values.size());
  std::vector<std::future<bool>> futs;
  for (std::size_t c = 0; c < chunks; ++c) {
    futs.push_back(std::async(std::launch::async, [&, c]() {
      Evaluator local(f, opt, visited);
      for (std::size_t i = c; i < values.size(); i += chunks) {
        local.fix(0, values[i]);
        if (local.solve(1) == exists) return exists;
      }
      return !exists;
    }));
  }
  bool result = !exists;
  for (auto& fu : futs)
    if (fu.get() == exists) result = exists;
  return result;
}

CountResult brute_force_count(const Formula& f, const OracleOptions& opt) {
  if (!f.has_free()) throw input_error("brute_force_count: formula has no free block");
  check_nominal(f, opt);
  std::atomic<std::uint64_t> visited{0};
  Evaluator ev(f, opt, visited);
  CountResult r;
  IntVec cur;
  ev.count(0, cur, r.points, false);
  std::sort(r.points.begin(), r.points.end());
  r.count = r.points.size();
  return r;
}

}  // namespace shortpa
