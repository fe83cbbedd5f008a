#include "doctest.h"

#include "shortpa/normalize.hpp"
#include "shortpa/oracle.hpp"
#include "test_support.hpp"

#include <random>
#include <set>

using namespace shortpa;

namespace {

std::set<IntVec> project(const std::vector<IntVec>& pts, std::size_t n) {
  std::set<IntVec> out;
  for (const auto& p : pts) out.insert(IntVec(p.begin(), p.begin() + n));
  return out;
}

std::set<IntVec> union_points(const DNFSystems& d) {
  std::set<IntVec> out;
  for (const auto& p : d.systems)
    for (auto& x : enumerate_lattice_points(p)) out.insert(x);
  return out;
}

DNFSystems segments(std::vector<std::pair<long, long>> segs) {
  DNFSystems d;
  d.dim = 1;
  for (auto [lo, hi] : segs) {
    HPolyhedron p(1);
    p.add_row(IntVec{1}, Int(hi));
    p.add_row(IntVec{-1}, Int(-lo));
    d.systems.push_back(p);
    d.atoms.push_back({});
  }
  return d;
}

// Random sentence whose bounds are arbitrary ranges, not powers of two.
Formula random_ranges(std::mt19937_64& rng, int k, bool with_free) {
  Formula f = testing::random_sentence(rng, k, 2, 3, 3, 6, with_free);
  for (auto& b : f.blocks) {
    int lo = testing::uniform(rng, -3, 2);
    b.bound = Bound{lo, lo + testing::uniform(rng, 0, 5)};
  }
  return f;
}

}  // namespace

TEST_CASE("bit_bound shifts and widens with polarity-correct guards") {
  Formula f = parse_formula("A y:1 in [-2,2] E x:1 in [1,3] : (<= (+ x y) 2)");
  BitBounded b = bit_bound(f);
  CHECK(b.ells == std::vector<std::size_t>{3, 2});
  CHECK(*b.formula.blocks[0].bound == Bound{0, 7});
  CHECK(brute_force_decide(f) == brute_force_decide(b.formula));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    Formula g = random_ranges(rng, 1 + i % 3, i % 4 == 0);
    BitBounded h = bit_bound(g);
    if (g.has_free()) {
      auto before = brute_force_count(g).points;
      auto after = brute_force_count(h.formula).points;
      REQUIRE(before.size() == after.size());
      for (std::size_t j = 0; j < after.size(); ++j)
        for (std::size_t c = 0; c < after[j].size(); ++c) CHECK(after[j][c] + h.free_shift[c] == before[j][c]);
    } else {
      CHECK(brute_force_decide(g) == brute_force_decide(h.formula));
    }
  }
}

TEST_CASE("bit_bound merges adjacent blocks and drops empty ones") {
  Formula f = parse_formula("A y:1 in [0,5] E x:1 in [0,1] : (<= (+ x y) 5)");
  f.blocks.insert(f.blocks.begin() + 1, QuantBlock{Quant::Exists, "w", 0, Bound{0, 1}});
  f.blocks.insert(f.blocks.begin() + 2, QuantBlock{Quant::Exists, "v", 1, Bound{0, 9}});
  // Matrix variables of block 1 moved to block 3 by the insertions.
  LinearAtom a = f.matrix.atom;
  a.coeffs.clear();
  a.coeffs[VarRef{0, 0}] = 1;
  a.coeffs[VarRef{3, 0}] = 1;
  a.coeffs[VarRef{2, 0}] = -1;
  f.matrix = BoolExpr::leaf(a);
  BitBounded b = bit_bound(f);
  REQUIRE(b.formula.blocks.size() == 2);
  CHECK(b.formula.blocks[1].dim == 2);
  CHECK(b.ells[1] == 4);
  CHECK(brute_force_decide(f) == brute_force_decide(b.formula));
}

TEST_CASE("to_dnf distributes and keeps satisfied points") {
  Formula f = parse_formula("E v:2 in [0,3] : (and (or (<= v.1 1) (<= v.2 1)) (>= v.1 0))");
  DNFSystems d = to_dnf(f);
  CHECK(d.systems.size() == 2);
  CHECK(d.atoms[0].size() == 2);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 60; ++i) {
    Formula g = testing::random_sentence(rng, 2, 2, 3, 2, 6, false);
    DNFSystems dd = to_dnf(g);
    std::vector<IntVec> x;
    for (const auto& b : g.blocks) x.emplace_back(b.dim, Int(0));
    for (int s = 0; s < 30; ++s) {
      IntVec flat;
      for (std::size_t b = 0; b < g.blocks.size(); ++b)
        for (auto& v : x[b]) {
          v = testing::uniform(rng, 0, static_cast<int>(g.blocks[b].bound->hi));
          flat.push_back(v);
        }
      bool any = false;
      for (const auto& p : dd.systems) any = any || contains(p, flat);
      CHECK(any == eval(g.matrix, x));
    }
  }
}

TEST_CASE("lifting of two segments") {
  DNFSystems d = segments({{0, 1}, {3, 4}});
  std::vector<Bound> box{Bound{0, 7}};
  Lifting lifted = union_to_single_system(d, LiftStyle::Lifted, box);
  CHECK(lifted.R.dim == 3);
  CHECK(lifted.hull);
  CHECK(project(enumerate_lattice_points(lifted.R), 1) == std::set<IntVec>{{0}, {1}, {3}, {4}});

  Lifting compact = union_to_single_system(d, LiftStyle::Compact, box);
  CHECK(compact.R.dim == 2);
  auto pts = enumerate_lattice_points(compact.R);
  std::set<IntVec> got(pts.begin(), pts.end());
  // coordinates are (x, label)
  CHECK(got == std::set<IntVec>{{0, 0}, {1, 0}, {3, 1}, {4, 1}});

  Lifting single = union_to_single_system(segments({{2, 5}}), LiftStyle::Compact, box);
  CHECK(single.labels == 1);
  CHECK(project(enumerate_lattice_points(single.R), 1) == std::set<IntVec>{{2}, {3}, {4}, {5}});
}

TEST_CASE("lifting projection property, hull and big-M routes") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = 1 + i % 2;
    DNFSystems d;
    d.dim = n;
    int t = testing::uniform(rng, 1, 4);
    for (int j = 0; j < t; ++j) {
      HPolyhedron p(n);
      p.add_box(0, 6);
      for (int r = 0; r < 2; ++r) {
        IntVec a(n);
        for (auto& x : a) x = testing::uniform(rng, -3, 3);
        p.add_row(a, Int(testing::uniform(rng, -2, 10)));
      }
      d.systems.push_back(p);
      d.atoms.push_back({});
    }
    std::vector<Bound> box(n, Bound{0, 6});
    auto want = union_points(d);
    for (auto style : {LiftStyle::Lifted, LiftStyle::Compact}) {
      Lifting l = union_to_single_system(d, style, box);
      CHECK(project(enumerate_lattice_points(l.R), n) == want);
      std::size_t cap = dimension_cap();
      set_dimension_cap(1);
      Lifting m = union_to_single_system(d, style, box);
      set_dimension_cap(cap);
      CHECK_FALSE(m.hull);
      CHECK(project(enumerate_lattice_points(m.R), n) == want);
    }
  }
}

TEST_CASE("concatenation encodes digits") {
  Formula f = parse_formula("free x:2 in [0,3] E e:1 in [0,1] : (and (= x.1 3) (= x.2 1))");
  Concatenated c = concat_variables(f, {2, 1});
  CHECK(c.bits == std::vector<std::size_t>{4});
  CHECK(c.formula.blocks[0].dim == 1);
  CHECK(c.formula.blocks[1].dim == 3);
  auto pts = brute_force_count(c.formula).points;
  REQUIRE(pts.size() == 1);
  CHECK(pts[0] == IntVec{7});

  Formula g = parse_formula("A y:1 in [0,7] E x:1 in [0,3] : (<= (* 2 x) y)");
  Concatenated same = concat_variables(g, {3, 2});
  CHECK(same.formula.blocks[0] == g.blocks[0]);
  CHECK(same.formula.blocks[1].dim == 1);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    Formula s = testing::random_sentence(rng, 2, 2, 3, 2, 6, false);
    BitBounded b = bit_bound(s);
    Concatenated cc = concat_variables(b.formula, b.ells);
    CHECK(brute_force_decide(s) == brute_force_decide(cc.formula));
  }
}

TEST_CASE("floor relations of the disassociated form") {
  Formula f = parse_formula("E a:1 in [0,3] A b:1 in [0,3] E x:1 in [0,1] : (<= (+ a b) x)");
  DisassociatedForm d = normalize_pipeline(f).result;
  REQUIRE(d.relations.size() == 1);
  CHECK(d.t == std::vector<std::size_t>{2, 4});
  auto holds = [&](long z1, long z2) {
    std::vector<IntVec> x{{Int(z1)}, {Int(z2)}, {}};
    return eval_atom(d.relations[0].upper, x) && eval_atom(d.relations[0].lower, x);
  };
  CHECK(holds(2, 9));
  CHECK_FALSE(holds(1, 9));
  for (long z2 = 0; z2 < 16; ++z2)
    for (long z1 = 0; z1 < 4; ++z1) CHECK(holds(z1, z2) == (z1 == z2 / 4));
}

TEST_CASE("pipeline trace structure") {
  Formula f = parse_formula("A y:1 in [0,7] E x:1 in [0,3] : (and (<= (* 2 x) y) (<= y (+ (* 2 x) 1)))");
  PipelineTrace tr = normalize_pipeline(f);
  CHECK(tr.dnf.systems.size() == 1);
  CHECK(tr.lifting.labels == 1);
  CHECK(tr.result.chain() == 1);
  CHECK(tr.result.odd == false);

  Formula g = parse_formula("A y:1 in [0,7] E x:1 in [0,3] : (or (<= (* 2 x) y) (<= y (+ (* 2 x) 1)))");
  PipelineTrace tg = normalize_pipeline(g, LiftStyle::Lifted);
  CHECK(tg.dnf.systems.size() == 2);
  CHECK(tg.lifting.labels == 2);
  CHECK(tg.lifted_formula.blocks[1].dim == 3);
}

TEST_CASE("truth is preserved at every pipeline stage") {
  std::mt19937_64 rng(2024);
  OracleOptions opt;
  opt.cap = 50'000'000;
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    int k = 1 + i % 4;
    int lmax = k >= 3 ? 2 : 4;
    Formula f = testing::random_sentence(rng, k, 2, 3, lmax, 8, false);
    const bool truth = brute_force_decide(f, opt);
    for (auto style : {LiftStyle::Compact, LiftStyle::Lifted}) {
      PipelineTrace tr = normalize_pipeline(f, style);
      for (std::size_t j = 1; j < tr.result.t.size(); ++j) CHECK(tr.result.t[j - 1] < tr.result.t[j]);
      for (const auto& [name, g] : tr.stages()) {
        CAPTURE(name);
        CAPTURE(print_formula(f));
        CHECK(brute_force_decide(g, opt) == truth);
        ++checked;
      }
    }
  }
  CHECK(checked == 800);
}

TEST_CASE("free formulas keep their point set through the pipeline") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 30; ++i) {
    Formula f = testing::random_sentence(rng, i % 3, 2, 3, 2, 6, true);
    if (f.blocks.size() > 1 && f.blocks.back().quant != Quant::Exists) continue;
    auto want = brute_force_count(f).count;
    PipelineTrace tr = normalize_pipeline(f);
    for (const auto& [name, g] : tr.stages()) {
      CAPTURE(name);
      CHECK(brute_force_count(g).count == want);
    }
  }
}
