#include "doctest.h"

#include "shortpa/oracle.hpp"
#include "shortpa/solver.hpp"
#include "test_support.hpp"

#include <random>

using namespace shortpa;

namespace {

std::set<IntVec> indicator(const ShortGF& g, std::size_t n, const Int& N) {
  std::set<IntVec> out;
  for (const auto& [x, c] : expand(g, IntVec(n, -N), IntVec(n, N))) {
    CHECK(c == 1);
    out.insert(x);
  }
  return out;
}

}  // namespace

TEST_CASE("decision examples") {
  CHECK_FALSE(decide(parse_formula("E x:1 in [0,10] : (= (* 3 x) 7)")));
  CHECK(decide(parse_formula("A y:1 in [0,20] E x:1 in [0,20] : (and (<= (* 2 x) y) (<= y (+ (* 2 x) 1)))")));
  DecisionTrace tr;
  CHECK(decide(parse_formula("E z:1 in [0,3] A y:1 in [0,3] E x:1 in [0,7] : "
                             "(and (<= (* 2 x) (+ y z)) (<= (+ y z) (+ (* 2 x) 1)))"),
               {}, &tr));
  CHECK(tr.quants.size() == 2);
  CHECK(tr.f2_bound_held);
  CHECK(tr.node_count >= 1);
  CHECK_FALSE(decide(parse_formula("A y:1 in [0,20] E x:1 in [0,20] : (= (* 2 x) y)")));
  CHECK(decide(parse_formula("E x:1 in [0,3] A y:1 in [0,3] : (<= y (+ x 3))")));
  CHECK_THROWS_AS(decide(parse_formula("free p:1 in [0,3] E x:1 in [0,3] : (<= x p)")), Error);
}

TEST_CASE("counting examples") {
  Formula f = parse_formula("free x:1 in [0,1] E y:1 in [0,20] : (= x (* 3 y))");
  ShortGF g = count_gf(f, 10);
  CHECK(indicator(g, 1, 10) == std::set<IntVec>{{0}, {3}, {6}, {9}});
  CHECK(count(f, 10) == 4);
  Formula neg = parse_formula("free x:1 in [0,1] E y:1 in [-7,7] : (= x (* 3 y))");
  CHECK(count(neg, 10) == 7);
  CHECK(indicator(count_gf(neg, 10), 1, 10) == std::set<IntVec>{{-9}, {-6}, {-3}, {0}, {3}, {6}, {9}});
  CHECK(count(parse_formula("free x:1 in [0,1] E y:1 in [0,3] : (< y 0)"), 10) == 0);
  CHECK(count(parse_formula("free x:1 in [0,1] E y:1 in [0,3] : (<= y 3)"), 5) == 11);
  CHECK(count(parse_formula("free x:2 in [0,1] A y:1 in [0,3] : (<= (+ x.1 y) (+ x.2 3))"), 2) == 15);
}

TEST_CASE("decide agrees with the oracle and with its negation") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 160; ++i) {
    int k = 1 + i % 4;
    int lmax = k >= 3 ? 2 : 3;
    Formula f = testing::random_sentence(rng, k, 2, 3, lmax, 8, false);
    CAPTURE(print_formula(f));
    DecisionTrace tr;
    const bool truth = brute_force_decide(f);
    CHECK(decide(f, {}, &tr) == truth);
    CHECK(tr.f2_bound_held);
    CHECK(decide(negate(f)) == !truth);
    SolverOptions lifted;
    lifted.style = LiftStyle::Lifted;
    lifted.provider = Provider::Merged;
    CHECK(decide(f, lifted) == truth);
  }
}

TEST_CASE("count_gf agrees with the oracle") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 60; ++i) {
    int k = i % 3;
    Formula f = testing::random_sentence(rng, k, 2, 3, 2, 6, true);
    f.blocks[0].dim = 1 + i % 2;
    f.matrix = testing::random_expr(rng, f.blocks, testing::uniform(rng, 1, 3), 6);
    Int N = testing::uniform(rng, 1, 6);
    CAPTURE(print_formula(f));
    CAPTURE(N);
    Formula boxed = f;
    boxed.blocks[0].bound = Bound{-N, N};
    auto want = brute_force_count(boxed);
    ShortGF g = count_gf(f, N);
    auto got = indicator(g, f.blocks[0].dim, N);
    CHECK(got == std::set<IntVec>(want.points.begin(), want.points.end()));
    CHECK(count(g) == want.count);
  }
}

TEST_CASE("solver runs are deterministic") {
  Formula f = parse_formula("E a:1 in [0,7] A b:1 in [0,7] E x:2 in [0,7] : (or (<= (+ a b) (+ x.1 x.2)) (= x.1 b))");
  DecisionTrace t1, t2;
  CHECK(decide(f, {}, &t1) == decide(f, {}, &t2));
  CHECK(t1.node_count == t2.node_count);
  CHECK(t1.kpt_pieces == t2.kpt_pieces);
  CHECK(t1.work == t2.work);
  Formula c = parse_formula("free p:2 in [0,1] E x:1 in [0,7] : (<= (+ p.1 p.2) (* 2 x))");
  CHECK(sorted(count_gf(c, 4)) == sorted(count_gf(c, 4)));
}

TEST_CASE("parametric system of the disassociated form") {
  Formula f = parse_formula("A y:1 in [0,7] E x:1 in [0,7] : (= (* 2 x) y)");
  DisassociatedForm d = normalize_pipeline(f).result;
  ParametricSystem s = parametric_system(d);
  CHECK(s.z_range == Interval::closed(0, 7));
  KPTResult r = kpt_partition_1d(s, Provider::Merged);
  CHECK(verify_kpt(r, s).ok);
  CHECK(r.pieces.size() <= 2);
}
