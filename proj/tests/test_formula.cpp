#include "doctest.h"

#include "shortpa/formula.hpp"
#include "shortpa/oracle.hpp"
#include "test_support.hpp"

#include <random>

using namespace shortpa;

TEST_CASE("parse reports class parameters") {
  Formula f = parse_formula("E x:1 : (<= x 5)");
  auto c = sentence_class(f);
  CHECK(c.k == 1);
  CHECK(c.nbar == std::vector<std::size_t>{1});
  CHECK(c.a == 1);

  Formula g = parse_formula("A y:1 in [0,7] E x:1 : (and (<= (* 2 x) y) (<= y (+ (* 2 x) 1)))");
  CHECK(sentence_class(g).k == 2);
  CHECK(sentence_class(g).a == 2);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_formula("E x:1 (<= x 5)"), Error);
  CHECK_THROWS_AS(parse_formula("E x:1 : (<= y 5)"), Error);
  CHECK_THROWS_AS(parse_formula("E x:1 E y:1 : (<= x y)"), Error);
  try {
    parse_formula("E x:1 :\n  (<= x 5");
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("parse accepts comments, coordinates, rationals and half-open bounds") {
  Formula f = parse_formula(
      "# a comment line\n"
      "free p:2 in [0,4)\n"
      "E q:1 in [0,3] : (and (= p.1 p.2) (<= (* 1/2 q) 1))");
  CHECK(f.has_free());
  CHECK(f.blocks[0].bound->hi == 3);
  // 1/2 q <= 1 is scaled to q <= 2.
  const auto& atom = f.matrix.kids[1].atom;
  CHECK(atom.rhs == 2);
  CHECK(atom.coeffs.begin()->second == 1);
}

TEST_CASE("print then parse is the identity on the AST") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Formula f = testing::random_sentence(rng, 1 + i % 4, 2, 3, 3, 8, i % 3 == 0);
    Formula g = parse_formula(print_formula(f));
    CHECK(f == g);
  }
}

TEST_CASE("binary length accounting") {
  // (<= (* 2 x) 5): atom, term and rhs nodes (3) + coefficient 2 (bits 2, +1)
  // + constant 5 (bits 3, +1) = 3 + 3 + 4 = 10.
  Formula f = parse_formula("E x:1 in [0,0] : (<= (* 2 x) 5)");
  Formula g = parse_formula("E x:1 in [0,0] : (and (<= (* 2 x) 5))");
  std::size_t block = 1 + 2 + 1 + 1;  // node, dim 1, lo 0, hi 0
  CHECK(binary_length(f) == 10 + block);
  CHECK(binary_length(g) == 11 + block);

  Formula wider = parse_formula("E x:1 in [0,0] : (and (<= (* 2 x) 5) (<= x 1))");
  CHECK(binary_length(wider) > binary_length(g));

  // Doubling every constant's bit length at fixed structure adds exactly the
  // number of added bits.
  Formula a = parse_formula("E x:1 in [0,0] : (<= (* 3 x) 13)");
  Formula b = parse_formula("E x:1 in [0,0] : (<= (* 15 x) 253)");
  CHECK(binary_length(b) - binary_length(a) == (4 - 2) + (8 - 4));
}

TEST_CASE("bound_quantifiers") {
  Formula f = parse_formula("E x:1 : (= x 3)");
  Formula g = bound_quantifiers(f, {2});
  CHECK(g.blocks[0].bound == Bound{0, 3});
  CHECK(print_formula(g).find("in [0,3]") != std::string::npos);

  std::vector<std::string> warnings;
  Formula h = bound_quantifiers(parse_formula("E x:1 in [0,100] : (= x 3)"), {3}, &warnings);
  CHECK(h.blocks[0].bound == Bound{0, 7});
  CHECK(warnings.size() == 1);
  CHECK_THROWS_AS(bound_quantifiers(f, {1, 2}), Error);
}

TEST_CASE("brute force decision examples") {
  CHECK_FALSE(brute_force_decide(parse_formula("E x:1 in [0,10] : (and (<= (* 3 x) 7) (<= 7 (* 3 x)))")));
  CHECK(brute_force_decide(
      parse_formula("A y:1 in [0,20] E x:1 in [0,20] : (and (<= (* 2 x) y) (<= y (+ (* 2 x) 1)))")));
  CHECK(brute_force_decide(parse_formula("A y:1 in [3,2] : (<= y 0)")));
  CHECK_FALSE(brute_force_decide(parse_formula("E y:1 in [3,2] : (<= y 100)")));
  CHECK_THROWS_AS(brute_force_decide(parse_formula("E y:1 : (<= y 0)")), Error);
}

TEST_CASE("brute force decision agrees with an independent unpruned scan") {
  std::mt19937_64 rng(3);
  OracleOptions plain;
  plain.prune = false;
  for (int i = 0; i < 150; ++i) {
    Formula f = testing::random_sentence(rng, 1 + i % 3, 2, 3, 2, 8, false);
    CHECK(brute_force_decide(f) == brute_force_decide(f, plain));
    CHECK(brute_force_decide(f) == testing::naive_decide(f));
  }
}

TEST_CASE("negation flips the oracle's answer") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 150; ++i) {
    Formula f = testing::random_sentence(rng, 1 + i % 4, 2, 3, 2, 8, false);
    CHECK(brute_force_decide(negate(f)) == !brute_force_decide(f));
  }
}

TEST_CASE("parallel oracle matches sequential") {
  std::mt19937_64 rng(9);
  OracleOptions par;
  par.jobs = 3;
  for (int i = 0; i < 40; ++i) {
    Formula f = testing::random_sentence(rng, 2 + i % 2, 2, 3, 3, 8, false);
    CHECK(brute_force_decide(f, par) == brute_force_decide(f));
  }
}

TEST_CASE("oracle cap") {
  OracleOptions tiny;
  tiny.cap = 10;
  CHECK_THROWS_AS(brute_force_decide(parse_formula("A x:2 in [0,100] : (not (= (+ x.1 x.2) 77))"), tiny), Error);
  tiny.prune = false;
  CHECK_THROWS_AS(brute_force_decide(parse_formula("A x:2 in [0,100] : (<= x.1 1000)"), tiny), Error);
}

TEST_CASE("brute force counting examples") {
  auto r = brute_force_count(parse_formula("free x:1 in [0,20] E y:1 in [0,20] : (= x (* 3 y))"));
  CHECK(r.count == 7);
  CHECK(r.points == std::vector<IntVec>{{0}, {3}, {6}, {9}, {12}, {15}, {18}});
  CHECK(brute_force_count(parse_formula("free x:1 in [0,20] E y:1 in [0,2] : (and (<= x 1) (<= 2 x))")).count == 0);
  CHECK(brute_force_count(parse_formula("free x:2 in [0,3] : (= x.1 x.2)")).count == 4);
}

TEST_CASE("integer negation rules") {
  // not(x <= 3) is 4 <= x; x < 3 is x <= 2.
  Formula f = parse_formula("E x:1 in [0,9] : (not (<= x 3))");
  BoolExpr e = to_nnf(f.matrix);
  REQUIRE(e.kind == BoolExpr::Kind::Atom);
  CHECK(e.atom.rel == Rel::Le);
  CHECK(e.atom.rhs == -4);
  BoolExpr s = to_nnf(parse_formula("E x:1 in [0,9] : (< x 3)").matrix);
  CHECK(s.atom.rhs == 2);
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    Formula g = testing::random_sentence(rng, 1 + i % 3, 2, 3, 2, 8, false);
    Formula h = g;
    h.matrix = to_nnf(g.matrix);
    CHECK(brute_force_decide(g) == brute_force_decide(h));
  }
}

TEST_CASE("DBS splitting") {
  auto le = [](Int c, Int r) { return make_atom({{VarRef{0, 0}, c}}, Rel::Le, r); };
  Bound box{-64, 64};
  auto all_true = [](const std::vector<Formula>& fs) {
    for (const auto& f : fs)
      if (!brute_force_decide(f)) return false;
    return true;
  };
  std::vector<LinearAtom> feasible{le(-1, 0), le(1, 10), le(-1, -4)};
  auto split = dbs_split(feasible, 1, box);
  CHECK(split.size() == 3);
  for (const auto& f : split) CHECK(atom_count(f.matrix) == 2);
  CHECK(all_true(split));

  auto ident = dbs_split({le(1, 3), le(-1, 0)}, 1, box);
  CHECK(ident.size() == 1);

  std::vector<LinearAtom> infeasible{le(1, 3), le(-1, -5), le(1, 10)};
  CHECK_FALSE(all_true(dbs_split(infeasible, 1, box)));

  // Random systems in up to two variables against the unsplit sentence.
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-8, 8);
  Bound wide{-300, 300};
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 1 + trial % 2;
    std::size_t m = 2 + trial % 4;
    std::vector<LinearAtom> rows;
    for (std::size_t i = 0; i < m; ++i) {
      std::map<VarRef, Int> c;
      for (std::size_t j = 0; j < n; ++j) c[VarRef{0, j}] = coef(rng);
      rows.push_back(make_atom(c, Rel::Le, coef(rng)));
    }
    // Box rows make every subsystem's witness small.
    for (std::size_t j = 0; j < n; ++j) {
      rows.push_back(make_atom({{VarRef{0, j}, 1}}, Rel::Le, 20));
      rows.push_back(make_atom({{VarRef{0, j}, -1}}, Rel::Le, 20));
    }
    auto parts = dbs_split(rows, n, wide);
    std::vector<BoolExpr> kids;
    for (const auto& r : rows) kids.push_back(BoolExpr::leaf(r));
    Formula whole;
    whole.blocks.push_back(QuantBlock{Quant::Exists, "x", n, wide});
    whole.matrix = BoolExpr::conj(kids);
    CHECK(all_true(parts) == brute_force_decide(whole));
  }
  CHECK_THROWS_AS(dbs_split(feasible, 5, box), Error);
}
