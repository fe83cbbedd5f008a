#include "doctest.h"

#include "shortpa/polyhedra.hpp"

#include <random>

using namespace shortpa;

namespace {

HPolyhedron rows2(std::initializer_list<std::tuple<int, int, int>> rs) {
  HPolyhedron p(2);
  for (auto [a, b, c] : rs) p.add_row(IntVec{a, b}, Int(c));
  return p;
}

std::vector<RatVec> rv(std::initializer_list<std::pair<int, int>> pts) {
  std::vector<RatVec> out;
  for (auto [x, y] : pts) out.push_back({Rational(x), Rational(y)});
  std::sort(out.begin(), out.end());
  return out;
}

HPolyhedron random_polytope(std::mt19937_64& rng, std::size_t n, int rows, int coef, int box) {
  std::uniform_int_distribution<int> c(-coef, coef), r(-box, box * 2);
  HPolyhedron p(n);
  p.add_box(-box, box);
  for (int i = 0; i < rows; ++i) {
    IntVec a(n);
    for (auto& x : a) x = c(rng);
    p.add_row(a, Int(r(rng)), i % 4 == 3);
  }
  return p;
}

// Bounding-box scan: the independent oracle for lattice enumeration.
std::vector<IntVec> box_scan(const HPolyhedron& p, int lo, int hi) {
  std::vector<IntVec> out;
  IntVec x(p.dim, Int(lo));
  while (true) {
    if (contains(p, x)) out.push_back(x);
    std::size_t j = p.dim;
    while (j > 0) {
      --j;
      if (x[j] < hi) {
        ++x[j];
        for (std::size_t k = j + 1; k < p.dim; ++k) x[k] = lo;
        break;
      }
      if (j == 0) return out;
    }
    if (p.dim == 0) return out;
  }
}

}  // namespace

TEST_CASE("vertices from facets") {
  auto square = rows2({{1, 0, 1}, {-1, 0, 0}, {0, 1, 1}, {0, -1, 0}});
  CHECK(vertices_from_facets(square).vertices == rv({{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  auto tri = rows2({{-1, 0, 0}, {0, -1, 0}, {1, 1, 3}});
  CHECK(vertices_from_facets(tri).vertices == rv({{0, 0}, {3, 0}, {0, 3}}));
  HPolyhedron bad(1);
  bad.add_row(IntVec{1}, Int(0));
  bad.add_row(IntVec{-1}, Int(-1));
  CHECK_THROWS_AS(vertices_from_facets(bad), Error);
  auto open = rows2({{-1, 0, 0}, {0, -1, 0}});
  CHECK_THROWS_AS(vertices_from_facets(open), Error);
  HPolyhedron big(7);
  CHECK_THROWS_AS(vertices_from_facets(big), Error);
}

TEST_CASE("vertex sets ignore positive row scaling") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    HPolyhedron p = random_polytope(rng, 2 + t % 2, 3, 5, 4);
    if (is_empty(p)) continue;
    HPolyhedron q = p;
    for (std::size_t i = 0; i < q.rows(); ++i) {
      Rational s(1 + static_cast<int>(i % 3), 1 + static_cast<int>(i % 5));
      for (auto& x : q.A[i]) x *= s;
      q.b[i] *= s;
    }
    CHECK(vertices_from_facets(p).vertices == vertices_from_facets(q).vertices);
  }
}

TEST_CASE("facets from vertices") {
  VPolytope sq{2, rv({{0, 0}, {1, 0}, {0, 1}, {1, 1}})};
  HPolyhedron h = facets_from_vertices(sq);
  CHECK(h.rows() == 4);
  for (int x = -2; x <= 3; ++x)
    for (int y = -2; y <= 3; ++y) CHECK(contains(h, IntVec{x, y}) == (0 <= x && x <= 1 && 0 <= y && y <= 1));

  HPolyhedron pt = facets_from_vertices(VPolytope{2, rv({{2, 5}})});
  CHECK(pt.rows() == 4);
  CHECK(contains(pt, IntVec{2, 5}));
  CHECK_FALSE(contains(pt, IntVec{2, 4}));
  CHECK(vertices_from_facets(pt).vertices == rv({{2, 5}}));

  HPolyhedron seg = facets_from_vertices(VPolytope{2, rv({{0, 0}, {2, 2}})});
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> num(-12, 30), den(1, 6);
  for (int i = 0; i < 500; ++i) {
    Rational x(num(rng), den(rng));
    Rational y = i % 2 ? x : Rational(num(rng), den(rng));
    bool inside = x == y && x >= 0 && x <= 2;
    CHECK(contains(seg, RatVec{x, y}) == inside);
  }
}

TEST_CASE("facets and vertices round trip on solution sets") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 7);
  int tested = 0;
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 2 + t % 3;
    HPolyhedron p = random_polytope(rng, n, 3 + t % 3, 4, 3);
    std::fill(p.strict.begin(), p.strict.end(), false);
    if (is_empty(p)) continue;
    ++tested;
    HPolyhedron q = facets_from_vertices(vertices_from_facets(p));
    for (int i = 0; i < 1000 / 20; ++i) {
      RatVec x(n);
      for (auto& c : x) c = Rational(num(rng), den(rng) * 2);
      CHECK(contains(p, x) == contains(q, x));
    }
    // Vertices are on the boundary of both.
    for (const auto& v : vertices_from_facets(p).vertices) CHECK(contains(q, v));
  }
  CHECK(tested > 20);
}

TEST_CASE("lower dimensional hulls carry equalities") {
  // Triangle inside the plane x + y + z = 3.
  VPolytope v{3, {{Rational(3), Rational(0), Rational(0)}, {Rational(0), Rational(3), Rational(0)},
                  {Rational(0), Rational(0), Rational(3)}}};
  HPolyhedron h = facets_from_vertices(v);
  auto pts = enumerate_lattice_points(h);
  CHECK(pts.size() == 10);
  for (const auto& p : pts) CHECK(p[0] + p[1] + p[2] == 3);
  CHECK(vertices_from_facets(h).vertices.size() == 3);
}

TEST_CASE("lattice point enumeration") {
  auto tri = rows2({{-1, 0, 0}, {0, -1, 0}, {1, 1, 2}});
  CHECK(enumerate_lattice_points(tri).size() == 6);

  HPolyhedron half(1);
  half.add_row(IntVec{-1}, Int(0));
  half.add_row(IntVec{1}, Int(3), true);
  CHECK(enumerate_lattice_points(half) == std::vector<IntVec>{{0}, {1}, {2}});

  HPolyhedron empty(1);
  empty.add_row(IntVec{1}, Int(0));
  empty.add_row(IntVec{-1}, Int(-1));
  CHECK(enumerate_lattice_points(empty).empty());

  HPolyhedron ray(1);
  ray.add_row(IntVec{-1}, Int(0));
  CHECK_THROWS_AS(enumerate_lattice_points(ray), Error);

  HPolyhedron many(2);
  many.add_box(0, 99);
  CHECK_THROWS_AS(enumerate_lattice_points(many, 50), Error);
}

TEST_CASE("lattice enumeration equals a bounding box scan") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 80; ++t) {
    std::size_t n = 1 + t % 3;
    HPolyhedron p = random_polytope(rng, n, 2 + t % 4, 6, 5);
    auto pts = enumerate_lattice_points(p);
    CHECK(pts == box_scan(p, -5, 5));
    if (!pts.empty()) {
      CHECK(integer_lexmin(p) == pts.front());
    } else {
      CHECK_FALSE(integer_lexmin(p).has_value());
    }
  }
}

TEST_CASE("scanner with a fixed prefix") {
  // {(z, x) : 2x <= z, z <= 2x + 1, 0 <= x <= 10}
  HPolyhedron p(2);
  p.add_row(IntVec{-1, 2}, Int(0));
  p.add_row(IntVec{1, -2}, Int(1));
  p.add_row(IntVec{0, 1}, Int(10));
  p.add_row(IntVec{0, -1}, Int(0));
  LatticeScanner s(p);
  for (int z = -3; z <= 25; ++z) {
    auto pt = s.first(IntVec{z});
    CHECK(pt.has_value() == (z >= 0 && z <= 21));
    if (pt) CHECK((*pt)[1] == z / 2);
  }
}

TEST_CASE("membership and emptiness") {
  auto square = rows2({{1, 0, 1}, {-1, 0, 0}, {0, 1, 1}, {0, -1, 0}});
  CHECK(contains(square, IntVec{1, 1}));
  HPolyhedron open_top = square;
  open_top.strict[2] = true;
  CHECK_FALSE(contains(open_top, IntVec{1, 1}));
  HPolyhedron bad(1);
  bad.add_row(IntVec{1}, Int(0));
  bad.add_row(IntVec{-1}, Int(-1));
  CHECK(is_empty(bad));
  HPolyhedron ray(1);
  ray.add_row(IntVec{-1}, Int(0));
  CHECK_FALSE(is_empty(ray));
  // 0 <= x < 0 is empty only because of strictness.
  HPolyhedron pinch(1);
  pinch.add_row(IntVec{-1}, Int(0));
  pinch.add_row(IntVec{1}, Int(0), true);
  CHECK(is_empty(pinch));
  CHECK(is_empty_lp(pinch));
}

TEST_CASE("Fourier-Motzkin and simplex agree on emptiness") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> c(-5, 5), r(-6, 6);
  int empties = 0;
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + t % 4;
    HPolyhedron p(n);
    int m = 2 + t % 6;
    for (int i = 0; i < m; ++i) {
      IntVec a(n);
      for (auto& x : a) x = c(rng);
      p.add_row(a, Int(r(rng)), (t + i) % 3 == 0);
    }
    bool fm = is_empty_fm(p);
    CHECK(fm == is_empty_lp(p));
    empties += fm;
  }
  CHECK(empties > 10);
}

TEST_CASE("linear programming") {
  auto tri = rows2({{-1, 0, 0}, {0, -1, 0}, {1, 1, 3}});
  LpResult r = lp_maximize(tri, {Rational(2), Rational(1)});
  CHECK(r.status == LpResult::Status::Optimal);
  CHECK(r.value == 6);
  HPolyhedron ray(1);
  ray.add_row(IntVec{-1}, Int(0));
  CHECK(lp_maximize(ray, {Rational(1)}).status == LpResult::Status::Unbounded);
  CHECK(is_bounded(tri));
  CHECK_FALSE(is_bounded(ray));
}

TEST_CASE("projection") {
  // Project the triangle x,y >= 0, x + y <= 3 onto x.
  auto tri = rows2({{-1, 0, 0}, {0, -1, 0}, {1, 1, 3}});
  HPolyhedron p = fm_project(tri, 1);
  for (int x = -2; x <= 5; ++x) CHECK(contains(p, IntVec{x}) == (x >= 0 && x <= 3));
}

TEST_CASE("extreme rays of cones") {
  // Quadrant.
  IntMatrix h{{1, 0}, {0, 1}};
  CHECK(extreme_rays(h) == IntMatrix{{0, 1}, {1, 0}});
  // Cone over a square: x, y in [0, z].
  IntMatrix sq{{1, 0, 0}, {0, 1, 0}, {-1, 0, 1}, {0, -1, 1}};
  CHECK(extreme_rays(sq).size() == 4);
  CHECK_THROWS_AS(extreme_rays(IntMatrix{{1, 0}}), Error);
}

TEST_CASE("intervals") {
  Interval i = Interval::half_open(Rational(1, 2), Rational(3));
  CHECK(i.first_integer() == Int(1));
  CHECK(i.last_integer() == Int(2));
  CHECK_FALSE(i.contains(Rational(3)));
  Interval e = Interval::half_open(Rational(1, 3), Rational(2, 3));
  CHECK_FALSE(e.has_integers());
}
