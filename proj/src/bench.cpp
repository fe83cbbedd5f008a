#include "shortpa/bench.hpp"

#include "shortpa/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace shortpa {

namespace {

Formula template_formula(const Int& p, const Int& q, const Int& r, const Int& s, const Int& t, const Int& hi) {
  auto atom = [](std::map<VarRef, Int> c, const Int& rhs) { return BoolExpr::leaf(make_atom(std::move(c), Rel::Le, rhs)); };
  Formula f;
  f.blocks = {QuantBlock{Quant::Exists, "a", 1, Bound{0, hi}}, QuantBlock{Quant::Forall, "b", 1, Bound{0, hi}},
              QuantBlock{Quant::Exists, "c", 1, Bound{0, hi}}};
  const VarRef a{0, 0}, b{1, 0}, c{2, 0};
  // p a + q b - s <= r c <= p a + q b + t
  f.matrix = BoolExpr::conj({atom({{a, p}, {b, q}, {c, -r}}, s), atom({{a, -p}, {b, -q}, {c, r}}, t)});
  return f;
}

ScalingPoint measure(const Formula& f, std::size_t x, std::size_t repeats, const SolverOptions& opt) {
  using clk = std::chrono::steady_clock;
  ScalingPoint pt;
  pt.x = x;
  std::vector<double> ts;
  for (std::size_t i = 0; i < std::max<std::size_t>(repeats, 1); ++i) {
    DecisionTrace tr;
    auto t0 = clk::now();
    pt.result = decide(f, opt, &tr);
    ts.push_back(std::chrono::duration<double>(clk::now() - t0).count());
    pt.kpt_pieces = tr.kpt_pieces;
  }
  std::sort(ts.begin(), ts.end());
  pt.seconds = ts[ts.size() / 2];
  pt.oracle = brute_force_decide(f);
  return pt;
}

}  // namespace

Formula scaling_formula(std::size_t bits, std::uint64_t seed) {
  if (bits < 6) throw input_error("scaling template needs at least 6 bits");
  std::mt19937_64 rng(seed + 1000003 * bits);
  const Int scale = pow2(bits - 5);
  auto constant = [&](long top) {
    Int low = 0;
    for (std::size_t i = 0; i + 5 < bits; ++i) low = 2 * low + static_cast<long>(rng() & 1);
    return Int(top) * scale + low / 8;
  };
  return template_formula(constant(3), constant(5), constant(8), constant(2), constant(6), 7);
}

Formula range_formula(std::size_t ell) {
  if (ell == 0) throw input_error("range template needs ell >= 1");
  return template_formula(3, 5, 8, 2, 6, pow2(ell) - 1);
}

std::vector<ScalingPoint> scaling_series(const std::vector<std::size_t>& bits, std::size_t repeats,
                                         const SolverOptions& opt) {
  std::vector<ScalingPoint> out;
  for (std::size_t b : bits) out.push_back(measure(scaling_formula(b), b, repeats, opt));
  return out;
}

std::vector<ScalingPoint> range_series(const std::vector<std::size_t>& ells, std::size_t repeats,
                                       const SolverOptions& opt) {
  std::vector<ScalingPoint> out;
  for (std::size_t l : ells) out.push_back(measure(range_formula(l), l, repeats, opt));
  return out;
}

double loglog_slope(const std::vector<ScalingPoint>& pts) {
  if (pts.size() < 2) return 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& p : pts) {
    const double x = std::log(static_cast<double>(p.x)), y = std::log(std::max(p.seconds, 1e-9));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0 : (n * sxy - sx * sy) / den;
}

}  // namespace shortpa
