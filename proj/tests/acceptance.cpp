// Acceptance run: one PASS/FAIL line per criterion. Arguments select a
// subset of criteria by number; no arguments runs all seven.

#include "shortpa/bench.hpp"
#include "shortpa/io.hpp"
#include "shortpa/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace shortpa;

namespace {

using clk = std::chrono::steady_clock;

double since(clk::time_point t) { return std::chrono::duration<double>(clk::now() - t).count(); }

long uni(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 1) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(prec);
  s << x;
  return s.str();
}

// Traces gathered by the decision and counting runs, read by the F2 check.
std::vector<DecisionTrace> g_traces;
bool g_traces_complete = false;

CorpusParams sentence_params() {
  CorpusParams p;
  p.count = 500;
  p.kmin = 1;
  p.kmax = 4;
  p.nmax = 2;
  p.amax = 3;
  p.lmax = 5;
  p.cmax = 8;
  return p;
}

CorpusParams counting_params() {
  CorpusParams p;
  p.count = 200;
  p.free = true;
  p.kmin = 0;
  p.kmax = 3;
  p.free_nmax = 2;
  p.Nmax = 32;
  return p;
}

constexpr double kTimeLimit = 600;

Verdict decision_equivalence() {
  auto corpus = generate_corpus(1, sentence_params());
  std::size_t mismatches = 0, errors = 0;
  double solve = 0, oracle = 0;
  std::set<std::size_t> ks;
  for (const auto& e : corpus) {
    ks.insert(e.formula.blocks.size());
    DecisionTrace tr;
    bool got = false;
    auto t0 = clk::now();
    try {
      got = decide(e.formula, {}, &tr);
    } catch (const Error& err) {
      ++errors;
      std::cerr << e.name << ": " << err.what() << "\n";
      continue;
    }
    solve += since(t0);
    auto t1 = clk::now();
    const bool want = brute_force_decide(e.formula);
    oracle += since(t1);
    if (got != want) {
      ++mismatches;
      std::cerr << e.name << " mismatch: " << print_formula(e.formula) << "\n";
    }
    tr.nodes.clear();
    tr.nodes.shrink_to_fit();
    g_traces.push_back(std::move(tr));
  }
  const double total = solve + oracle;
  Verdict v;
  v.pass = mismatches == 0 && errors == 0 && total <= kTimeLimit && ks == std::set<std::size_t>{1, 2, 3, 4};
  v.detail = std::to_string(corpus.size()) + " sentences, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(errors) + " errors, decide " + fmt(solve) + " s + oracle " + fmt(oracle) + " s";
  return v;
}

Verdict counting_equivalence() {
  auto corpus = generate_corpus(2, counting_params());
  std::size_t mismatches = 0, errors = 0;
  auto t0 = clk::now();
  for (const auto& e : corpus) {
    const Formula& f = e.formula;
    const std::size_t n = f.blocks[0].dim;
    DecisionTrace tr;
    ShortGF g;
    try {
      g = count_gf(f, e.N, {}, &tr);
    } catch (const Error& err) {
      ++errors;
      std::cerr << e.name << ": " << err.what() << "\n";
      continue;
    }
    Formula boxed = f;
    boxed.blocks[0].bound = Bound{-e.N, e.N};
    CountResult want = brute_force_count(boxed);
    Expansion got = expand(g, IntVec(n, -e.N), IntVec(n, e.N));
    Expansion ind;
    for (const auto& p : want.points) ind[p] = 1;
    if (got != ind || count(g) != want.count) {
      ++mismatches;
      std::cerr << e.name << " mismatch (N = " << e.N << "): " << print_formula(f) << "\n";
    }
    tr.nodes.clear();
    g_traces.push_back(std::move(tr));
  }
  const double total = since(t0);
  Verdict v;
  v.pass = mismatches == 0 && errors == 0 && total <= kTimeLimit;
  v.detail = std::to_string(corpus.size()) + " formulas, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(errors) + " errors, " + fmt(total) + " s";
  return v;
}

std::set<IntVec> lattice_set(const HPolyhedron& p, std::size_t keep, std::size_t cap) {
  std::set<IntVec> out;
  for (const auto& x : enumerate_lattice_points(p, cap)) out.insert(IntVec(x.begin(), x.begin() + static_cast<long>(keep)));
  return out;
}

Verdict stagewise_soundness() {
  // The stage-wise corpus keeps l_i <= 4: the disassociated stage has a wide
  // innermost block that the oracle enumerates exhaustively.
  CorpusParams params = sentence_params();
  params.lmax = 4;
  auto corpus = generate_corpus(1, params);
  OracleOptions opt;
  opt.cap = 200'000'000;
  std::size_t checks = 0, failures = 0, projections = 0, projection_failures = 0, errors = 0;
  auto t0 = clk::now();
  for (const auto& e : corpus) {
    // The pipeline takes sentences ending in an existential block.
    const Formula f = e.formula.blocks.back().quant == Quant::Forall ? negate(e.formula) : e.formula;
    const bool truth = brute_force_decide(f, opt);
    for (auto style : {LiftStyle::Compact, LiftStyle::Lifted}) {
      try {
        PipelineTrace tr = normalize_pipeline(f, style);
        for (const auto& [name, g] : tr.stages()) {
          ++checks;
          if (brute_force_decide(g, opt) != truth) {
            ++failures;
            std::cerr << e.name << " stage " << name << " changes the truth value\n";
          }
        }
        // Integer points of R project onto the union of the DNF systems.
        const HPolyhedron& R = tr.lifting.R;
        if (R.dim <= 5) {
          ++projections;
          HPolyhedron box(tr.dnf.dim);
          std::size_t c = 0;
          for (const auto& b : tr.bounded.formula.blocks)
            for (std::size_t j = 0; j < b.dim; ++j, ++c) {
              IntVec a(tr.dnf.dim, Int(0));
              a[c] = 1;
              box.add_row(a, b.bound->hi);
              a[c] = -1;
              box.add_row(a, -b.bound->lo);
            }
          std::set<IntVec> want;
          for (const auto& s : tr.dnf.systems) {
            HPolyhedron p = s;
            for (std::size_t r = 0; r < box.rows(); ++r) p.add_row(box.A[r], box.b[r]);
            for (const auto& x : lattice_set(p, tr.dnf.dim, 5'000'000)) want.insert(x);
          }
          if (lattice_set(R, tr.dnf.dim, 5'000'000) != want) {
            ++projection_failures;
            std::cerr << e.name << " projection property fails\n";
          }
        }
      } catch (const Error& err) {
        ++errors;
        std::cerr << e.name << ": " << err.what() << "\n";
      }
    }
  }
  Verdict v;
  v.pass = failures == 0 && projection_failures == 0 && errors == 0 && projections > 0;
  v.detail = std::to_string(checks) + " stage checks over " + std::to_string(corpus.size()) + " sentences (l <= 4) x 2 styles, " +
             std::to_string(failures) + " failures; projection property on " + std::to_string(projections) +
             " liftings with dim <= 5, " + std::to_string(projection_failures) + " failures; " + std::to_string(errors) +
             " errors, " + fmt(since(t0)) + " s";
  return v;
}

ParametricSystem random_system(std::mt19937_64& rng) {
  const std::size_t n = static_cast<std::size_t>(uni(rng, 1, 2));
  ParametricSystem s;
  for (std::size_t i = 0; i < n; ++i)
    for (int sgn : {1, -1}) {
      IntVec a(n, 0);
      a[i] = sgn;
      s.A.push_back(a);
      s.alpha.push_back(uni(rng, 0, 1));
      s.nu.push_back(uni(rng, 0, 8));
    }
  const long extra = uni(rng, 0, 6 - static_cast<long>(2 * n));
  for (long r = 0; r < extra; ++r) {
    IntVec a(n);
    for (auto& x : a) x = uni(rng, -8, 8);
    s.A.push_back(a);
    s.alpha.push_back(uni(rng, -8, 8));
    s.nu.push_back(uni(rng, -8, 8));
  }
  const long lo = uni(rng, -20, 20);
  s.z_range = Interval::closed(lo, lo + uni(rng, 0, 200));
  return s;
}

Verdict kpt_contract() {
  std::mt19937_64 rng(4);
  std::size_t failures = 0, enum_total = 0, merged_total = 0;
  const std::size_t systems = 300;
  for (std::size_t i = 0; i < systems; ++i) {
    ParametricSystem s = random_system(rng);
    for (auto p : {Provider::Enumerative, Provider::Merged}) {
      KPTResult r = kpt_partition_1d(s, p);
      KptCheck c = verify_kpt(r, s);
      if (!c.ok) {
        ++failures;
        std::cerr << "system " << i << ": " << c.reason << "\n";
      }
      (p == Provider::Enumerative ? enum_total : merged_total) += r.pieces.size();
    }
  }
  ParametricSystem eo{{{2}, {-2}}, {1, -1}, {0, 0}, Interval::closed(0, 10)};
  KPTResult e = kpt_partition_1d(eo, Provider::Enumerative), m = kpt_partition_1d(eo, Provider::Merged);
  const bool eo_ok = verify_kpt(e, eo).ok && verify_kpt(m, eo).ok && m.pieces.size() <= 2 && m.pieces.size() < e.pieces.size();
  Verdict v;
  v.pass = failures == 0 && eo_ok;
  v.detail = std::to_string(systems) + " systems x 2 providers, " + std::to_string(failures) + " failures (pieces " +
             std::to_string(enum_total) + " enumerative, " + std::to_string(merged_total) + " merged); even/odd " +
             std::to_string(e.pieces.size()) + " -> " + std::to_string(m.pieces.size()) + " pieces";
  return v;
}

Verdict gf_calculus() {
  std::mt19937_64 rng(5);
  std::size_t poly_ok = 0, poly = 0;
  while (poly < 100) {
    const std::size_t n = static_cast<std::size_t>(uni(rng, 1, 3));
    const long r = n == 1 ? uni(rng, 5, 5000) : (n == 2 ? uni(rng, 3, 150) : uni(rng, 2, 22));
    HPolyhedron p(n);
    p.add_box(Int(-r), Int(r));
    for (int k = 0; k < 3; ++k) {
      IntVec a(n);
      for (auto& x : a) x = uni(rng, -4, 4);
      p.add_row(a, Int(uni(rng, 0, 3 * r)), uni(rng, 0, 4) == 0);
    }
    std::vector<IntVec> pts;
    try {
      pts = enumerate_lattice_points(p, 100'000);
    } catch (const Error&) {
      continue;  // over the point cap
    }
    ++poly;
    ShortGF g = polyhedron_gf(p);
    bool ok = count(g) == Int(pts.size());
    if (ok && pts.size() <= 5000) {
      Expansion want;
      for (const auto& x : pts) want[x] = 1;
      ok = expand(g, IntVec(n, -r - 1), IntVec(n, r + 1)) == want;
    }
    poly_ok += ok;
  }

  std::size_t pack_ok = 0;
  const std::size_t packs = 50;
  for (std::size_t it = 0; it < packs; ++it) {
    std::set<IntVec> keep;
    ShortGF f = box_gf({0, 0}, {7, 7});
    const long density = uni(rng, 1, 5);
    for (long x = 0; x < 8; ++x)
      for (long y = 0; y < 8; ++y) {
        if (uni(rng, 0, 5) < density)
          keep.insert({x, y});
        else
          f.terms.push_back({Rational(-1), {x, y}, {}});
      }
    Expansion want;
    for (const auto& x : keep) want[x] = 1;
    pack_ok += expand(unpack(pack(f, 3), 2, 3), {-1, -1}, {8, 8}) == want;
  }

  std::size_t tau_ok = 0;
  const std::size_t taus = 50;
  for (std::size_t it = 0; it < taus; ++it) {
    ShortGF a(2);
    for (int k = 0; k < 2; ++k) {
      IntVec lo = {uni(rng, 0, 3), uni(rng, 0, 3)};
      IntVec hi = {lo[0] + uni(rng, 0, 4), lo[1] + uni(rng, 0, 4)};
      a = gf_add(a, gf_scale(Rational(uni(rng, 1, 2)), box_gf(lo, hi)));
    }
    if (uni(rng, 0, 1)) a.terms.push_back({Rational(1), {uni(rng, 0, 2), uni(rng, 0, 2)}, {{1, 1}, {0, 1}}});
    ShortGF b(1);
    const long step = uni(rng, 1, 4), first = uni(rng, 0, 6);
    b.terms.push_back({Rational(1), {first}, {{step}}});
    if (uni(rng, 0, 1)) b.terms.push_back({Rational(-1), {first + step * uni(rng, 1, 6)}, {{step}}});
    b.terms.push_back({Rational(uni(rng, 1, 3)), {uni(rng, 0, 20)}, {}});
    const long w2 = uni(rng, 1, 5);
    TauMap tau{{1, w2}};
    const long w = 14;
    Expansion ea = expand(a, {0, 0}, {w, w});
    Expansion eb = expand(b, {0}, {w * (1 + w2)});
    Expansion want;
    for (const auto& [x, c] : ea) {
      auto hit = eb.find({tau.apply(x)});
      if (hit != eb.end()) want[x] += c * hit->second;
    }
    for (auto it2 = want.begin(); it2 != want.end();) it2 = it2->second == 0 ? want.erase(it2) : std::next(it2);
    tau_ok += expand(tau_hadamard(a, b, tau), {0, 0}, {w, w}) == want;
  }

  FloorFragment fl;
  fl.param = "b";
  fl.var = "t";
  fl.p = {1};
  fl.q = {0};
  fl.d = {5};
  fl.rows.push_back({{Rational(1)}, Rational(1, 2), Rational(3), Rational(0)});
  fl.polarity = Polarity::Exists;
  const auto ex = fl.lines();
  const bool ex_sem = brute_force_count(fl.to_formula(Bound{0, 30})).count == 15;
  fl.polarity = Polarity::Forall;
  const auto fa = fl.lines();
  const bool fa_sem = brute_force_count(fl.to_formula(Bound{0, 30})).count == 15;
  const bool floor_ok = ex == std::vector<std::string>{"t <= b/5", "t > b/5 - 1", "1/2 + t <= 3"} &&
                        fa == std::vector<std::string>{"t > b/5", "t <= b/5 - 1", "1/2 + t <= 3"} && ex_sem && fa_sem;

  Verdict v;
  v.pass = poly_ok == poly && pack_ok == packs && tau_ok == taus && floor_ok;
  v.detail = "polyhedron_gf " + std::to_string(poly_ok) + "/" + std::to_string(poly) + ", pack/unpack " +
             std::to_string(pack_ok) + "/" + std::to_string(packs) + ", tau_hadamard " + std::to_string(tau_ok) + "/" +
             std::to_string(taus) + ", floor encodings " + (floor_ok ? "verbatim" : "DIFFER");
  return v;
}

Verdict f2_bound() {
  if (!g_traces_complete) {
    // Run on its own: gather the decision traces first.
    decision_equivalence();
    counting_equivalence();
  }
  std::size_t nodes = 0, violations = 0, max_f2 = 0;
  for (const auto& t : g_traces) {
    nodes += t.node_count;
    max_f2 = std::max(max_f2, t.max_f2);
    violations += !t.f2_bound_held;
  }
  Verdict v;
  v.pass = violations == 0 && nodes > 0;
  v.detail = std::to_string(nodes) + " recursion nodes over " + std::to_string(g_traces.size()) + " runs, " +
             std::to_string(violations) + " runs with |F2| > r, largest |F2| " + std::to_string(max_f2);
  return v;
}

Verdict scaling() {
  std::vector<std::size_t> bits;
  for (std::size_t b = 8; b <= 64; b += 8) bits.push_back(b);
  auto s = scaling_series(bits, 3);
  const double slope = loglog_slope(s);
  bool agree = true;
  std::string series;
  for (const auto& p : s) {
    agree = agree && p.result == p.oracle;
    series += " " + std::to_string(p.x) + ":" + fmt(p.seconds * 1000, 1) + "ms";
  }
  auto r = range_series({1, 2, 3, 4, 5, 6});
  std::string ranges;
  for (const auto& p : r) {
    agree = agree && p.result == p.oracle;
    ranges += " " + std::to_string(p.x) + ":" + fmt(p.seconds * 1000, 1) + "ms/" + std::to_string(p.kpt_pieces);
  }
  std::cerr << "informational, range bits : seconds / KPT pieces:" << ranges << "\n";
  Verdict v;
  v.pass = slope <= 3 && agree;
  v.detail = "log-log slope " + fmt(slope, 3) + " over bits" + series + (agree ? "" : "; oracle DISAGREES");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"oracle decision equivalence", decision_equivalence},
      {"oracle counting equivalence", counting_equivalence},
      {"stage-wise normalization soundness", stagewise_soundness},
      {"KPT contract", kpt_contract},
      {"GF calculus", gf_calculus},
      {"|F2| <= r at every recursion node", f2_bound},
      {"soft scaling in constant bit length", scaling},
  };
  std::set<std::size_t> pick;
  for (int i = 1; i < argc; ++i) pick.insert(static_cast<std::size_t>(std::stoul(argv[i])));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!pick.empty() && !pick.count(i + 1)) continue;
    if (i == 5 && (pick.empty() || (pick.count(1) && pick.count(2)))) g_traces_complete = true;
    auto t0 = clk::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.detail = std::string("exception: ") + e.what();
    }
    all = all && v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << i + 1 << ". " << criteria[i].first << ": " << v.detail << " ["
              << fmt(since(t0)) << " s]" << std::endl;
  }
  return all ? 0 : 1;
}
