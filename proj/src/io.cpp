#include "shortpa/io.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace shortpa {

namespace {

Json str(const Int& x) { return to_string(x); }
Json str(const Rational& x) { return to_string(x); }

Json vec(const IntVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(str(x));
  return a;
}

Json mat(const IntMatrix& m) {
  Json a = Json::array();
  for (const auto& r : m) a.push_back(vec(r));
  return a;
}

Int int_of(const Json& j) {
  if (j.is_string()) return parse_int(j.get<std::string>());
  if (j.is_number_integer()) return Int(j.get<long long>());
  throw input_error("expected an integer, got " + j.dump());
}

Rational rat_of(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  return Rational(int_of(j));
}

IntVec vec_of(const Json& j) {
  if (!j.is_array()) throw input_error("expected an array, got " + j.dump());
  IntVec v;
  for (const auto& x : j) v.push_back(int_of(x));
  return v;
}

const char* quant_name(Quant q) {
  switch (q) {
    case Quant::Exists: return "exists";
    case Quant::Forall: return "forall";
    case Quant::Free: return "free";
  }
  return "?";
}

// Deterministic across standard libraries: plain modular reduction of the
// 64-bit Mersenne twister output.
struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  long range(long lo, long hi) { return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

BoolExpr random_expr(Rng& rng, const std::vector<QuantBlock>& blocks, std::size_t atoms, int cmax) {
  if (atoms == 1) {
    LinearAtom a;
    Int scale = 0, center = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t j = 0; j < blocks[b].dim; ++j) {
        if (rng.range(0, 2) == 0) continue;
        long c = rng.range(-cmax, cmax);
        if (c == 0) continue;
        a.coeffs[VarRef{b, j}] = c;
        scale += abs(Int(c)) * (blocks[b].bound->hi - blocks[b].bound->lo);
        center += Int(c) * (blocks[b].bound->hi + blocks[b].bound->lo) / 2;
      }
    if (a.coeffs.empty()) a.coeffs[VarRef{blocks.size() - 1, 0}] = rng.range(0, 1) ? 1 : -1;
    long s = static_cast<long>(std::min<Int>(scale, 400));
    a.rhs = center + rng.range(-s / 2, s / 2 + 1);
    long r = rng.range(0, 5);
    a.rel = r < 3 ? Rel::Le : (r < 5 ? Rel::Lt : Rel::Eq);
    BoolExpr e = BoolExpr::leaf(a);
    return rng.range(0, 5) == 0 ? BoolExpr::negation(e) : e;
  }
  std::size_t left = static_cast<std::size_t>(rng.range(1, static_cast<long>(atoms) - 1));
  std::vector<BoolExpr> kids{random_expr(rng, blocks, left, cmax), random_expr(rng, blocks, atoms - left, cmax)};
  BoolExpr e = rng.range(0, 1) ? BoolExpr::conj(kids) : BoolExpr::disj(kids);
  return rng.range(0, 6) == 0 ? BoolExpr::negation(e) : e;
}

CorpusEntry random_entry(Rng& rng, const CorpusParams& p, std::size_t index) {
  static const char* names[] = {"a", "b", "c", "d", "e", "g", "h"};
  for (;;) {
    CorpusEntry e;
    Formula& f = e.formula;
    std::size_t prefix = 0;
    if (p.free) {
      std::size_t n1 = static_cast<std::size_t>(rng.range(1, static_cast<long>(p.free_nmax)));
      e.N = rng.range(1, static_cast<long>(p.Nmax));
      f.blocks.push_back(QuantBlock{Quant::Free, "x", n1, Bound{-e.N, e.N}});
      prefix += n1 * bit_length(2 * e.N);
    }
    const std::size_t k = static_cast<std::size_t>(rng.range(static_cast<long>(p.kmin), static_cast<long>(p.kmax)));
    Quant q = rng.range(0, 1) ? Quant::Exists : Quant::Forall;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t n = static_cast<std::size_t>(rng.range(1, static_cast<long>(p.nmax)));
      std::size_t l = static_cast<std::size_t>(rng.range(1, static_cast<long>(p.lmax)));
      Int lo = rng.range(0, 3) == 0 ? -pow2(l - 1) : Int(0);
      f.blocks.push_back(QuantBlock{q, names[i], n, Bound{lo, lo + pow2(l) - 1}});
      if (i + 1 < k) prefix += n * l;
      q = q == Quant::Exists ? Quant::Forall : Quant::Exists;
    }
    if (f.blocks.empty() || prefix > p.prefix_bits) continue;
    f.matrix = random_expr(rng, f.blocks, static_cast<std::size_t>(rng.range(1, static_cast<long>(p.amax))), p.cmax);
    std::ostringstream name;
    name << (p.free ? "c" : "s") << std::setw(4) << std::setfill('0') << index;
    e.name = name.str();
    return e;
  }
}

}  // namespace

// ---------------------------------------------------------------- GF

Json to_json(const ShortGF& g) {
  Json terms = Json::array();
  for (const auto& t : g.terms) {
    Json bs = Json::array();
    for (const auto& b : t.bs) bs.push_back(vec(b));
    terms.push_back({{"c", str(t.c)}, {"a", vec(t.a)}, {"b", bs}});
  }
  return {{"nvars", g.nvars}, {"terms", terms}};
}

ShortGF gf_from_json(const Json& j) {
  ShortGF g(j.at("nvars").get<std::size_t>());
  for (const auto& t : j.at("terms")) {
    GFTerm term{rat_of(t.at("c")), vec_of(t.at("a")), {}};
    for (const auto& b : t.at("b")) term.bs.push_back(vec_of(b));
    g.terms.push_back(std::move(term));
  }
  return g;
}

// ---------------------------------------------------------------- KPT

Json to_json(const Interval& iv) {
  return {{"lo", iv.lo ? str(*iv.lo) : Json(nullptr)},
          {"hi", iv.hi ? str(*iv.hi) : Json(nullptr)},
          {"lo_open", iv.lo_open},
          {"hi_open", iv.hi_open}};
}

Json to_json(const APSet& s) {
  Json ps = Json::array();
  for (const auto& p : s.progressions) ps.push_back({{"first", str(p.first)}, {"step", str(p.step)}, {"count", str(p.count)}});
  return {{"host", to_json(s.host)}, {"cardinality", str(s.cardinality())}, {"progressions", ps}};
}

Json to_json(const TestPair& tp) {
  // T as a rational matrix acting on (z, 1).
  Json T = Json::array();
  for (std::size_t i = 0; i < tp.p.size(); ++i)
    T.push_back(Json::array({str(Rational(tp.p[i], tp.d[i])), str(Rational(tp.q[i], tp.d[i]))}));
  return {{"T", T}, {"Tp_matrix", mat(tp.M)}, {"Tp_offset", vec(tp.c)}};
}

Json to_json(const ParametricSystem& s) {
  return {{"A", mat(s.A)}, {"alpha", vec(s.alpha)}, {"nu", vec(s.nu)}, {"z_range", to_json(s.z_range)}};
}

ParametricSystem parametric_from_json(const Json& j) {
  ParametricSystem s;
  for (const auto& r : j.at("A")) s.A.push_back(vec_of(r));
  s.alpha = vec_of(j.at("alpha"));
  s.nu = vec_of(j.at("nu"));
  const Json& z = j.at("z_range");
  if (z.is_array() && z.size() == 2)
    s.z_range = Interval::closed(int_of(z[0]), int_of(z[1]));
  else if (z.is_object() && z.contains("lo") && z.contains("hi") && !z["lo"].is_null() && !z["hi"].is_null())
    s.z_range = Interval{rat_of(z["lo"]), rat_of(z["hi"]), z.value("lo_open", false), z.value("hi_open", false)};
  else
    throw input_error("z_range must be [lo, hi] or a bounded interval object");
  s.validate();
  return s;
}

Json kpt_report(const KPTResult& r, const ParametricSystem& s) {
  Json pieces = Json::array();
  for (const auto& p : r.pieces) {
    Json tests = Json::array();
    for (const auto& t : p.tests) tests.push_back(to_json(t));
    pieces.push_back({{"interval", to_json(p.interval)}, {"tests", tests}, {"feasible", to_json(piece_feasible_set(p, s))}});
  }
  return {{"schema", kSchemaVersion}, {"system", to_json(s)}, {"pieces", pieces}};
}

// ---------------------------------------------------------------- traces

Json to_json(const DecisionTrace& t) {
  Json quants = Json::array();
  for (auto q : t.quants) quants.push_back(quant_name(q));
  Json nodes = Json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"level", n.level},
                     {"window", Json::array({str(n.lo), str(n.hi)})},
                     {"pieces", n.pieces},
                     {"f2", n.f2},
                     {"f1_runs", n.f1_runs},
                     {"outcome", n.outcome}});
  return {{"schema", kSchemaVersion},
          {"sentence", t.sentence},
          {"negated", t.negated},
          {"quantifiers", quants},
          {"t", t.t},
          {"inner_dim", t.inner_dim},
          {"kpt_pieces", t.kpt_pieces},
          {"node_count", t.node_count},
          {"max_f2", t.max_f2},
          {"f2_bound_held", t.f2_bound_held},
          {"work", t.work},
          {"nodes", nodes}};
}

Json to_json(const PipelineTrace& t) {
  Json stages = Json::array();
  for (const auto& [name, f] : t.stages())
    stages.push_back({{"stage", name}, {"formula", print_formula(f)}, {"atoms", atom_count(f.matrix)}});
  Json quants = Json::array();
  for (auto q : t.result.quants) quants.push_back(quant_name(q));
  return {{"schema", kSchemaVersion},
          {"ells", t.bounded.ells},
          {"dnf_systems", t.dnf.systems.size()},
          {"labels", t.lifting.labels},
          {"hull", t.lifting.hull},
          {"concat_bits", t.concat.bits},
          {"disassociated",
           {{"quantifiers", quants},
            {"bits", t.result.bits},
            {"t", t.result.t},
            {"inner_dim", t.result.inner_dim},
            {"lambda_rows", t.result.lambda.rows()},
            {"odd", t.result.odd}}},
          {"stages", stages}};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw input_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// ---------------------------------------------------------------- corpus

std::vector<CorpusEntry> generate_corpus(std::uint64_t seed, const CorpusParams& p) {
  if (p.kmin > p.kmax || p.nmax == 0 || p.lmax == 0 || p.amax == 0) throw input_error("invalid corpus parameters");
  if (!p.free && p.kmin == 0) throw input_error("sentences need at least one quantifier block");
  Rng rng(seed);
  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < p.count; ++i) out.push_back(random_entry(rng, p, i));
  return out;
}

std::string corpus_file_text(const CorpusEntry& e) {
  std::string s = "# " + e.name + "\n";
  if (e.formula.has_free()) s += "# N = " + to_string(e.N) + "\n";
  return s + print_formula(e.formula) + "\n";
}

std::optional<Int> corpus_file_N(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# N = ", 0) == 0) return parse_int(line.substr(6));
  return std::nullopt;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusEntry>& entries) {
  std::filesystem::create_directories(dir);
  for (const auto& e : entries) {
    std::ofstream out(dir / (e.name + ".pa"));
    if (!out) throw input_error("cannot write " + (dir / (e.name + ".pa")).string());
    out << corpus_file_text(e);
  }
}

}  // namespace shortpa
