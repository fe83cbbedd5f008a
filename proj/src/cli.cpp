#include "shortpa/cli.hpp"

#include "shortpa/bench.hpp"
#include "shortpa/io.hpp"
#include "shortpa/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

namespace shortpa {

namespace fs = std::filesystem;

namespace {

using clk = std::chrono::steady_clock;

double since(clk::time_point t) { return std::chrono::duration<double>(clk::now() - t).count(); }

struct Flags {
  bool json = false;
  bool verify = false;
  std::string trace;  // file (or directory in directory mode) for the decision trace
  std::string provider = "enumerative";
  std::string style = "compact";
  std::optional<long long> N;
  unsigned jobs = 1;
};

struct Outcome {
  int code = kExitTrue;
  Json report;
  std::string text;
};

int code_of(const Error& e) {
  switch (e.kind()) {
    case Error::Kind::Input: return kExitInput;
    case Error::Kind::Cap: return kExitCap;
    case Error::Kind::Verify: return kExitVerify;
    case Error::Kind::Math: return kExitMath;
  }
  return kExitMath;
}

const char* kind_name(const Error& e) {
  switch (e.kind()) {
    case Error::Kind::Input: return "input";
    case Error::Kind::Cap: return "cap";
    case Error::Kind::Verify: return "verify";
    case Error::Kind::Math: return "math";
  }
  return "math";
}

std::uint64_t env_cap(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  try {
    std::size_t used = 0;
    unsigned long long x = std::stoull(v, &used);
    if (used != std::string(v).size() || x == 0) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw input_error(std::string(name) + " must be a positive integer, got '" + v + "'");
  }
}

SolverOptions solver_options(const Flags& fl) {
  SolverOptions o;
  if (fl.provider == "merged")
    o.provider = Provider::Merged;
  else if (fl.provider != "enumerative")
    throw input_error("unknown provider '" + fl.provider + "'");
  if (fl.style == "lifted")
    o.style = LiftStyle::Lifted;
  else if (fl.style != "compact")
    throw input_error("unknown style '" + fl.style + "'");
  o.piece_cap = static_cast<std::size_t>(env_cap("SHORTPA_PIECE_CAP", o.piece_cap));
  o.work_budget = env_cap("SHORTPA_WORK_BUDGET", o.work_budget);
  return o;
}

OracleOptions oracle_options(const Flags& fl) {
  OracleOptions o;
  o.cap = env_cap("SHORTPA_ORACLE_CAP", o.cap);
  o.jobs = std::max(1u, fl.jobs);
  return o;
}

Json base_report(const std::string& command, const fs::path& path, std::string_view bytes) {
  return {{"schema", kSchemaVersion},
          {"command", command},
          {"input", {{"path", path.string()}, {"digest", input_digest(bytes)}}},
          {"result", nullptr},
          {"verified", nullptr},
          {"timings", Json::object()},
          {"events", Json::array()},
          {"trace", nullptr}};
}

void event(Json& report, const std::string& kind, const std::string& message) {
  report["events"].push_back({{"kind", kind}, {"message", message}});
}

void write_json(const fs::path& p, const Json& j) {
  std::ofstream out(p);
  if (!out) throw input_error("cannot write " + p.string());
  out << j.dump(2) << "\n";
}

Int resolve_N(const Flags& fl, const std::string& text) {
  if (fl.N) return Int(*fl.N);
  if (auto n = corpus_file_N(text)) return *n;
  throw input_error("counting needs --N or a '# N = value' line");
}

Formula boxed(const Formula& f, const Int& N) {
  Formula g = f;
  g.blocks[0].bound = Bound{-N, N};
  return g;
}

void solve_decide(const Formula& f, const Flags& fl, const fs::path& trace_path, Outcome& o) {
  if (f.has_free()) throw input_error("decide needs a sentence; use count or gf for formulas with a free block");
  DecisionTrace tr;
  auto t0 = clk::now();
  const bool truth = decide(f, solver_options(fl), &tr);
  o.report["timings"]["solve"] = since(t0);
  o.report["result"] = truth;
  o.report["stats"] = {{"kpt_pieces", tr.kpt_pieces}, {"nodes", tr.node_count}, {"max_f2", tr.max_f2}, {"work", tr.work}};
  if (!tr.f2_bound_held) event(o.report, "f2_bound", "|F2| exceeded the piece count at some node");
  if (tr.node_count > tr.nodes.size()) event(o.report, "trace_cap", "trace keeps the first " + std::to_string(tr.nodes.size()) + " nodes");
  if (!trace_path.empty()) {
    write_json(trace_path, to_json(tr));
    o.report["trace"] = trace_path.string();
  }
  o.code = truth ? kExitTrue : kExitFalse;
  o.text = truth ? "true" : "false";
  if (fl.verify) {
    auto t1 = clk::now();
    try {
      const bool want = brute_force_decide(f, oracle_options(fl));
      o.report["verified"] = want == truth;
      if (want != truth) {
        event(o.report, "mismatch", std::string("oracle says ") + (want ? "true" : "false"));
        o.code = kExitVerify;
      }
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::Cap) throw;
      event(o.report, "cap", std::string("verification skipped: ") + e.what());
    }
    o.report["timings"]["verify"] = since(t1);
  }
}

void solve_count(const Formula& f, const Int& N, bool want_gf, const Flags& fl, const fs::path& trace_path, Outcome& o) {
  if (!f.has_free()) throw input_error("count and gf need a formula with a free block");
  if (N < 0) throw input_error("N must be nonnegative");
  DecisionTrace tr;
  auto t0 = clk::now();
  ShortGF g = count_gf(f, N, solver_options(fl), &tr);
  const Int c = count(g);
  o.report["timings"]["solve"] = since(t0);
  o.report["N"] = to_string(N);
  o.report["result"] = want_gf ? to_json(g) : Json(to_string(c));
  if (want_gf) o.report["count"] = to_string(c);
  if (!tr.f2_bound_held) event(o.report, "f2_bound", "|F2| exceeded the piece count at some node");
  if (!trace_path.empty()) {
    write_json(trace_path, to_json(tr));
    o.report["trace"] = trace_path.string();
  }
  o.text = want_gf ? to_json(g).dump(2) : to_string(c);
  if (fl.verify) {
    auto t1 = clk::now();
    try {
      CountResult want = brute_force_count(boxed(f, N), oracle_options(fl));
      const std::size_t n = f.blocks[0].dim;
      std::set<IntVec> got;
      bool ok = true;
      for (const auto& [x, coef] : expand(g, IntVec(n, -N), IntVec(n, N))) {
        ok = ok && coef == 1;
        got.insert(x);
      }
      ok = ok && got == std::set<IntVec>(want.points.begin(), want.points.end()) && c == want.count;
      o.report["verified"] = ok;
      if (!ok) {
        event(o.report, "mismatch", "oracle count " + to_string(want.count));
        o.code = kExitVerify;
      }
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::Cap) throw;
      event(o.report, "cap", std::string("verification skipped: ") + e.what());
    }
    o.report["timings"]["verify"] = since(t1);
  }
}

// One formula file through decide, count, gf or oracle.
Outcome run_file(const std::string& command, const fs::path& path, const Flags& fl, const fs::path& trace_path) {
  Outcome o;
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    o.report = base_report(command, path, "");
    o.report["error"] = {{"kind", kind_name(e)}, {"message", e.what()}};
    o.code = code_of(e);
    return o;
  }
  o.report = base_report(command, path, text);
  auto t0 = clk::now();
  try {
    auto tp = clk::now();
    Formula f = parse_formula(text);
    o.report["timings"]["parse"] = since(tp);
    o.report["formula"] = print_formula(f);
    if (command == "decide") {
      solve_decide(f, fl, trace_path, o);
    } else if (command == "count" || command == "gf") {
      solve_count(f, resolve_N(fl, text), command == "gf", fl, trace_path, o);
    } else {
      auto ts = clk::now();
      if (f.has_free()) {
        const Int N = resolve_N(fl, text);
        CountResult r = brute_force_count(boxed(f, N), oracle_options(fl));
        o.report["N"] = to_string(N);
        o.report["result"] = to_string(r.count);
        o.text = to_string(r.count);
      } else {
        const bool truth = brute_force_decide(f, oracle_options(fl));
        o.report["result"] = truth;
        o.text = truth ? "true" : "false";
        o.code = truth ? kExitTrue : kExitFalse;
      }
      o.report["timings"]["solve"] = since(ts);
    }
  } catch (const Error& e) {
    o.report["error"] = {{"kind", kind_name(e)}, {"message", e.what()}};
    if (e.kind() == Error::Kind::Cap) event(o.report, "cap", e.what());
    o.code = code_of(e);
  }
  o.report["timings"]["total"] = since(t0);
  return o;
}

std::vector<fs::path> formula_files(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".pa") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& f) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) f(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

void print_outcome(const Outcome& o, const Flags& fl, std::ostream& out, std::ostream& err) {
  if (fl.json) {
    out << o.report.dump(2) << "\n";
  } else if (o.report.contains("error")) {
    err << "error: " << o.report["error"]["message"].get<std::string>() << "\n";
  } else {
    out << o.text << "\n";
    if (!o.report["verified"].is_null())
      out << "verified: " << (o.report["verified"].get<bool>() ? "ok" : "MISMATCH") << "\n";
  }
  if (!fl.json)
    for (const auto& e : o.report["events"])
      if (e["kind"] != "mismatch") err << "note: " << e["message"].get<std::string>() << "\n";
}

// Single file, or every *.pa file of a directory.
int cmd_formula(const std::string& command, const std::string& input, const Flags& fl, std::ostream& out,
                std::ostream& err) {
  const fs::path path(input);
  if (!fs::is_directory(path)) {
    Outcome o = run_file(command, path, fl, fl.trace);
    print_outcome(o, fl, out, err);
    return o.code;
  }
  if (!fl.trace.empty()) fs::create_directories(fl.trace);
  auto files = formula_files(path);
  std::vector<Outcome> res(files.size());
  auto t0 = clk::now();
  parallel_for(files.size(), fl.jobs, [&](std::size_t i) {
    fs::path tp = fl.trace.empty() ? fs::path() : fs::path(fl.trace) / (files[i].stem().string() + ".trace.json");
    res[i] = run_file(command, files[i], fl, tp);
  });
  std::size_t mismatches = 0, errors = 0, verified = 0;
  int code = kExitTrue;
  Json reports = Json::array();
  for (std::size_t i = 0; i < files.size(); ++i) {
    const Outcome& o = res[i];
    const bool is_error = o.report.contains("error");
    if (is_error) {
      ++errors;
      code = std::max(code, o.code);
    }
    if (o.code == kExitVerify) ++mismatches;
    if (o.report["verified"] == true) ++verified;
    if (fl.json) {
      reports.push_back(o.report);
      continue;
    }
    out << files[i].filename().string() << ": ";
    if (is_error)
      out << "error (" << o.report["error"]["kind"].get<std::string>() << ") " << o.report["error"]["message"].get<std::string>();
    else
      out << (o.text.find('\n') == std::string::npos ? o.text : "count " + o.report.value("count", std::string("?")));
    if (!o.report["verified"].is_null()) out << (o.report["verified"].get<bool>() ? " [verified]" : " [MISMATCH]");
    out << "\n";
  }
  const double total = since(t0);
  if (fl.json) {
    out << Json{{"schema", kSchemaVersion},
                {"command", command},
                {"directory", path.string()},
                {"reports", reports},
                {"summary", {{"files", files.size()}, {"verified", verified}, {"mismatches", mismatches}, {"errors", errors}, {"seconds", total}}}}
               .dump(2)
        << "\n";
  } else {
    out << "files " << files.size() << ", verified " << verified << ", mismatches " << mismatches << ", errors " << errors
        << ", " << std::fixed << std::setprecision(2) << total << " s\n";
  }
  if (mismatches) return kExitVerify;
  return code;
}

int cmd_normalize(const std::string& input, const Flags& fl, bool trace, std::ostream& out) {
  const std::string text = read_file(input);
  Formula f = parse_formula(text);
  if (f.has_free()) throw input_error("normalize needs a sentence");
  const bool negated = !f.blocks.empty() && f.blocks.back().quant == Quant::Forall;
  if (negated) f = negate(f);
  PipelineTrace tr = normalize_pipeline(f, solver_options(fl).style);
  if (trace || fl.json) {
    Json j = to_json(tr);
    j["input"] = {{"path", input}, {"digest", input_digest(text)}};
    j["negated"] = negated;
    out << j.dump(2) << "\n";
    return kExitTrue;
  }
  const DisassociatedForm& d = tr.result;
  if (negated) out << "# normalized through the negation\n";
  out << "# chain " << d.chain() << ", inner dimension " << d.inner_dim << ", rows " << d.lambda.rows() << "\n";
  out << print_formula(d.formula()) << "\n";
  return kExitTrue;
}

int cmd_kpt(const std::string& input, const Flags& fl, std::ostream& out) {
  const std::string text = read_file(input);
  ParametricSystem s;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw input_error(std::string("bad JSON: ") + e.what());
    }
    s = parametric_from_json(j);
  } else {
    Formula f = parse_formula(text);
    if (f.has_free()) throw input_error("kpt-inspect needs a sentence or a parametric system");
    if (!f.blocks.empty() && f.blocks.back().quant == Quant::Forall) f = negate(f);
    DisassociatedForm d = normalize_pipeline(f, solver_options(fl).style).result;
    if (d.chain() == 0) throw input_error("the sentence has no parameter chain");
    s = parametric_system(d);
  }
  const Provider p = solver_options(fl).provider;
  KPTResult r = kpt_partition_1d(s, p);
  Json j = kpt_report(r, s);
  j["provider"] = fl.provider;
  int code = kExitTrue;
  if (fl.verify) {
    KptCheck c = verify_kpt(r, s);
    j["verified"] = c.ok;
    if (!c.ok) {
      j["verify_reason"] = c.reason;
      code = kExitVerify;
    }
  }
  out << j.dump(2) << "\n";
  return code;
}

int cmd_bench_scaling(std::size_t max_bits, std::size_t repeats, std::size_t max_ell, const Flags& fl, std::ostream& out) {
  std::vector<std::size_t> bits, ells;
  for (std::size_t b = 8; b <= max_bits; b += 8) bits.push_back(b);
  for (std::size_t l = 1; l <= max_ell; ++l) ells.push_back(l);
  const SolverOptions opt = solver_options(fl);
  auto s = scaling_series(bits, repeats, opt);
  auto r = range_series(ells, 1, opt);
  const double slope = loglog_slope(s);
  auto rows = [](const std::vector<ScalingPoint>& pts) {
    Json a = Json::array();
    for (const auto& p : pts)
      a.push_back({{"x", p.x}, {"seconds", p.seconds}, {"result", p.result}, {"oracle", p.oracle}, {"kpt_pieces", p.kpt_pieces}});
    return a;
  };
  bool agree = true;
  for (const auto& p : s) agree = agree && p.result == p.oracle;
  for (const auto& p : r) agree = agree && p.result == p.oracle;
  if (fl.json) {
    out << Json{{"schema", kSchemaVersion},
                {"command", "bench"},
                {"template", print_formula(scaling_formula(8))},
                {"bits", rows(s)},
                {"loglog_slope", slope},
                {"ranges", rows(r)},
                {"oracle_agrees", agree}}
               .dump(2)
        << "\n";
  } else {
    out << "constant bit length (fixed ranges [0,7])\n";
    out << "  bits   seconds   result  pieces\n";
    for (const auto& p : s)
      out << "  " << std::setw(4) << p.x << "  " << std::fixed << std::setprecision(4) << std::setw(8) << p.seconds << "  "
          << std::setw(6) << (p.result ? "true" : "false") << "  " << p.kpt_pieces << "\n";
    out << "log-log slope " << std::setprecision(3) << slope << "\n";
    out << "range bits (constants fixed; informational)\n";
    out << "  bits   seconds   result  pieces\n";
    for (const auto& p : r)
      out << "  " << std::setw(4) << p.x << "  " << std::fixed << std::setprecision(4) << std::setw(8) << p.seconds << "  "
          << std::setw(6) << (p.result ? "true" : "false") << "  " << p.kpt_pieces << "\n";
    out << "oracle " << (agree ? "agrees" : "DISAGREES") << "\n";
  }
  return agree ? kExitTrue : kExitVerify;
}

int cmd_bench_dir(const std::string& input, const Flags& fl, std::ostream& out) {
  auto files = formula_files(input);
  const SolverOptions opt = solver_options(fl);
  std::vector<double> secs(files.size(), -1);
  std::vector<std::string> err(files.size());
  auto t0 = clk::now();
  parallel_for(files.size(), fl.jobs, [&](std::size_t i) {
    try {
      Formula f = parse_formula(read_file(files[i]));
      auto t = clk::now();
      if (f.has_free()) {
        Int N = resolve_N(fl, read_file(files[i]));
        count_gf(f, N, opt);
      } else {
        decide(f, opt);
      }
      secs[i] = since(t);
    } catch (const Error& e) {
      err[i] = e.what();
    }
  });
  const double wall = since(t0);
  std::vector<double> ok;
  for (double s : secs)
    if (s >= 0) ok.push_back(s);
  std::sort(ok.begin(), ok.end());
  const double sum = std::accumulate(ok.begin(), ok.end(), 0.0);
  const double median = ok.empty() ? 0 : ok[ok.size() / 2], worst = ok.empty() ? 0 : ok.back();
  const std::size_t errors = files.size() - ok.size();
  if (fl.json) {
    Json per = Json::array();
    for (std::size_t i = 0; i < files.size(); ++i)
      per.push_back({{"file", files[i].filename().string()},
                     {"seconds", secs[i] >= 0 ? Json(secs[i]) : Json(nullptr)},
                     {"error", err[i].empty() ? Json(nullptr) : Json(err[i])}});
    out << Json{{"schema", kSchemaVersion}, {"command", "bench"}, {"directory", input}, {"files", per},
                {"summary", {{"solved", ok.size()}, {"errors", errors}, {"sum", sum}, {"median", median}, {"max", worst}, {"wall", wall}}}}
               .dump(2)
        << "\n";
  } else {
    for (std::size_t i = 0; i < files.size(); ++i) {
      out << files[i].filename().string() << " ";
      if (secs[i] >= 0)
        out << std::fixed << std::setprecision(4) << secs[i] << "\n";
      else
        out << "error: " << err[i] << "\n";
    }
    out << "solved " << ok.size() << ", errors " << errors << ", sum " << std::fixed << std::setprecision(2) << sum
        << " s, median " << std::setprecision(4) << median << " s, max " << worst << " s, wall " << std::setprecision(2) << wall
        << " s\n";
  }
  return errors ? kExitCap : kExitTrue;
}

}  // namespace

std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide and count short Presburger formulas"};
  app.require_subcommand(1);
  Flags fl;
  std::string input;

  auto common = [&](CLI::App* c, bool trace_file) {
    c->add_option("input", input, "formula file or directory of *.pa files")->required();
    c->add_flag("--json", fl.json, "print a JSON report");
    c->add_option("--provider", fl.provider, "KPT provider")->check(CLI::IsMember({"enumerative", "merged"}));
    c->add_option("--style", fl.style, "hull lifting style")->check(CLI::IsMember({"compact", "lifted"}));
    c->add_option("--jobs", fl.jobs, "worker threads")->check(CLI::Range(1u, 256u));
    if (trace_file) c->add_option("--trace", fl.trace, "write the decision trace JSON here");
  };
  auto* decide_cmd = app.add_subcommand("decide", "decide a sentence");
  common(decide_cmd, true);
  decide_cmd->add_flag("--verify", fl.verify, "cross-check against the brute-force oracle");
  auto* count_cmd = app.add_subcommand("count", "count satisfying assignments in [-N, N]^n");
  auto* gf_cmd = app.add_subcommand("gf", "generating function of the satisfying assignments in [-N, N]^n");
  for (auto* c : {count_cmd, gf_cmd}) {
    common(c, true);
    c->add_option("--N", fl.N, "box radius (default: the file's '# N = ' line)");
    c->add_flag("--verify", fl.verify, "cross-check against the brute-force oracle");
  }
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force truth value or count");
  common(oracle_cmd, false);
  oracle_cmd->add_option("--N", fl.N, "box radius for formulas with a free block");
  bool trace_stages = false;
  auto* norm_cmd = app.add_subcommand("normalize", "normalize to disassociated form");
  common(norm_cmd, false);
  norm_cmd->add_flag("--trace", trace_stages, "print the stage-by-stage JSON trace");
  auto* kpt_cmd = app.add_subcommand("kpt-inspect", "partition the parameter line of a sentence or parametric system");
  common(kpt_cmd, false);
  kpt_cmd->add_flag("--verify", fl.verify, "check the partition against a scan");

  CorpusParams cp;
  std::uint64_t seed = 1;
  std::string out_dir;
  auto* corpus_cmd = app.add_subcommand("corpus", "write a seeded random corpus");
  corpus_cmd->add_option("--seed", seed, "random seed");
  corpus_cmd->add_option("--out", out_dir, "output directory")->required();
  corpus_cmd->add_option("--count", cp.count, "number of formulas");
  corpus_cmd->add_option("--kmin", cp.kmin, "fewest quantifier blocks");
  corpus_cmd->add_option("--kmax", cp.kmax, "most quantifier blocks");
  corpus_cmd->add_option("--nmax", cp.nmax, "block dimension");
  corpus_cmd->add_option("--amax", cp.amax, "atoms");
  corpus_cmd->add_option("--lmax", cp.lmax, "bits per coordinate");
  corpus_cmd->add_option("--cmax", cp.cmax, "coefficient magnitude");
  corpus_cmd->add_option("--prefix-bits", cp.prefix_bits, "bit budget of the blocks before the last");
  corpus_cmd->add_flag("--free", cp.free, "counting formulas with a free block");
  corpus_cmd->add_option("--free-nmax", cp.free_nmax, "free block dimension");
  corpus_cmd->add_option("--Nmax", cp.Nmax, "largest counting box radius");

  bool scaling = false;
  std::size_t max_bits = 64, repeats = 3, max_ell = 6;
  auto* bench_cmd = app.add_subcommand("bench", "time a corpus directory, or run the scaling series");
  bench_cmd->add_option("input", input, "directory of *.pa files");
  bench_cmd->add_flag("--scaling", scaling, "constant bit-length series and the range series");
  bench_cmd->add_option("--max-bits", max_bits, "largest constant bit length")->check(CLI::Range(8, 4096));
  bench_cmd->add_option("--repeats", repeats, "timings per point (median)")->check(CLI::Range(1, 100));
  bench_cmd->add_option("--max-range-bits", max_ell, "largest range bit length")->check(CLI::Range(1, 12));
  bench_cmd->add_flag("--json", fl.json, "print JSON");
  bench_cmd->add_option("--provider", fl.provider, "KPT provider")->check(CLI::IsMember({"enumerative", "merged"}));
  bench_cmd->add_option("--jobs", fl.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  bench_cmd->add_option("--N", fl.N, "box radius for counting files without a '# N = ' line");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*decide_cmd) return cmd_formula("decide", input, fl, out, err);
    if (*count_cmd) return cmd_formula("count", input, fl, out, err);
    if (*gf_cmd) return cmd_formula("gf", input, fl, out, err);
    if (*oracle_cmd) return cmd_formula("oracle", input, fl, out, err);
    if (*norm_cmd) return cmd_normalize(input, fl, trace_stages, out);
    if (*kpt_cmd) return cmd_kpt(input, fl, out);
    if (*corpus_cmd) {
      auto entries = generate_corpus(seed, cp);
      write_corpus(out_dir, entries);
      out << "wrote " << entries.size() << " files to " << out_dir << "\n";
      return kExitTrue;
    }
    if (*bench_cmd) {
      if (scaling) return cmd_bench_scaling(max_bits, repeats, max_ell, fl, out);
      if (input.empty()) throw input_error("bench needs a directory or --scaling");
      if (!fs::is_directory(input)) throw input_error(input + " is not a directory");
      return cmd_bench_dir(input, fl, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_of(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace shortpa
