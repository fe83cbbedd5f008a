#pragma once

// JSON reports (integers and rationals as strings), parametric system input,
// and the seeded corpus generator.

#include "shortpa/formula.hpp"
#include "shortpa/gf.hpp"
#include "shortpa/kannan.hpp"
#include "shortpa/normalize.hpp"
#include "shortpa/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace shortpa {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

Json to_json(const ShortGF& g);
ShortGF gf_from_json(const Json& j);
Json to_json(const Interval& iv);
Json to_json(const APSet& s);
Json to_json(const TestPair& tp);
Json to_json(const ParametricSystem& s);
ParametricSystem parametric_from_json(const Json& j);
// Pieces with their test maps and feasible sets.
Json kpt_report(const KPTResult& r, const ParametricSystem& s);
Json to_json(const DecisionTrace& t);
Json to_json(const PipelineTrace& t);

std::string read_file(const std::filesystem::path& p);

struct CorpusParams {
  std::size_t count = 100;
  std::size_t kmin = 1, kmax = 4;   // quantifier blocks
  std::size_t nmax = 2;             // block dimension
  std::size_t amax = 3;             // atoms
  std::size_t lmax = 5;             // bits per coordinate
  int cmax = 8;                     // coefficient magnitude
  std::size_t prefix_bits = 13;     // sum of n_i * l_i over blocks before the last
  bool free = false;                // counting formulas with a free block
  std::size_t free_nmax = 2;
  std::size_t Nmax = 32;
};

struct CorpusEntry {
  std::string name;
  Formula formula;
  Int N = 0;  // counting box, when the formula has a free block
};

std::vector<CorpusEntry> generate_corpus(std::uint64_t seed, const CorpusParams& p);
// Formula text with a leading comment line; "# N = ..." for counting entries.
std::string corpus_file_text(const CorpusEntry& e);
// Reads "# N = value" from a corpus file, if present.
std::optional<Int> corpus_file_N(const std::string& text);
void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusEntry>& entries);

}  // namespace shortpa
