#include "shortpa/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace shortpa {

namespace {

struct Token {
  std::string text;
  int line = 1;
  int col = 1;
};

bool is_punct(char c) { return c == '(' || c == ')' || c == '[' || c == ']' || c == ',' || c == ':'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(s[i++]);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    Token t{std::string(), line, col};
    if (is_punct(c)) {
      t.text = std::string(1, c);
      advance(c);
      ++i;
    } else {
      while (i < s.size() && !is_punct(s[i]) && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '#') {
        t.text.push_back(s[i]);
        advance(s[i]);
        ++i;
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

using RatTerm = std::map<VarRef, Rational>;

struct Linear {
  RatTerm coeffs;
  Rational constant = 0;
};

bool looks_numeric(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i >= s.size()) return false;
  bool digit = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i])))
      digit = true;
    else if (s[i] != '/')
      return false;
  }
  return digit;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse() {
    Formula f;
    while (!at_end() && peek().text != ":") {
      f.blocks.push_back(parse_block(f.blocks));
    }
    if (f.blocks.empty()) fail(at_end() ? last() : peek(), "expected a quantifier block");
    expect(":");
    blocks_ = &f.blocks;
    f.matrix = parse_expr();
    if (!at_end()) fail(peek(), "trailing input after formula");
    for (std::size_t i = 0; i < f.blocks.size(); ++i) {
      if (f.blocks[i].quant == Quant::Free && i != 0) fail(toks_.front(), "free block must come first");
      if (i > 0 && f.blocks[i].quant != Quant::Free && f.blocks[i - 1].quant == f.blocks[i].quant)
        throw input_error("non-alternating quantifier prefix at block '" + f.blocks[i].name + "'");
    }
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::vector<QuantBlock>* blocks_ = nullptr;

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token& peek() const { return toks_[pos_]; }
  const Token& last() const {
    static const Token empty{"", 1, 1};
    return toks_.empty() ? empty : toks_.back();
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    std::ostringstream os;
    os << "syntax error at line " << t.line << ", column " << t.col << ": " << msg;
    if (!t.text.empty()) os << " (near '" << t.text << "')";
    throw input_error(os.str());
  }
  const Token& next() {
    if (at_end()) fail(last(), "unexpected end of input");
    return toks_[pos_++];
  }
  void expect(const std::string& s) {
    if (at_end()) fail(last(), "expected '" + s + "' but input ended");
    if (peek().text != s) fail(peek(), "expected '" + s + "'");
    ++pos_;
  }

  QuantBlock parse_block(const std::vector<QuantBlock>& prior) {
    const Token& q = next();
    QuantBlock b;
    if (q.text == "E")
      b.quant = Quant::Exists;
    else if (q.text == "A")
      b.quant = Quant::Forall;
    else if (q.text == "free")
      b.quant = Quant::Free;
    else
      fail(q, "expected 'E', 'A' or 'free'");
    const Token& name = next();
    if (name.text.empty() || !std::isalpha(static_cast<unsigned char>(name.text[0])) ||
        name.text.find('.') != std::string::npos)
      fail(name, "bad variable name");
    for (const auto& p : prior)
      if (p.name == name.text) fail(name, "duplicate variable '" + name.text + "'");
    b.name = name.text;
    expect(":");
    const Token& d = next();
    if (!looks_numeric(d.text) || d.text.find('/') != std::string::npos) fail(d, "expected dimension");
    Int dim = parse_int(d.text);
    if (dim < 1 || dim > 64) fail(d, "dimension must be in [1,64]");
    b.dim = static_cast<std::size_t>(dim);
    if (!at_end() && peek().text == "in") {
      ++pos_;
      expect("[");
      Int lo = parse_int_tok();
      expect(",");
      Int hi = parse_int_tok();
      const Token& close = next();
      if (close.text == ")")
        hi -= 1;
      else if (close.text != "]")
        fail(close, "expected ']' or ')'");
      if (lo > hi + 1) fail(close, "bound has lo > hi + 1");
      b.bound = Bound{lo, hi};
    }
    if (b.quant == Quant::Free && !b.bound) fail(q, "free block needs an 'in [lo,hi]' bound");
    return b;
  }

  Int parse_int_tok() {
    const Token& t = next();
    if (!looks_numeric(t.text) || t.text.find('/') != std::string::npos) fail(t, "expected integer");
    return parse_int(t.text);
  }

  BoolExpr parse_expr() {
    const Token& t = next();
    if (t.text == "true") return BoolExpr::truth(true);
    if (t.text == "false") return BoolExpr::truth(false);
    if (t.text != "(") fail(t, "expected '('");
    const Token& op = next();
    if (op.text == "and" || op.text == "or") {
      std::vector<BoolExpr> kids;
      while (!at_end() && peek().text != ")") kids.push_back(parse_expr());
      expect(")");
      return op.text == "and" ? BoolExpr::conj(std::move(kids)) : BoolExpr::disj(std::move(kids));
    }
    if (op.text == "not") {
      BoolExpr k = parse_expr();
      expect(")");
      return BoolExpr::negation(std::move(k));
    }
    if (op.text == "<=" || op.text == "<" || op.text == "=" || op.text == ">=" || op.text == ">") {
      Linear l = parse_linear();
      Linear r = parse_linear();
      expect(")");
      if (op.text == ">=" || op.text == ">") std::swap(l, r);
      Rel rel = op.text == "=" ? Rel::Eq : ((op.text == "<" || op.text == ">") ? Rel::Lt : Rel::Le);
      return BoolExpr::leaf(build_atom(l, r, rel));
    }
    fail(op, "unknown operator");
  }

  static LinearAtom build_atom(const Linear& l, const Linear& r, Rel rel) {
    // l - r  rel  0, cleared to integers.
    RatTerm diff = l.coeffs;
    for (const auto& [v, c] : r.coeffs) diff[v] -= c;
    std::vector<VarRef> vars;
    RatVec vals;
    for (const auto& [v, c] : diff)
      if (c != 0) {
        vars.push_back(v);
        vals.push_back(c);
      }
    vals.push_back(r.constant - l.constant);
    IntVec ints = clear_denominators(vals);
    LinearAtom a;
    a.rel = rel;
    for (std::size_t i = 0; i < vars.size(); ++i) a.coeffs[vars[i]] = ints[i];
    a.rhs = ints.back();
    return a;
  }

  VarRef resolve(const Token& t) const {
    std::string name = t.text;
    std::size_t coord = 0;
    bool explicit_coord = false;
    if (auto dot = name.find('.'); dot != std::string::npos) {
      std::string idx = name.substr(dot + 1);
      name = name.substr(0, dot);
      if (!looks_numeric(idx) || idx.find('/') != std::string::npos) fail(t, "bad coordinate index");
      Int j = parse_int(idx);
      if (j < 1) fail(t, "coordinates are 1-based");
      coord = static_cast<std::size_t>(j) - 1;
      explicit_coord = true;
    }
    for (std::size_t b = 0; b < blocks_->size(); ++b) {
      const auto& blk = (*blocks_)[b];
      if (blk.name != name) continue;
      if (!explicit_coord && blk.dim > 1) fail(t, "variable '" + name + "' has dimension > 1; use " + name + ".j");
      if (coord >= blk.dim) fail(t, "coordinate out of range for '" + name + "'");
      return VarRef{b, coord};
    }
    throw input_error("undeclared variable '" + name + "' at line " + std::to_string(t.line) + ", column " +
                      std::to_string(t.col));
  }

  Linear parse_linear() {
    const Token& t = next();
    Linear out;
    if (t.text == "(") {
      const Token& op = next();
      if (op.text == "+") {
        while (!at_end() && peek().text != ")") add(out, parse_linear(), 1);
        expect(")");
      } else if (op.text == "-") {
        Linear first = parse_linear();
        if (!at_end() && peek().text != ")") {
          add(out, first, 1);
          while (!at_end() && peek().text != ")") add(out, parse_linear(), -1);
        } else {
          add(out, first, -1);
        }
        expect(")");
      } else if (op.text == "*") {
        const Token& c = next();
        if (!looks_numeric(c.text)) fail(c, "expected numeric coefficient");
        Rational k = parse_rational(c.text);
        add(out, parse_linear(), k);
        expect(")");
      } else {
        fail(op, "expected '+', '-' or '*'");
      }
      return out;
    }
    if (looks_numeric(t.text)) {
      out.constant = parse_rational(t.text);
      return out;
    }
    if (t.text.empty() || !std::isalpha(static_cast<unsigned char>(t.text[0]))) fail(t, "expected linear term");
    out.coeffs[resolve(t)] = 1;
    return out;
  }

  static void add(Linear& acc, const Linear& x, const Rational& k) {
    for (const auto& [v, c] : x.coeffs) acc.coeffs[v] += k * c;
    acc.constant += k * x.constant;
  }
};

std::size_t const_bits(const Int& c) { return bit_length(c) + 1; }

std::size_t expr_length(const BoolExpr& e) {
  switch (e.kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return 1;
    case BoolExpr::Kind::Atom: {
      std::size_t n = 1 + e.atom.coeffs.size() + 1;  // atom, one per term, rhs
      for (const auto& [v, c] : e.atom.coeffs) n += const_bits(c);
      n += const_bits(e.atom.rhs);
      return n;
    }
    default: {
      std::size_t n = 1;
      for (const auto& k : e.kids) n += expr_length(k);
      return n;
    }
  }
}

void print_linear(std::ostringstream& os, const LinearAtom& a, const std::vector<QuantBlock>& blocks) {
  std::vector<std::string> terms;
  for (const auto& [v, c] : a.coeffs) {
    if (c == 1)
      terms.push_back(var_name(v, blocks));
    else
      terms.push_back("(* " + to_string(c) + " " + var_name(v, blocks) + ")");
  }
  if (terms.empty())
    os << "0";
  else if (terms.size() == 1)
    os << terms[0];
  else {
    os << "(+";
    for (const auto& t : terms) os << " " << t;
    os << ")";
  }
}

}  // namespace

bool Formula::is_bounded() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const QuantBlock& b) { return b.bound.has_value(); });
}

Formula parse_formula(std::string_view text) { return Parser(lex(text)).parse(); }

std::string var_name(const VarRef& v, const std::vector<QuantBlock>& blocks) {
  const auto& b = blocks.at(v.block);
  if (b.dim == 1) return b.name;
  return b.name + "." + std::to_string(v.coord + 1);
}

std::string print_expr(const BoolExpr& e, const std::vector<QuantBlock>& blocks) {
  std::ostringstream os;
  switch (e.kind) {
    case BoolExpr::Kind::True:
      return "true";
    case BoolExpr::Kind::False:
      return "false";
    case BoolExpr::Kind::Atom: {
      const char* op = e.atom.rel == Rel::Le ? "<=" : (e.atom.rel == Rel::Lt ? "<" : "=");
      os << "(" << op << " ";
      print_linear(os, e.atom, blocks);
      os << " " << to_string(e.atom.rhs) << ")";
      return os.str();
    }
    case BoolExpr::Kind::Not:
      return "(not " + print_expr(e.kids[0], blocks) + ")";
    case BoolExpr::Kind::And:
    case BoolExpr::Kind::Or:
      os << (e.kind == BoolExpr::Kind::And ? "(and" : "(or");
      for (const auto& k : e.kids) os << " " << print_expr(k, blocks);
      os << ")";
      return os.str();
  }
  return "";
}

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  for (const auto& b : f.blocks) {
    os << (b.quant == Quant::Exists ? "E " : (b.quant == Quant::Forall ? "A " : "free ")) << b.name << ":" << b.dim;
    if (b.bound) os << " in [" << to_string(b.bound->lo) << "," << to_string(b.bound->hi) << "]";
    os << " ";
  }
  os << ": " << print_expr(f.matrix, f.blocks);
  return os.str();
}

std::size_t atom_count(const BoolExpr& e) {
  if (e.kind == BoolExpr::Kind::Atom) return 1;
  std::size_t n = 0;
  for (const auto& k : e.kids) n += atom_count(k);
  return n;
}

SentenceClass sentence_class(const Formula& f) {
  SentenceClass c;
  c.k = f.blocks.size();
  for (const auto& b : f.blocks) c.nbar.push_back(b.dim);
  c.a = std::max<std::size_t>(1, atom_count(f.matrix));
  return c;
}

std::size_t binary_length(const Formula& f) {
  std::size_t n = 0;
  for (const auto& b : f.blocks) {
    n += 1 + const_bits(Int(b.dim));
    if (b.bound) n += const_bits(b.bound->lo) + const_bits(b.bound->hi);
  }
  return n + expr_length(f.matrix);
}

Formula bound_quantifiers(const Formula& f, const std::vector<std::size_t>& ells, std::vector<std::string>* warnings) {
  if (ells.size() != f.blocks.size())
    throw input_error("bound_quantifiers: expected " + std::to_string(f.blocks.size()) + " bit bounds, got " +
                      std::to_string(ells.size()));
  Formula out = f;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    Bound nb{0, pow2(ells[i]) - 1};
    if (out.blocks[i].bound && warnings && *out.blocks[i].bound != nb)
      warnings->push_back("block '" + out.blocks[i].name + "': bound [" + to_string(out.blocks[i].bound->lo) + "," +
                          to_string(out.blocks[i].bound->hi) + "] replaced by [0," + to_string(nb.hi) + "]");
    out.blocks[i].bound = nb;
  }
  return out;
}

Formula negate(const Formula& f) {
  Formula out = f;
  for (auto& b : out.blocks) {
    if (b.quant == Quant::Exists)
      b.quant = Quant::Forall;
    else if (b.quant == Quant::Forall)
      b.quant = Quant::Exists;
  }
  out.matrix = BoolExpr::negation(f.matrix);
  return out;
}

LinearAtom negate_atom_le(const LinearAtom& a) {
  // not(sum <= rhs)  <=>  -sum <= -rhs - 1
  LinearAtom n;
  n.rel = Rel::Le;
  for (const auto& [v, c] : a.coeffs) n.coeffs[v] = -c;
  n.rhs = -a.rhs - 1;
  return n;
}

namespace {

BoolExpr nnf(const BoolExpr& e, bool neg) {
  using K = BoolExpr::Kind;
  switch (e.kind) {
    case K::True:
      return BoolExpr::truth(!neg);
    case K::False:
      return BoolExpr::truth(neg);
    case K::Not:
      return nnf(e.kids[0], !neg);
    case K::And:
    case K::Or: {
      std::vector<BoolExpr> kids;
      for (const auto& k : e.kids) kids.push_back(nnf(k, neg));
      bool conj = (e.kind == K::And) != neg;
      return conj ? BoolExpr::conj(std::move(kids)) : BoolExpr::disj(std::move(kids));
    }
    case K::Atom: {
      LinearAtom a = e.atom;
      if (a.rel == Rel::Lt) {
        a.rel = Rel::Le;
        a.rhs -= 1;
      }
      if (!neg) return BoolExpr::leaf(a);
      if (a.rel == Rel::Le) return BoolExpr::leaf(negate_atom_le(a));
      // not(sum = rhs): sum <= rhs - 1  or  sum >= rhs + 1
      LinearAtom lo = a, hi;
      lo.rel = Rel::Le;
      lo.rhs = a.rhs - 1;
      hi.rel = Rel::Le;
      for (const auto& [v, c] : a.coeffs) hi.coeffs[v] = -c;
      hi.rhs = -a.rhs - 1;
      return BoolExpr::disj({BoolExpr::leaf(lo), BoolExpr::leaf(hi)});
    }
  }
  return e;
}

}  // namespace

BoolExpr to_nnf(const BoolExpr& e) { return simplify(nnf(e, false)); }

BoolExpr simplify(const BoolExpr& e) {
  using K = BoolExpr::Kind;
  switch (e.kind) {
    case K::Atom: {
      if (!e.atom.is_constant()) {
        LinearAtom a = e.atom;
        for (auto it = a.coeffs.begin(); it != a.coeffs.end();)
          it = it->second == 0 ? a.coeffs.erase(it) : std::next(it);
        if (!a.coeffs.empty()) return BoolExpr::leaf(a);
        return simplify(BoolExpr::leaf(a));
      }
      const Int& r = e.atom.rhs;
      bool v = e.atom.rel == Rel::Le ? 0 <= r : (e.atom.rel == Rel::Lt ? 0 < r : r == 0);
      return BoolExpr::truth(v);
    }
    case K::Not: {
      BoolExpr k = simplify(e.kids[0]);
      if (k.kind == K::True) return BoolExpr::truth(false);
      if (k.kind == K::False) return BoolExpr::truth(true);
      return BoolExpr::negation(std::move(k));
    }
    case K::And:
    case K::Or: {
      const bool conj = e.kind == K::And;
      std::vector<BoolExpr> kids;
      for (const auto& k0 : e.kids) {
        BoolExpr k = simplify(k0);
        if (k.kind == (conj ? K::True : K::False)) continue;
        if (k.kind == (conj ? K::False : K::True)) return BoolExpr::truth(!conj);
        if (k.kind == e.kind) {
          for (auto& g : k.kids) kids.push_back(std::move(g));
        } else {
          kids.push_back(std::move(k));
        }
      }
      if (kids.empty()) return BoolExpr::truth(conj);
      if (kids.size() == 1) return kids[0];
      return BoolExpr{e.kind, {}, std::move(kids)};
    }
    default:
      return e;
  }
}

Int lhs_value(const LinearAtom& a, const std::vector<IntVec>& x) {
  Int s = 0;
  for (const auto& [v, c] : a.coeffs) s += c * x[v.block][v.coord];
  return s;
}

bool eval_atom(const LinearAtom& a, const std::vector<IntVec>& x) {
  Int s = lhs_value(a, x);
  switch (a.rel) {
    case Rel::Le:
      return s <= a.rhs;
    case Rel::Lt:
      return s < a.rhs;
    case Rel::Eq:
      return s == a.rhs;
  }
  return false;
}

bool eval(const BoolExpr& e, const std::vector<IntVec>& x) {
  using K = BoolExpr::Kind;
  switch (e.kind) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Atom:
      return eval_atom(e.atom, x);
    case K::Not:
      return !eval(e.kids[0], x);
    case K::And:
      return std::all_of(e.kids.begin(), e.kids.end(), [&](const BoolExpr& k) { return eval(k, x); });
    case K::Or:
      return std::any_of(e.kids.begin(), e.kids.end(), [&](const BoolExpr& k) { return eval(k, x); });
  }
  return false;
}

LinearAtom make_atom(std::map<VarRef, Int> coeffs, Rel rel, Int rhs) {
  LinearAtom a;
  for (auto& [v, c] : coeffs)
    if (c != 0) a.coeffs.emplace(v, std::move(c));
  a.rel = rel;
  a.rhs = std::move(rhs);
  return a;
}

BoolExpr substitute_shift(const BoolExpr& e, const VarRef& v, const Int& offset) {
  if (e.kind == BoolExpr::Kind::Atom) {
    BoolExpr out = e;
    auto it = out.atom.coeffs.find(v);
    if (it != out.atom.coeffs.end()) out.atom.rhs -= it->second * offset;
    return out;
  }
  BoolExpr out = e;
  for (auto& k : out.kids) k = substitute_shift(k, v, offset);
  return out;
}

}  // namespace shortpa

namespace shortpa {

std::vector<Formula> dbs_split(const std::vector<LinearAtom>& rows, std::size_t n, const Bound& box,
                               std::size_t subset_cap) {
  if (n == 0 || n > 4) throw cap_error("dbs_split: dimension " + std::to_string(n) + " outside [1,4]");
  for (const auto& r : rows) {
    if (r.rel != Rel::Le) throw input_error("dbs_split: rows must be <= inequalities");
    for (const auto& [v, c] : r.coeffs)
      if (v.block != 0 || v.coord >= n) throw input_error("dbs_split: row mentions a foreign variable");
  }
  const std::size_t s = std::size_t{1} << n;
  auto sentence = [&](std::vector<BoolExpr> kids) {
    Formula f;
    f.blocks.push_back(QuantBlock{Quant::Exists, "x", n, box});
    f.matrix = BoolExpr::conj(std::move(kids));
    return f;
  };
  std::vector<Formula> out;
  if (rows.size() <= s) {
    std::vector<BoolExpr> kids;
    for (const auto& r : rows) kids.push_back(BoolExpr::leaf(r));
    out.push_back(sentence(std::move(kids)));
    return out;
  }
  // Count C(m, s) up front so the cap is enforced before any work.
  Int subsets = 1;
  for (std::size_t i = 0; i < s; ++i) subsets = subsets * (rows.size() - i) / (i + 1);
  if (subsets > subset_cap)
    throw cap_error("dbs_split: " + to_string(subsets) + " subsystems exceed cap " + std::to_string(subset_cap));
  std::vector<std::size_t> idx(s);
  for (std::size_t i = 0; i < s; ++i) idx[i] = i;
  const std::size_t m = rows.size();
  while (true) {
    std::vector<BoolExpr> kids;
    for (std::size_t i : idx) kids.push_back(BoolExpr::leaf(rows[i]));
    out.push_back(sentence(std::move(kids)));
    std::size_t i = s;
    while (i > 0 && idx[i - 1] == m - s + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace shortpa
