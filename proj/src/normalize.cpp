#include "shortpa/normalize.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace shortpa {

namespace {

using VarMap = std::function<VarRef(const VarRef&)>;

LinearAtom remap(const LinearAtom& a, const VarMap& f) {
  LinearAtom out;
  out.rel = a.rel;
  out.rhs = a.rhs;
  for (const auto& [v, c] : a.coeffs) out.coeffs[f(v)] += c;
  return out;
}

BoolExpr remap(const BoolExpr& e, const VarMap& f) {
  if (e.kind == BoolExpr::Kind::Atom) return BoolExpr::leaf(remap(e.atom, f));
  BoolExpr out{e.kind, {}, {}};
  for (const auto& k : e.kids) out.kids.push_back(remap(k, f));
  return out;
}

LinearAtom le(std::map<VarRef, Int> coeffs, const Int& rhs) { return make_atom(std::move(coeffs), Rel::Le, rhs); }

std::size_t clog2(std::size_t t) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < t) ++r;
  return r;
}

// Atom for the (possibly rational) row a.x <= b, variables named by index.
LinearAtom row_atom(const RatVec& a, const Rational& b, bool strict, const std::function<VarRef(std::size_t)>& var) {
  Int l = denominator(b);
  for (const auto& x : a) l = lcm(l, denominator(x));
  LinearAtom out;
  out.rel = strict ? Rel::Lt : Rel::Le;
  out.rhs = numerator(b * Rational(l));
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0) out.coeffs[var(j)] += numerator(a[j] * Rational(l));
  return out;
}

void add_atom(HPolyhedron& p, const LinearAtom& a, const std::function<std::size_t(const VarRef&)>& idx) {
  IntVec row(p.dim, 0);
  for (const auto& [v, c] : a.coeffs) row[idx(v)] += c;
  switch (a.rel) {
    case Rel::Le: p.add_row(row, a.rhs); break;
    case Rel::Lt: p.add_row(row, a.rhs - 1); break;
    case Rel::Eq: p.add_equality(row, a.rhs); break;
  }
}

void collect_atoms(const BoolExpr& e, std::vector<LinearAtom>& out) {
  switch (e.kind) {
    case BoolExpr::Kind::True: return;
    case BoolExpr::Kind::False: out.push_back(make_atom({}, Rel::Le, -1)); return;
    case BoolExpr::Kind::Atom: out.push_back(e.atom); return;
    case BoolExpr::Kind::And:
      for (const auto& k : e.kids) collect_atoms(k, out);
      return;
    default: throw input_error("expected a conjunction of atoms");
  }
}

std::vector<std::size_t> offsets(const std::vector<QuantBlock>& blocks) {
  std::vector<std::size_t> off{0};
  for (const auto& b : blocks) off.push_back(off.back() + b.dim);
  return off;
}

using Conj = std::vector<LinearAtom>;

void dnf(const BoolExpr& e, std::vector<Conj>& out, std::size_t cap) {
  using K = BoolExpr::Kind;
  switch (e.kind) {
    case K::True: out.push_back({}); return;
    case K::False: return;
    case K::Atom: out.push_back({e.atom}); return;
    case K::Or:
      for (const auto& k : e.kids) {
        dnf(k, out, cap);
        if (out.size() > cap) throw cap_error("to_dnf: more than " + std::to_string(cap) + " disjuncts");
      }
      return;
    case K::And: {
      std::vector<Conj> acc{{}};
      for (const auto& k : e.kids) {
        std::vector<Conj> part;
        dnf(k, part, cap);
        std::vector<Conj> next;
        for (const auto& a : acc)
          for (const auto& b : part) {
            Conj c = a;
            c.insert(c.end(), b.begin(), b.end());
            next.push_back(std::move(c));
            if (next.size() > cap) throw cap_error("to_dnf: more than " + std::to_string(cap) + " disjuncts");
          }
        acc = std::move(next);
      }
      out.insert(out.end(), acc.begin(), acc.end());
      return;
    }
    case K::Not: throw input_error("to_dnf: matrix not in negation normal form");
  }
}

}  // namespace

BitBounded bit_bound(const Formula& f) {
  if (!f.is_bounded()) throw input_error("bit_bound: every block needs a bound");
  struct Coord {
    VarRef old;
    Int range;  // hi - lo, negative when empty
  };
  struct NewBlock {
    QuantBlock block;
    std::vector<Coord> coords;
  };
  std::vector<NewBlock> nb;
  BoolExpr m = f.matrix;
  std::map<VarRef, VarRef> where;
  BitBounded out;
  for (std::size_t i = 0; i < f.blocks.size(); ++i) {
    const auto& b = f.blocks[i];
    if (b.dim == 0) continue;
    const Int lo = b.bound->lo;
    if (nb.empty() || b.quant == Quant::Free || nb.back().block.quant != b.quant) {
      nb.push_back({b, {}});
      nb.back().block.dim = 0;
    }
    for (std::size_t c = 0; c < b.dim; ++c) {
      VarRef v{i, c};
      if (lo != 0) m = substitute_shift(m, v, lo);
      where[v] = VarRef{nb.size() - 1, nb.back().coords.size()};
      nb.back().coords.push_back({v, b.bound->hi - lo});
      if (b.quant == Quant::Free) out.free_shift.push_back(lo);
    }
    nb.back().block.dim = nb.back().coords.size();
  }
  m = remap(m, [&](const VarRef& v) { return where.at(v); });

  for (std::size_t i = nb.size(); i-- > 0;) {
    auto& blk = nb[i];
    Int top = 0;
    for (const auto& c : blk.coords) top = std::max(top, c.range);
    std::size_t ell = std::max<std::size_t>(1, bit_length(top));
    std::vector<BoolExpr> guards;
    for (std::size_t c = 0; c < blk.coords.size(); ++c) {
      const Int& r = blk.coords[c].range;
      if (r < 0) guards.push_back(BoolExpr::truth(false));
      else if (r < pow2(ell) - 1) guards.push_back(BoolExpr::leaf(le({{VarRef{i, c}, 1}}, r)));
    }
    if (!guards.empty()) {
      BoolExpr g = guards.size() == 1 ? guards[0] : BoolExpr::conj(guards);
      if (blk.block.quant == Quant::Forall) m = BoolExpr::disj({BoolExpr::negation(g), m});
      else m = BoolExpr::conj({g, m});
    }
    blk.block.bound = Bound{0, pow2(ell) - 1};
    out.ells.insert(out.ells.begin(), ell);
  }
  for (auto& blk : nb) out.formula.blocks.push_back(blk.block);
  out.formula.matrix = m;
  return out;
}

DNFSystems to_dnf(const Formula& f) {
  if (!f.is_bounded()) throw input_error("to_dnf: every block needs a bound");
  const std::size_t a = atom_count(f.matrix);
  const std::size_t cap = a >= 16 ? std::size_t{1} << 16 : std::max<std::size_t>(1, std::size_t{1} << a);
  std::vector<Conj> terms;
  dnf(to_nnf(f.matrix), terms, cap);

  auto off = offsets(f.blocks);
  DNFSystems out;
  out.dim = off.back();
  auto idx = [&](const VarRef& v) { return off[v.block] + v.coord; };
  for (auto& t : terms) {
    HPolyhedron p(out.dim);
    for (const auto& at : t) add_atom(p, at, idx);
    for (std::size_t b = 0; b < f.blocks.size(); ++b)
      for (std::size_t c = 0; c < f.blocks[b].dim; ++c) {
        IntVec e(out.dim, 0);
        e[off[b] + c] = 1;
        p.add_row(e, f.blocks[b].bound->hi);
        e[off[b] + c] = -1;
        p.add_row(e, -f.blocks[b].bound->lo);
      }
    out.systems.push_back(std::move(p));
    out.atoms.push_back(std::move(t));
  }
  return out;
}

Lifting union_to_single_system(const DNFSystems& d, LiftStyle style, const std::vector<Bound>& box) {
  if (box.size() != d.dim) throw input_error("union_to_single_system: box size mismatch");
  const std::size_t n = d.dim;
  std::vector<const HPolyhedron*> ps;
  for (const auto& p : d.systems)
    if (!is_empty(p)) ps.push_back(&p);
  const std::size_t t = ps.size();

  Lifting out;
  out.labels = style == LiftStyle::Lifted ? std::max<std::size_t>(t, 1) : std::max<std::size_t>(1, clog2(t));
  const std::size_t m = n + out.labels;
  for (std::size_t j = 0; j < t; ++j) {
    IntVec lab(out.labels, 0);
    if (style == LiftStyle::Lifted) lab[j] = 1;
    else
      for (std::size_t i = 0; i < out.labels; ++i) lab[i] = (j >> i) & 1;
    out.label_of.push_back(lab);
  }
  out.R = HPolyhedron(m);
  if (t == 0) {
    out.R.add_box(0, 0);
    out.R.add_row(IntVec(m, 0), Int(-1));
    return out;
  }

  if (m <= dimension_cap()) {
    try {
      VPolytope all;
      all.dim = m;
      for (std::size_t j = 0; j < t; ++j)
        for (auto v : vertices_from_facets(*ps[j]).vertices) {
          for (const auto& x : out.label_of[j]) v.push_back(Rational(x));
          all.vertices.push_back(std::move(v));
        }
      out.R = facets_from_vertices(all);
      out.hull = true;
      return out;
    } catch (const Error& e) {
      if (e.kind() != Error::Kind::Cap) throw;
      out.R = HPolyhedron(m);
    }
  }

  // Big-M: system j is enforced exactly when the labels equal label_of[j].
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(m, 0);
    e[i] = 1;
    out.R.add_row(e, box[i].hi);
    e[i] = -1;
    out.R.add_row(e, -box[i].lo);
  }
  for (std::size_t i = 0; i < out.labels; ++i) {
    IntVec e(m, 0);
    e[n + i] = 1;
    out.R.add_row(e, Int(1));
    e[n + i] = -1;
    out.R.add_row(e, Int(0));
  }
  if (style == LiftStyle::Lifted) {
    IntVec e(m, 0);
    for (std::size_t i = 0; i < out.labels; ++i) e[n + i] = 1;
    out.R.add_equality(e, Int(1));
  } else {
    for (std::size_t code = t; code < (std::size_t{1} << out.labels); ++code) {
      IntVec e(m, 0);
      Int ones = 0;
      for (std::size_t i = 0; i < out.labels; ++i) {
        bool bit = (code >> i) & 1;
        e[n + i] = bit ? 1 : -1;
        ones += bit ? 1 : 0;
      }
      out.R.add_row(e, ones - 1);
    }
  }
  for (std::size_t j = 0; j < t; ++j) {
    const HPolyhedron& p = *ps[j];
    const IntVec& lab = out.label_of[j];
    Int ones = 0;
    for (const auto& x : lab) ones += x;
    for (std::size_t r = 0; r < p.rows(); ++r) {
      Rational big = 0;
      for (std::size_t i = 0; i < n; ++i) big += p.A[r][i] * Rational(p.A[r][i] > 0 ? box[i].hi : box[i].lo);
      big -= p.b[r];
      Rational bm = big > 0 ? big : Rational(0);
      RatVec row(m, Rational(0));
      for (std::size_t i = 0; i < n; ++i) row[i] = p.A[r][i];
      for (std::size_t i = 0; i < out.labels; ++i) row[n + i] = lab[i] == 1 ? bm : -bm;
      out.R.add_row(row, p.b[r] + bm * Rational(ones), p.strict[r]);
    }
  }
  return out;
}

Concatenated concat_variables(const Formula& f, const std::vector<std::size_t>& ells) {
  const std::size_t k = f.blocks.size();
  if (ells.size() != k) throw input_error("concat_variables: one bit bound per block expected");
  for (std::size_t i = 0; i < k; ++i)
    if (!f.blocks[i].bound || *f.blocks[i].bound != Bound{0, pow2(ells[i]) - 1})
      throw input_error("concat_variables: block '" + f.blocks[i].name + "' is not bounded by [0, 2^l)");
  Concatenated out;
  if (k <= 1) {
    out.formula = f;
    return out;
  }
  const std::size_t last = k - 1;
  std::map<VarRef, VarRef> where;
  std::vector<BoolExpr> extra;
  std::size_t digits = 0, top = ells[last];
  for (std::size_t i = 0; i < last; ++i)
    if (f.blocks[i].dim > 1) {
      digits += f.blocks[i].dim;
      top = std::max(top, ells[i]);
    }

  std::size_t d = 0;
  for (std::size_t i = 0; i < last; ++i) {
    const auto& b = f.blocks[i];
    QuantBlock nb = b;
    nb.dim = 1;
    out.bits.push_back(b.dim * ells[i]);
    nb.bound = Bound{0, pow2(out.bits.back()) - 1};
    out.formula.blocks.push_back(nb);
    if (b.dim == 1) {
      where[VarRef{i, 0}] = VarRef{i, 0};
      continue;
    }
    std::map<VarRef, Int> eq{{VarRef{i, 0}, 1}};
    for (std::size_t j = 0; j < b.dim; ++j, ++d) {
      VarRef dig{last, d};
      where[VarRef{i, j}] = dig;
      eq[dig] = -pow2(j * ells[i]);
      if (ells[i] < top) extra.push_back(BoolExpr::leaf(le({{dig, 1}}, pow2(ells[i]) - 1)));
    }
    extra.insert(extra.begin(), BoolExpr::leaf(make_atom(eq, Rel::Eq, 0)));
  }
  for (std::size_t j = 0; j < f.blocks[last].dim; ++j) {
    VarRef v{last, digits + j};
    where[VarRef{last, j}] = v;
    if (ells[last] < top) extra.push_back(BoolExpr::leaf(le({{v, 1}}, pow2(ells[last]) - 1)));
  }
  QuantBlock lb = f.blocks[last];
  lb.dim = digits + f.blocks[last].dim;
  lb.bound = Bound{0, pow2(top) - 1};
  out.formula.blocks.push_back(lb);
  extra.push_back(remap(f.matrix, [&](const VarRef& v) { return where.at(v); }));
  out.formula.matrix = simplify(BoolExpr::conj(std::move(extra)));
  return out;
}

DisassociatedForm disassociate(const Concatenated& c) {
  const Formula& f = c.formula;
  if (f.blocks.empty()) throw input_error("disassociate: no blocks");
  const std::size_t K = f.blocks.size() - 1;
  if (c.bits.size() != K) throw input_error("disassociate: prefix bit lengths missing");
  const auto& lastb = f.blocks[K];
  if (lastb.quant != Quant::Exists) throw input_error("disassociate: last block must be existential");

  DisassociatedForm out;
  std::size_t acc = 0;
  for (std::size_t j = 0; j < K; ++j) {
    if (f.blocks[j].dim != 1) throw input_error("disassociate: prefix blocks must be singletons");
    if (c.bits[j] == 0) throw input_error("disassociate: empty prefix block");
    out.quants.push_back(f.blocks[j].quant);
    out.bits.push_back(c.bits[j]);
    acc += c.bits[j];
    out.t.push_back(acc);
  }
  for (std::size_t j = 0; j + 1 < K; ++j) {
    const Int p = pow2(c.bits[j + 1]);
    VarRef a{j, 0}, b{j + 1, 0};
    out.relations.push_back({le({{a, p}, {b, -1}}, 0), make_atom({{b, 1}, {a, -p}}, Rel::Lt, p)});
  }

  const std::size_t m = lastb.dim;
  out.inner_dim = K + m;
  Int top = lastb.bound->hi;
  for (std::size_t j = 0; j < K; ++j) top = std::max(top, pow2(c.bits[j]) - 1);
  out.inner_bound = Bound{0, top};
  const std::size_t off = K == 0 ? 0 : 1;
  out.lambda = HPolyhedron(off + out.inner_dim);
  const std::size_t n = out.lambda.dim;
  if (K > 0) {
    IntVec dec(n, 0);
    dec[0] = 1;
    for (std::size_t j = 0; j < K; ++j) dec[1 + j] = -pow2(out.t[K - 1] - out.t[j]);
    out.lambda.add_equality(dec, Int(0));
    for (std::size_t j = 0; j < K; ++j) {
      IntVec e(n, 0);
      e[1 + j] = 1;
      out.lambda.add_row(e, pow2(c.bits[j]) - 1);
      e[1 + j] = -1;
      out.lambda.add_row(e, Int(0));
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    IntVec e(n, 0);
    e[off + K + j] = 1;
    out.lambda.add_row(e, lastb.bound->hi);
    e[off + K + j] = -1;
    out.lambda.add_row(e, Int(0));
  }
  std::vector<LinearAtom> psi;
  collect_atoms(f.matrix, psi);
  for (const auto& a : psi)
    add_atom(out.lambda, a, [&](const VarRef& v) { return v.block < K ? off + v.block : off + K + v.coord; });
  out.odd = (K + 1) % 2 == 1;
  return out;
}

Formula DisassociatedForm::formula() const {
  const std::size_t K = chain();
  Formula f;
  for (std::size_t j = 0; j < K; ++j)
    f.blocks.push_back(QuantBlock{quants[j], "z" + std::to_string(j + 1), 1, Bound{0, pow2(t[j]) - 1}});
  f.blocks.push_back(QuantBlock{Quant::Exists, "zk", inner_dim, inner_bound});
  const std::size_t off = K == 0 ? 0 : 1;
  auto var = [&](std::size_t i) { return i < off ? VarRef{K - 1, 0} : VarRef{K, i - off}; };
  std::vector<BoolExpr> rows;
  for (std::size_t r = 0; r < lambda.rows(); ++r)
    rows.push_back(BoolExpr::leaf(row_atom(lambda.A[r], lambda.b[r], lambda.strict[r], var)));
  BoolExpr m = BoolExpr::conj(std::move(rows));
  for (std::size_t j = relations.size(); j-- > 0;) {
    BoolExpr rel = BoolExpr::conj({BoolExpr::leaf(relations[j].upper), BoolExpr::leaf(relations[j].lower)});
    if (quants[j + 1] == Quant::Forall) m = BoolExpr::disj({BoolExpr::negation(rel), m});
    else m = BoolExpr::conj({rel, m});
  }
  f.matrix = m;
  return f;
}

std::vector<std::pair<std::string, Formula>> PipelineTrace::stages() const {
  return {{"bit_bounded", bounded.formula},
          {"dnf", dnf_formula},
          {"lifted", lifted_formula},
          {"concatenated", concat.formula},
          {"disassociated", result.formula()}};
}

PipelineTrace normalize_pipeline(const Formula& f, LiftStyle style) {
  PipelineTrace tr;
  tr.bounded = bit_bound(f);
  Formula& g = tr.bounded.formula;
  if (g.blocks.empty() || g.blocks.back().quant == Quant::Free) {
    g.blocks.push_back(QuantBlock{Quant::Exists, "e", 0, Bound{0, 1}});
    tr.bounded.ells.push_back(1);
  }
  if (g.blocks.back().quant != Quant::Exists) throw input_error("normalize: the last quantified block must be existential");

  tr.dnf = to_dnf(g);
  tr.dnf_formula.blocks = g.blocks;
  {
    std::vector<BoolExpr> ors;
    for (const auto& t : tr.dnf.atoms) {
      std::vector<BoolExpr> ands;
      for (const auto& a : t) ands.push_back(BoolExpr::leaf(a));
      ors.push_back(BoolExpr::conj(std::move(ands)));
    }
    tr.dnf_formula.matrix = simplify(BoolExpr::disj(std::move(ors)));
  }

  std::vector<Bound> box;
  for (const auto& b : g.blocks)
    for (std::size_t c = 0; c < b.dim; ++c) box.push_back(*b.bound);
  tr.lifting = union_to_single_system(tr.dnf, style, box);

  Formula& h = tr.lifted_formula;
  h.blocks = g.blocks;
  const std::size_t last = h.blocks.size() - 1;
  const std::size_t old_dim = h.blocks[last].dim;
  h.blocks[last].dim += tr.lifting.labels;
  auto off = offsets(g.blocks);
  auto var = [&](std::size_t i) {
    if (i >= tr.dnf.dim) return VarRef{last, old_dim + (i - tr.dnf.dim)};
    std::size_t b = std::upper_bound(off.begin(), off.end(), i) - off.begin() - 1;
    while (g.blocks[b].dim == 0) --b;
    return VarRef{b, i - off[b]};
  };
  std::vector<BoolExpr> rows;
  const HPolyhedron& R = tr.lifting.R;
  for (std::size_t r = 0; r < R.rows(); ++r) rows.push_back(BoolExpr::leaf(row_atom(R.A[r], R.b[r], R.strict[r], var)));
  h.matrix = simplify(BoolExpr::conj(std::move(rows)));

  tr.concat = concat_variables(h, tr.bounded.ells);
  tr.result = disassociate(tr.concat);
  return tr;
}

}  // namespace shortpa
