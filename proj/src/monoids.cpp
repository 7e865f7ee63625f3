#include "polyan/monoids.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "polyan/compare.hpp"

namespace polyan {

// ------------------------------------------------------------ amalgamated

namespace {

// Enumerate the ops of a (x) b together with their plug structure.
struct AmalgPlug {
  std::string label;
  std::string head;
  std::vector<std::string> parts;
};

std::vector<AmalgPlug> amalg_tensor_plugs(const AmalgSig& a, const AmalgSig& b) {
  std::vector<AmalgPlug> out;
  for (const auto& op : a.ops()) {
    std::vector<std::vector<std::string>> cands;
    for (const auto& sort : op.ins) {
      std::vector<std::string> c;
      for (const auto& bop : b.ops())
        if (bop.out == sort) c.push_back(bop.name);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && op.arity() > 0) continue;
    std::vector<std::size_t> idx(op.arity(), 0);
    while (true) {
      std::vector<std::string> bs;
      for (int i = 0; i < op.arity(); ++i) bs.push_back(cands[i][idx[i]]);
      out.push_back({total_tensor_label(op.name, bs), op.name, bs});
      if (op.arity() == 0) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return out;
}

}  // namespace

Report check_monoid(const AmalgMonoid& m) {
  Report report;
  AmalgSig MM = tensor_total_amalg(m.M, m.M);
  AmalgSig I = unit_amalg(m.M.base());
  // structural validity of the multiplication table
  for (const auto& op : MM.ops()) {
    auto fi = m.mult_f.find(op.name);
    if (fi == m.mult_f.end()) {
      report.fail("mult: no image for " + op.name);
      continue;
    }
    if (!m.M.has_op(fi->second)) {
      report.fail("mult: image of " + op.name + " is not an operation");
      continue;
    }
    const AmalgOp& img = m.M.op(fi->second);
    auto si = m.mult_sigma.find(op.name);
    if (si == m.mult_sigma.end() || si->second.n() != op.arity() || img.arity() != op.arity()) {
      report.fail("mult: arity/permutation mismatch at " + op.name);
      continue;
    }
    if (img.out != op.out) report.fail("mult: output type broken at " + op.name);
    for (int i = 1; i <= op.arity(); ++i)
      if (img.ins[i - 1] != op.ins[si->second(i) - 1]) {
        report.fail("mult: input square broken at " + op.name);
        break;
      }
  }
  for (const auto& o : m.M.base().elems()) {
    auto it = m.unit_f.find(o);
    if (it == m.unit_f.end() || !m.M.has_op(it->second)) {
      report.fail("unit: no valid image for sort " + o);
      continue;
    }
    const AmalgOp& e = m.M.op(it->second);
    if (e.arity() != 1 || e.out != o || e.ins[0] != o)
      report.fail("unit: image at " + o + " is not typed o -> o");
  }
  if (!report.ok) return report;

  AmalgSigMor mult(MM, m.M, FinMap::identity(m.M.base()), m.mult_f, m.mult_sigma);
  std::map<std::string, std::string> uf(m.unit_f.begin(), m.unit_f.end());
  AmalgSigMor unit = AmalgSigMor::strict(I, m.M, FinMap::identity(m.M.base()), std::move(uf));
  AmalgSigMor idm = AmalgSigMor::identity(m.M);

  // associativity: m o (m (x) 1) o alpha == m o (1 (x) m)
  AmalgSigMor lhs = compose_amalg(mult, compose_amalg(tensor_total_mor(mult, idm),
                                                      alpha_amalg(m.M, m.M, m.M)));
  AmalgSigMor rhs = compose_amalg(mult, tensor_total_mor(idm, mult));
  for (const auto& op : lhs.dom().ops()) {
    if (lhs.f(op.name) != rhs.f(op.name) || !(lhs.sigma(op.name) == rhs.sigma(op.name)))
      report.fail("associativity fails at " + op.name);
  }
  // unit triangles: m o (e (x) 1) o lambda == 1  and  m o (1 (x) e) == rho
  AmalgSigMor left = compose_amalg(mult, compose_amalg(tensor_total_mor(unit, idm),
                                                       lambda_amalg(m.M)));
  for (const auto& op : m.M.ops()) {
    if (left.f(op.name) != op.name || !(left.sigma(op.name) == Perm::identity(op.arity())))
      report.fail("left unit fails at " + op.name);
  }
  AmalgSigMor right = compose_amalg(mult, tensor_total_mor(idm, unit));
  AmalgSigMor rho = rho_amalg(m.M);
  for (const auto& op : right.dom().ops()) {
    if (right.f(op.name) != rho.f(op.name) || !(right.sigma(op.name) == rho.sigma(op.name)))
      report.fail("right unit fails at " + op.name);
  }
  return report;
}

// ---------------------------------------------------------------- T-graph

namespace {

struct TPlug {
  std::string label;
  std::string head;
  std::vector<std::string> parts;
};

std::vector<TPlug> tgraph_tensor_plugs(const TGraph& a, const TGraph& b) {
  std::vector<TPlug> out;
  for (const auto& x : a.carrier.elems()) {
    const Word& w = a.delta.at(x);
    std::vector<std::vector<std::string>> cands;
    for (const auto& o : w) {
      std::vector<std::string> c;
      for (const auto& y : b.carrier.elems())
        if (b.gamma(y) == o) c.push_back(y);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !w.empty()) continue;
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      std::vector<std::string> bs;
      for (std::size_t i = 0; i < w.size(); ++i) bs.push_back(cands[i][idx[i]]);
      std::vector<std::string> parts{x};
      parts.insert(parts.end(), bs.begin(), bs.end());
      out.push_back({tuple_label(parts), x, bs});
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return out;
}

std::string tgraph_plug_label(const std::string& head, const std::vector<std::string>& parts) {
  std::vector<std::string> all{head};
  all.insert(all.end(), parts.begin(), parts.end());
  return tuple_label(all);
}

}  // namespace

Report check_monoid(const TGraphMonoid& m) {
  Report report;
  auto plugs = tgraph_tensor_plugs(m.M, m.M);
  for (const auto& pl : plugs) {
    auto it = m.mult.find(pl.label);
    if (it == m.mult.end() || !m.M.carrier.contains(it->second)) {
      report.fail("mult: no valid image for " + pl.label);
      continue;
    }
    // gamma o m = gamma_(x)  and  delta o m = delta_(x)
    if (m.M.gamma(it->second) != m.M.gamma(pl.head))
      report.fail("mult: codomain broken at " + pl.label);
    Word expect;
    for (const auto& b : pl.parts) {
      const Word& wb = m.M.delta.at(b);
      expect.insert(expect.end(), wb.begin(), wb.end());
    }
    if (m.M.delta.at(it->second) != expect) report.fail("mult: domain broken at " + pl.label);
  }
  for (const auto& o : m.M.base.elems()) {
    auto it = m.unit.find(o);
    if (it == m.unit.end() || !m.M.carrier.contains(it->second)) {
      report.fail("unit: no valid image for " + o);
      continue;
    }
    if (m.M.gamma(it->second) != o || m.M.delta.at(it->second) != m.M.monad.eta(o))
      report.fail("unit: image at " + o + " is not an identity cell");
  }
  if (!report.ok) return report;
  // associativity via the canonical alpha on nested plugs
  for (const auto& outer : m.M.carrier.elems()) {
    const Word& w = m.M.delta.at(outer);
    std::vector<std::vector<TPlug>> cands;
    auto all_inner = tgraph_tensor_plugs(m.M, m.M);
    for (const auto& o : w) {
      std::vector<TPlug> c;
      for (const auto& q : all_inner)
        if (m.M.gamma(q.head) == o) c.push_back(q);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !w.empty()) continue;
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      std::vector<TPlug> qs;
      for (std::size_t i = 0; i < w.size(); ++i) qs.push_back(cands[i][idx[i]]);
      // lhs: alpha then (m (x) 1) then m
      std::vector<std::string> bs, call;
      for (const auto& q : qs) {
        bs.push_back(q.head);
        call.insert(call.end(), q.parts.begin(), q.parts.end());
      }
      std::string inner = m.mult.at(tgraph_plug_label(outer, bs));
      std::string lhs = m.mult.at(tgraph_plug_label(inner, call));
      // rhs: (1 (x) m) then m
      std::vector<std::string> ms;
      for (const auto& q : qs) ms.push_back(m.mult.at(q.label));
      std::string rhs = m.mult.at(tgraph_plug_label(outer, ms));
      if (lhs != rhs)
        report.fail("associativity fails at " + tgraph_plug_label(outer, bs) + " with inners");
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  for (const auto& a : m.M.carrier.elems()) {
    if (m.mult.at(tgraph_plug_label(m.unit.at(m.M.gamma(a)), {a})) != a)
      report.fail("left unit fails at " + a);
    std::vector<std::string> es;
    for (const auto& o : m.M.delta.at(a)) es.push_back(m.unit.at(o));
    if (m.mult.at(tgraph_plug_label(a, es)) != a) report.fail("right unit fails at " + a);
  }
  return report;
}

// ---------------------------------------------------------------- symmetric

Report check_monoid(const SymMonoid& m) {
  Report report;
  SymSig MM = tensor_sym(m.M, m.M);
  // table validity and equivariance
  for (const auto& [n, g] : MM.carrier().grades()) {
    for (const auto& c : g.elems()) {
      auto gi = m.mult.find(n);
      if (gi == m.mult.end() || !gi->second.count(c)) {
        report.fail("mult: missing image for " + c);
        continue;
      }
      const std::string& img = gi->second.at(c);
      if (!m.M.carrier().has_grade(n) || !m.M.carrier().grade(n).contains(img)) {
        report.fail("mult: image outside carrier for " + c);
        continue;
      }
      if (m.M.profile(n, img) != MM.profile(n, c))
        report.fail("mult: typing broken at " + c);
      for (const auto& s : Perm::all(n)) {
        if (m.mult.at(n).at(MM.carrier().act(n, c, s)) != m.M.carrier().act(n, img, s)) {
          report.fail("mult: not equivariant at " + c);
          break;
        }
      }
    }
  }
  for (const auto& o : m.M.base().elems()) {
    auto it = m.unit.find(o);
    std::vector<std::string> want{o, o};
    if (it == m.unit.end() || !m.M.carrier().has_grade(1) ||
        !m.M.carrier().grade(1).contains(it->second) || m.M.profile(1, it->second) != want)
      report.fail("unit: no valid image for " + o);
  }
  if (!report.ok) return report;
  try {
    SymSigMor mult(MM, m.M, FinMap::identity(m.M.base()),
                   EquivMap(MM.carrier(), m.M.carrier(), m.mult));
    SymSig I = unit_sym(m.M.base());
    std::map<int, std::map<std::string, std::string>> ut;
    for (const auto& [o, v] : m.unit) ut[1][o] = v;
    SymSigMor unit(I, m.M, FinMap::identity(m.M.base()),
                   EquivMap(I.carrier(), m.M.carrier(), std::move(ut)));
    SymSigMor idm = SymSigMor::identity(m.M);
    SymSigMor lhs = compose_sym(mult, compose_sym(tensor_sym_mor(mult, idm),
                                                  alpha_sym(m.M, m.M, m.M)));
    SymSigMor rhs = compose_sym(mult, tensor_sym_mor(idm, mult));
    for (const auto& [n, g] : lhs.dom().carrier().grades())
      for (const auto& c : g.elems())
        if (lhs.f()(n, c) != rhs.f()(n, c)) report.fail("associativity fails at " + c);
    SymSigMor left = compose_sym(mult, compose_sym(tensor_sym_mor(unit, idm), lambda_sym(m.M)));
    for (const auto& [n, g] : m.M.carrier().grades())
      for (const auto& c : g.elems())
        if (left.f()(n, c) != c) report.fail("left unit fails at " + c);
    SymSigMor right = compose_sym(mult, tensor_sym_mor(idm, unit));
    SymSigMor rho = rho_sym(m.M);
    for (const auto& [n, g] : right.dom().carrier().grades())
      for (const auto& c : g.elems())
        if (right.f()(n, c) != rho.f()(n, c)) report.fail("right unit fails at " + c);
  } catch (const structural_error& e) {
    report.fail(std::string("structure error: ") + e.what());
  }
  return report;
}

// -------------------------------------------------------------- polynomial

Report check_monoid(const PolyMonoid& m) {
  Report report;
  PolyDiag MM = tensor_poly(m.M, m.M);
  PolyDiag I = unit_poly(m.M.base);
  try {
    std::map<std::string, std::string> mf(m.mult_f.begin(), m.mult_f.end());
    std::map<std::string, std::string> mg(m.mult_g.begin(), m.mult_g.end());
    PolyDiagMor mult = make_poly_mor(MM, m.M, FinMap::identity(m.M.base),
                                     FinMap(MM.B, m.M.B, std::move(mf)),
                                     FinMap(MM.E, m.M.E, std::move(mg)));
    std::map<std::string, std::string> uf(m.unit_f.begin(), m.unit_f.end());
    std::map<std::string, std::string> ug(m.unit_g.begin(), m.unit_g.end());
    PolyDiagMor unit = make_poly_mor(I, m.M, FinMap::identity(m.M.base),
                                     FinMap(I.B, m.M.B, std::move(uf)),
                                     FinMap(I.E, m.M.E, std::move(ug)));
    PolyDiagMor idm = identity_poly_mor(m.M);
    PolyDiagMor lhs = compose_poly(mult, compose_poly(tensor_poly_mor(mult, idm),
                                                      alpha_poly(m.M, m.M, m.M)));
    PolyDiagMor rhs = compose_poly(mult, tensor_poly_mor(idm, mult));
    for (const auto& b : lhs.dom.B.elems())
      if (lhs.f(b) != rhs.f(b)) report.fail("associativity (B) fails at " + b);
    for (const auto& e : lhs.dom.E.elems())
      if (lhs.g(e) != rhs.g(e)) report.fail("associativity (E) fails at " + e);
    PolyDiagMor left = compose_poly(mult, compose_poly(tensor_poly_mor(unit, idm),
                                                       lambda_poly(m.M)));
    for (const auto& b : m.M.B.elems())
      if (left.f(b) != b) report.fail("left unit fails at " + b);
    PolyDiagMor right = compose_poly(mult, tensor_poly_mor(idm, unit));
    PolyDiagMor rho = rho_poly(m.M);
    for (const auto& b : right.dom.B.elems())
      if (right.f(b) != rho.f(b)) report.fail("right unit fails at " + b);
  } catch (const structural_error& e) {
    report.fail(std::string("structure error: ") + e.what());
  }
  return report;
}

TGraphMonoid category_as_monoid(const FinSet& objects, const FinSet& arrows, const FinMap& src,
                                const FinMap& dst,
                                const std::map<std::pair<std::string, std::string>, std::string>& comp,
                                const std::map<std::string, std::string>& ids) {
  MonadHandle id{MonadKind::Identity};
  std::map<std::string, Word> delta;
  for (const auto& a : arrows.elems()) delta[a] = Word{src(a)};
  TGraph g = make_tgraph(id, objects, arrows, dst, std::move(delta));
  TGraphMonoid m{g, {}, {}};
  for (const auto& [pair, value] : comp)
    m.mult[tgraph_plug_label(pair.first, {pair.second})] = value;
  for (const auto& [o, i] : ids) m.unit[o] = i;
  return m;
}

// ---------------------------------------------------------------- algebras

Report check_algebra(const AmalgAlgebra& al) {
  Report report;
  SliceObj mx = eval_amalg(al.monoid.M, al.x);
  for (const auto& e : mx.total.elems()) {
    auto it = al.nu.find(e);
    if (it == al.nu.end() || !al.x.total.contains(it->second)) {
      report.fail("nu: no valid value at " + e);
      continue;
    }
    if (al.x.d(it->second) != mx.d(e)) report.fail("nu: typing broken at " + e);
  }
  if (!report.ok) return report;
  // associativity square on M * (M * X)
  for (const auto& op : al.monoid.M.ops()) {
    // choose inner evaluated elements t_i with output type d_a(i)
    std::vector<std::vector<std::pair<std::string, std::vector<std::string>>>> cands;
    for (const auto& sort : op.ins) {
      std::vector<std::pair<std::string, std::vector<std::string>>> c;
      for (const auto& bop : al.monoid.M.ops()) {
        if (bop.out != sort) continue;
        std::vector<std::vector<std::string>> xc;
        for (const auto& s2 : bop.ins) {
          std::vector<std::string> cc;
          for (const auto& v : al.x.total.elems())
            if (al.x.d(v) == s2) cc.push_back(v);
          xc.push_back(std::move(cc));
        }
        bool empty = false;
        for (const auto& cc : xc)
          if (cc.empty()) empty = true;
        if (empty && bop.arity() > 0) continue;
        std::vector<std::size_t> j(bop.arity(), 0);
        while (true) {
          std::vector<std::string> xs;
          for (int k = 0; k < bop.arity(); ++k) xs.push_back(xc[k][j[k]]);
          c.push_back({bop.name, xs});
          if (bop.arity() == 0) break;
          std::size_t k = 0;
          while (k < j.size()) {
            if (++j[k] < xc[k].size()) break;
            j[k++] = 0;
          }
          if (k == j.size()) break;
        }
      }
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && op.arity() > 0) continue;
    std::vector<std::size_t> idx(op.arity(), 0);
    while (true) {
      std::vector<std::string> bs, flat, inner_values;
      for (int i = 0; i < op.arity(); ++i) {
        const auto& [b, xs] = cands[i][idx[i]];
        bs.push_back(b);
        flat.insert(flat.end(), xs.begin(), xs.end());
        std::vector<std::string> parts{b};
        parts.insert(parts.end(), xs.begin(), xs.end());
        inner_values.push_back(al.nu.at(tuple_label(parts)));
      }
      std::vector<std::string> lhs_parts{op.name};
      lhs_parts.insert(lhs_parts.end(), inner_values.begin(), inner_values.end());
      std::string lhs = al.nu.at(tuple_label(lhs_parts));
      std::string tl = total_tensor_label(op.name, bs);
      const std::string& c = al.monoid.mult_f.at(tl);
      const Perm& s = al.monoid.mult_sigma.at(tl);
      std::vector<std::string> rhs_parts{c};
      for (int k = 1; k <= static_cast<int>(flat.size()); ++k)
        rhs_parts.push_back(flat[s(k) - 1]);
      std::string rhs = al.nu.at(tuple_label(rhs_parts));
      if (lhs != rhs) report.fail("action square fails at " + tuple_label(lhs_parts));
      if (op.arity() == 0) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  for (const auto& v : al.x.total.elems()) {
    if (al.nu.at(tuple_label({al.monoid.unit_f.at(al.x.d(v)), v})) != v)
      report.fail("unit square fails at " + v);
  }
  return report;
}

Report check_algebra(const TGraphAlgebra& al) {
  Report report;
  SliceObj mx = eval_tgraph(al.monoid.M, al.x);
  for (const auto& e : mx.total.elems()) {
    auto it = al.nu.find(e);
    if (it == al.nu.end() || !al.x.total.contains(it->second)) {
      report.fail("nu: no valid value at " + e);
      continue;
    }
    if (al.x.d(it->second) != mx.d(e)) report.fail("nu: typing broken at " + e);
  }
  if (!report.ok) return report;
  for (const auto& a : al.monoid.M.carrier.elems()) {
    const Word& w = al.monoid.M.delta.at(a);
    // inner elements (b_i, xs_i) with gamma(b_i) = w_i
    std::vector<std::vector<std::pair<std::string, std::vector<std::string>>>> cands;
    for (const auto& o : w) {
      std::vector<std::pair<std::string, std::vector<std::string>>> c;
      for (const auto& b : al.monoid.M.carrier.elems()) {
        if (al.monoid.M.gamma(b) != o) continue;
        const Word& wb = al.monoid.M.delta.at(b);
        std::vector<std::vector<std::string>> xc;
        for (const auto& o2 : wb) {
          std::vector<std::string> cc;
          for (const auto& v : al.x.total.elems())
            if (al.x.d(v) == o2) cc.push_back(v);
          xc.push_back(std::move(cc));
        }
        bool empty = false;
        for (const auto& cc : xc)
          if (cc.empty()) empty = true;
        if (empty && !wb.empty()) continue;
        std::vector<std::size_t> j(wb.size(), 0);
        while (true) {
          std::vector<std::string> xs;
          for (std::size_t k = 0; k < wb.size(); ++k) xs.push_back(xc[k][j[k]]);
          c.push_back({b, xs});
          if (wb.empty()) break;
          std::size_t k = 0;
          while (k < j.size()) {
            if (++j[k] < xc[k].size()) break;
            j[k++] = 0;
          }
          if (k == j.size()) break;
        }
      }
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !w.empty()) continue;
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      std::vector<std::string> bs, flat, inner_values;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& [b, xs] = cands[i][idx[i]];
        bs.push_back(b);
        flat.insert(flat.end(), xs.begin(), xs.end());
        std::vector<std::string> parts{b};
        parts.insert(parts.end(), xs.begin(), xs.end());
        inner_values.push_back(al.nu.at(tuple_label(parts)));
      }
      std::vector<std::string> lhs_parts{a};
      lhs_parts.insert(lhs_parts.end(), inner_values.begin(), inner_values.end());
      std::string lhs = al.nu.at(tuple_label(lhs_parts));
      std::vector<std::string> rhs_parts{al.monoid.mult.at(tgraph_plug_label(a, bs))};
      rhs_parts.insert(rhs_parts.end(), flat.begin(), flat.end());
      std::string rhs = al.nu.at(tuple_label(rhs_parts));
      if (lhs != rhs) report.fail("action square fails at " + tuple_label(lhs_parts));
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  for (const auto& v : al.x.total.elems()) {
    if (al.nu.at(tuple_label({al.monoid.unit.at(al.x.d(v)), v})) != v)
      report.fail("unit square fails at " + v);
  }
  return report;
}

Report check_algebra(const SymAlgebra& al) {
  Report report;
  SliceObj mx = eval_analytic(al.monoid.M, al.x);
  for (const auto& e : mx.total.elems()) {
    auto it = al.nu.find(e);
    if (it == al.nu.end() || !al.x.total.contains(it->second)) {
      report.fail("nu: no valid value at " + e);
      continue;
    }
    if (al.x.d(it->second) != mx.d(e)) report.fail("nu: typing broken at " + e);
  }
  if (!report.ok) return report;
  SymSig MM = tensor_sym(al.monoid.M, al.monoid.M);
  for (const auto& [n, g] : al.monoid.M.carrier().grades()) {
    for (const auto& a : g.elems()) {
      const auto& p = al.monoid.M.profile(n, a);
      std::vector<std::vector<std::pair<std::string, std::vector<std::string>>>> cands;
      for (int i = 1; i <= n; ++i) {
        std::vector<std::pair<std::string, std::vector<std::string>>> c;
        for (const auto& [nb, gb] : al.monoid.M.carrier().grades()) {
          for (const auto& b : gb.elems()) {
            if (al.monoid.M.profile(nb, b)[0] != p[i]) continue;
            std::vector<std::vector<std::string>> xc;
            for (int k = 1; k <= nb; ++k) {
              std::vector<std::string> cc;
              for (const auto& v : al.x.total.elems())
                if (al.x.d(v) == al.monoid.M.profile(nb, b)[k]) cc.push_back(v);
              xc.push_back(std::move(cc));
            }
            bool empty = false;
            for (const auto& cc : xc)
              if (cc.empty()) empty = true;
            if (empty && nb > 0) continue;
            std::vector<std::size_t> j(nb, 0);
            while (true) {
              std::vector<std::string> xs;
              for (int k = 0; k < nb; ++k) xs.push_back(xc[k][j[k]]);
              c.push_back({b, xs});
              if (nb == 0) break;
              std::size_t k = 0;
              while (k < j.size()) {
                if (++j[k] < xc[k].size()) break;
                j[k++] = 0;
              }
              if (k == j.size()) break;
            }
          }
        }
        cands.push_back(std::move(c));
      }
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty && n > 0) continue;
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        std::vector<std::string> bs, flat, inner_values;
        for (int i = 0; i < n; ++i) {
          const auto& [b, xs] = cands[i][idx[i]];
          bs.push_back(b);
          flat.insert(flat.end(), xs.begin(), xs.end());
          int nb = 0;
          for (const auto& [gg, grr] : al.monoid.M.carrier().grades())
            if (grr.contains(b)) nb = gg;
          inner_values.push_back(al.nu.at(analytic_class_rep(al.monoid.M, nb, b, xs)));
        }
        std::string lhs = al.nu.at(analytic_class_rep(al.monoid.M, n, a, inner_values));
        // psi_2 sends the nested element to [canon(a,bs,id), flat]
        SymTensorTriple triple{a, bs, Perm::identity(static_cast<int>(flat.size()))};
        auto cls = sym_class_of(al.monoid.M, al.monoid.M, triple);
        std::string rep = sym_triple_label(cls.front());
        for (const auto& mcand : cls) rep = std::min(rep, sym_triple_label(mcand));
        int N = static_cast<int>(flat.size());
        const std::string& c = al.monoid.mult.at(N).at(rep);
        // pair the representative with the same tuple; the class of
        // (mult(rep), flat) is the right-hand route
        std::string rhs = al.nu.at(analytic_class_rep(al.monoid.M, N, c, flat));
        if (lhs != rhs) report.fail("action square fails at " + a);
        if (n == 0) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
  }
  for (const auto& v : al.x.total.elems()) {
    if (al.nu.at(analytic_class_rep(al.monoid.M, 1, al.monoid.unit.at(al.x.d(v)), {v})) != v)
      report.fail("unit square fails at " + v);
  }
  return report;
}

// --------------------------------------------------------------- free chain

std::string tree_label(const OpTree& t) {
  if (t.leaf) return tuple_label({"id", t.head});
  std::vector<std::string> parts{t.head};
  for (const auto& k : t.kids) parts.push_back(tree_label(k));
  return tuple_label(parts);
}

int tree_arity(const OpTree& t) {
  if (t.leaf) return 1;
  int n = 0;
  for (const auto& k : t.kids) n += tree_arity(k);
  return n;
}

std::string tree_output(const AmalgSig& gens, const OpTree& t) {
  return t.leaf ? t.head : gens.op(t.head).out;
}

std::vector<std::string> tree_inputs(const AmalgSig& gens, const OpTree& t) {
  if (t.leaf) return {t.head};
  std::vector<std::string> out;
  for (const auto& k : t.kids) {
    auto sub = tree_inputs(gens, k);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

OpTree graft(const OpTree& t, const std::vector<OpTree>& subs) {
  std::size_t cursor = 0;
  std::function<OpTree(const OpTree&)> rec = [&](const OpTree& node) -> OpTree {
    if (node.leaf) {
      if (cursor >= subs.size()) throw structural_error("graft: not enough subtrees");
      return subs[cursor++];
    }
    OpTree out;
    out.leaf = false;
    out.head = node.head;
    for (const auto& k : node.kids) out.kids.push_back(rec(k));
    return out;
  };
  OpTree result = rec(t);
  if (cursor != subs.size()) throw structural_error("graft: leaf/subtree count mismatch");
  return result;
}

namespace {

// Stage enumeration for tree kinds; tgraph kinds use the delta word as the
// slot profile and the base as leaf sorts.
struct TreeSlots {
  std::vector<std::string> leaf_sorts;
  // generator name -> (output sort, slot sorts)
  std::vector<std::pair<std::string, std::pair<std::string, std::vector<std::string>>>> gens;
};

FreeChainTruncation run_chain(const TreeSlots& slots, FreeKind kind, int depth, int arity_bound) {
  FreeChainTruncation chain;
  chain.kind = kind;
  chain.depth = depth;
  chain.arity_bound = arity_bound;
  std::vector<OpTree> stage;
  for (const auto& o : slots.leaf_sorts) stage.push_back(OpTree{true, o, {}});
  auto output_of = [&](const OpTree& t) -> std::string {
    if (t.leaf) return t.head;
    for (const auto& [g, prof] : slots.gens)
      if (g == t.head) return prof.first;
    throw structural_error("run_chain: unknown generator " + t.head);
  };
  auto record = [&](const std::vector<OpTree>& st) {
    std::map<int, int> counts;
    for (const auto& t : st) ++counts[tree_arity(t)];
    chain.stages.push_back(st);
    chain.stage_counts.push_back(counts);
  };
  record(stage);
  for (int d = 1; d <= depth; ++d) {
    std::vector<OpTree> next;
    std::set<std::string> seen;
    for (const auto& o : slots.leaf_sorts) {
      OpTree leaf{true, o, {}};
      next.push_back(leaf);
      seen.insert(tree_label(leaf));
    }
    for (const auto& [g, prof] : slots.gens) {
      const auto& [out, ins] = prof;
      std::vector<std::vector<const OpTree*>> cands;
      for (const auto& sort : ins) {
        std::vector<const OpTree*> c;
        for (const auto& t : stage)
          if (output_of(t) == sort) c.push_back(&t);
        cands.push_back(std::move(c));
      }
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty && !ins.empty()) continue;
      std::vector<std::size_t> idx(ins.size(), 0);
      while (true) {
        OpTree node;
        node.leaf = false;
        node.head = g;
        int arity = 0;
        for (std::size_t i = 0; i < ins.size(); ++i) {
          node.kids.push_back(*cands[i][idx[i]]);
          arity += tree_arity(*cands[i][idx[i]]);
        }
        if (arity <= arity_bound) {
          std::string lbl = tree_label(node);
          if (seen.insert(lbl).second) next.push_back(node);
        }
        if (ins.empty()) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    std::sort(next.begin(), next.end(), [](const OpTree& a, const OpTree& b) {
      return tree_label(a) < tree_label(b);
    });
    stage = std::move(next);
    record(stage);
  }
  // stabilization per arity
  for (int n = 0; n <= arity_bound; ++n) {
    auto count = [&](int st) {
      auto it = chain.stage_counts[st].find(n);
      return it == chain.stage_counts[st].end() ? 0 : it->second;
    };
    int stable_from = -1;
    for (int st = 0; st < depth; ++st) {
      bool stable = true;
      for (int later = st + 1; later <= depth; ++later)
        if (count(later) != count(st)) stable = false;
      if (stable) {
        stable_from = st;
        break;
      }
    }
    if (stable_from >= 0)
      chain.stabilized_at[n] = stable_from;
    else if (count(depth) > 0 || count(depth - 1) > 0)
      chain.growing.push_back(n);
  }
  return chain;
}

}  // namespace

FreeChainTruncation free_multicategory(const AmalgSig& gens, FreeKind kind, int depth,
                                       int arity_bound) {
  if (kind == FreeKind::Sym || kind == FreeKind::TGraphList || kind == FreeKind::TGraphId)
    throw structural_error("free_multicategory: wrong overload for this kind");
  TreeSlots slots;
  slots.leaf_sorts = gens.base().elems();
  for (const auto& op : gens.ops()) slots.gens.push_back({op.name, {op.out, op.ins}});
  return run_chain(slots, kind, depth, arity_bound);
}

FreeChainTruncation free_multicategory(const TGraph& gens, int depth, int arity_bound) {
  TreeSlots slots;
  slots.leaf_sorts = gens.base.elems();
  for (const auto& a : gens.carrier.elems())
    slots.gens.push_back({a, {gens.gamma(a), gens.delta.at(a)}});
  return run_chain(slots,
                   gens.monad.kind == MonadKind::Identity ? FreeKind::TGraphId : FreeKind::TGraphList,
                   depth, arity_bound);
}

FreeChainTruncation free_multicategory_sym(const SymSig& gens, int depth, int arity_bound) {
  FreeChainTruncation chain;
  chain.kind = FreeKind::Sym;
  chain.depth = depth;
  chain.arity_bound = arity_bound;
  SymSig stage = unit_sym(gens.base());
  auto record = [&](const SymSig& st) {
    std::map<int, int> counts;
    for (const auto& [n, g] : st.carrier().grades())
      if (n <= arity_bound) counts[n] = static_cast<int>(g.size());
    chain.stage_counts.push_back(counts);
  };
  record(stage);
  for (int d = 1; d <= depth; ++d) {
    SymSig prod = tensor_sym(gens, stage);
    // I + A (x) A^i as a gradewise tagged union, dropping grades beyond
    // the arity bound to keep stages finite
    SymSig unit = unit_sym(gens.base());
    std::map<int, std::vector<std::string>> elems;
    std::map<int, std::map<std::string, std::string>> origin;  // tagged -> source
    for (const auto& [n, g] : unit.carrier().grades())
      for (const auto& e : g.elems()) {
        std::string tag = "i:" + e;
        elems[n].push_back(tag);
        origin[n][tag] = e;
      }
    for (const auto& [n, g] : prod.carrier().grades()) {
      if (n > arity_bound) continue;
      for (const auto& e : g.elems()) {
        std::string tag = "t:" + e;
        elems[n].push_back(tag);
        origin[n][tag] = e;
      }
    }
    std::map<int, FinSet> grades;
    for (const auto& [n, v] : elems) grades.emplace(n, FinSet("st" + std::to_string(n), v));
    std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
    std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
    for (const auto& [n, g] : grades) {
      for (const auto& tag : g.elems()) {
        bool from_unit = tag[0] == 'i';
        const std::string& src = origin[n][tag];
        profiles[n][tag] = from_unit ? unit.profile(n, src) : prod.profile(n, src);
        for (const auto& s : Perm::all(n)) {
          std::string moved = from_unit ? unit.carrier().act(n, src, s)
                                        : prod.carrier().act(n, src, s);
          action[n][tag][s.to_string()] = (from_unit ? "i:" : "t:") + moved;
        }
      }
    }
    stage = SymSig(gens.base(), SymSet(std::move(grades), std::move(action)), std::move(profiles));
    record(stage);
  }
  for (int n = 0; n <= arity_bound; ++n) {
    auto count = [&](int st) {
      auto it = chain.stage_counts[st].find(n);
      return it == chain.stage_counts[st].end() ? 0 : it->second;
    };
    int stable_from = -1;
    for (int st = 0; st < depth; ++st) {
      bool stable = true;
      for (int later = st + 1; later <= depth; ++later)
        if (count(later) != count(st)) stable = false;
      if (stable) {
        stable_from = st;
        break;
      }
    }
    if (stable_from >= 0)
      chain.stabilized_at[n] = stable_from;
    else if (count(depth) > 0)
      chain.growing.push_back(n);
  }
  return chain;
}

Report check_free_monoid(const AmalgSig& gens, const FreeChainTruncation& chain) {
  Report report;
  if (chain.stages.empty()) {
    report.fail("empty truncation");
    return report;
  }
  const auto& trees = chain.stages.back();
  std::set<std::string> labels;
  for (const auto& t : trees) labels.insert(tree_label(t));
  auto inside = [&](const OpTree& t) { return labels.count(tree_label(t)) != 0; };
  std::map<std::string, std::vector<const OpTree*>> by_output;
  for (const auto& t : trees) by_output[tree_output(gens, t)].push_back(&t);

  for (const auto& t : trees) {
    // unit laws
    std::vector<OpTree> leaves;
    for (const auto& s : tree_inputs(gens, t)) leaves.push_back(OpTree{true, s, {}});
    if (!(graft(t, leaves) == t)) report.fail("right unit fails at " + tree_label(t));
    OpTree out_leaf{true, tree_output(gens, t), {}};
    if (!(graft(out_leaf, {t}) == t)) report.fail("left unit fails at " + tree_label(t));
  }
  // associativity for graftings that stay inside the truncation
  for (const auto& t : trees) {
    if (tree_arity(t) > 3) continue;  // keep the exhaustive walk small
    auto ins = tree_inputs(gens, t);
    std::vector<std::vector<const OpTree*>> cands;
    for (const auto& s : ins) cands.push_back(by_output[s]);
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !ins.empty()) continue;
    std::vector<std::size_t> idx(ins.size(), 0);
    while (true) {
      std::vector<OpTree> us;
      int total = 0;
      for (std::size_t i = 0; i < ins.size(); ++i) {
        us.push_back(*cands[i][idx[i]]);
        total += tree_arity(us.back());
      }
      if (total <= chain.arity_bound && total <= 3) {
        OpTree tu = graft(t, us);
        if (inside(tu)) {
          // third layer: leaves only plus one sampled deeper tree per slot
          auto ins2 = tree_inputs(gens, tu);
          std::vector<OpTree> ws;
          for (const auto& s : ins2) ws.push_back(OpTree{true, s, {}});
          // graft(graft(t,us), ws) == graft(t, (graft(u_i, ws block_i))_i)
          OpTree lhs = graft(tu, ws);
          std::vector<OpTree> blocks;
          std::size_t cursor = 0;
          for (const auto& u : us) {
            int k = tree_arity(u);
            std::vector<OpTree> blk(ws.begin() + cursor, ws.begin() + cursor + k);
            cursor += k;
            blocks.push_back(graft(u, blk));
          }
          OpTree rhs = graft(t, blocks);
          if (!(lhs == rhs)) report.fail("associativity fails at " + tree_label(tu));
        }
      }
      if (ins.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return report;
}

std::string eval_tree_in_monoid(const AmalgSig& gens, const AmalgMonoid& m,
                                const std::map<std::string, std::string>& gen_images,
                                const std::map<std::string, Perm>& gen_sigmas, const OpTree& t) {
  if (t.leaf) return m.unit_f.at(t.head);
  std::vector<std::string> vals;
  for (const auto& k : t.kids) vals.push_back(eval_tree_in_monoid(gens, m, gen_images, gen_sigmas, k));
  const std::string& img = gen_images.at(t.head);
  const Perm& s = gen_sigmas.at(t.head);
  // slot j of the image receives the value of child s(j)
  std::vector<std::string> plugged;
  for (int j = 1; j <= static_cast<int>(vals.size()); ++j) plugged.push_back(vals[s(j) - 1]);
  return m.mult_f.at(total_tensor_label(img, plugged));
}

// ---------------------------------------------------------------- transport

PolyMonoid monoid_along_iota_a(const AmalgMonoid& m) {
  PolyMonoid out;
  out.M = iota_a(m.M);
  PolyDiag MM = tensor_poly(out.M, out.M);
  // B-labels of tensor_poly(iota_a M, iota_a M) coincide with the labels of
  // tensor_total_amalg(M, M); transport f directly and compute the E-part
  // from the amalgamation permutations.
  for (const auto& pl : amalg_tensor_plugs(m.M, m.M)) {
    out.mult_f[pl.label] = m.mult_f.at(pl.label);
    const Perm& s = m.mult_sigma.at(pl.label);
    // E element (pl.label, (head,i), (part_i, j)) -> (image op, s^{-1}(off_i + j))
    std::vector<int> offsets{0};
    for (const auto& b : pl.parts)
      offsets.push_back(offsets.back() + m.M.op(b).arity());
    Perm sinv = s.inverse();
    for (std::size_t i = 0; i < pl.parts.size(); ++i) {
      for (int j = 1; j <= m.M.op(pl.parts[i]).arity(); ++j) {
        std::string e = tuple_label({pl.label, iota_a_pos(pl.head, static_cast<int>(i) + 1),
                                     iota_a_pos(pl.parts[i], j)});
        out.mult_g[e] = iota_a_pos(m.mult_f.at(pl.label), sinv(offsets[i] + j));
      }
    }
  }
  for (const auto& o : m.M.base().elems()) {
    out.unit_f[o] = m.unit_f.at(o);
    out.unit_g[o] = iota_a_pos(m.unit_f.at(o), 1);
  }
  (void)MM;
  return out;
}

SymMonoid monoid_along_k_sig(const AmalgMonoid& m) {
  SymMonoid out;
  out.M = k_sig(m.M);
  SymSig MM = tensor_sym(out.M, out.M);
  // kappa: each class of K(M) (x) K(M) contains exactly one member whose
  // decorations are identity permutations; that member names an op of
  // M (x) M together with the total permutation.
  for (const auto& [n, g] : MM.carrier().grades()) {
    for (const auto& rep : g.elems()) {
      // recover the triple by scanning plugs (as tensor_sym stores reps)
      bool assigned = false;
      for (const auto& pl : amalg_tensor_plugs(m.M, m.M)) {
        const AmalgOp& headop = m.M.op(pl.head);
        int N = 0;
        for (const auto& b : pl.parts) N += m.M.op(b).arity();
        if (N != n) continue;
        // kappa-normal member: outer (head, id), inners (part_i, id)
        SymTensorTriple probe;
        probe.a = k_sig_elem(pl.head, Perm::identity(headop.arity()));
        for (const auto& b : pl.parts)
          probe.bs.push_back(k_sig_elem(b, Perm::identity(m.M.op(b).arity())));
        for (const auto& P : Perm::all(n)) {
          probe.sigma = P;
          auto cls = sym_class_of(out.M, out.M, probe);
          std::string found = sym_triple_label(cls.front());
          for (const auto& mem : cls) found = std::min(found, sym_triple_label(mem));
          if (found == rep) {
            // transported multiplication: K on morphisms twists by the
            // inverse amalgamation
            const std::string& c = m.mult_f.at(pl.label);
            const Perm& s = m.mult_sigma.at(pl.label);
            out.mult[n][rep] = k_sig_elem(c, compose(s.inverse(), P));
            assigned = true;
            break;
          }
        }
        if (assigned) break;
      }
      if (!assigned)
        throw structural_error("monoid_along_k_sig: no kappa-normal member for " + rep);
    }
  }
  for (const auto& o : m.M.base().elems())
    out.unit[o] = k_sig_elem(m.unit_f.at(o), Perm::identity(1));
  return out;
}

}  // namespace polyan
