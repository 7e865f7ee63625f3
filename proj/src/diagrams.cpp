#include "polyan/diagrams.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace polyan {

// ---------------------------------------------------------------- PolyDiag

PolyDiag make_poly(FinSet base, FinSet E, FinSet B, FinMap s, FinMap p, FinMap t) {
  if (s.dom() != E || s.cod() != base) throw structural_error("PolyDiag: bad s");
  if (p.dom() != E || p.cod() != B) throw structural_error("PolyDiag: bad p");
  if (t.dom() != B || t.cod() != base) throw structural_error("PolyDiag: bad t");
  return PolyDiag{std::move(base), std::move(E), std::move(B), std::move(s), std::move(p), std::move(t)};
}

std::vector<std::string> poly_fiber(const PolyDiag& d, const std::string& b) {
  return d.p.preimage(b);
}

bool is_linear(const PolyDiag& d) { return d.p.is_bijective(); }
bool is_monomial(const PolyDiag& d) { return d.t.is_bijective(); }

PolyDiagMor make_poly_mor(PolyDiag dom, PolyDiag cod, FinMap u, FinMap f, FinMap g) {
  if (u.dom() != dom.base || u.cod() != cod.base) throw structural_error("PolyDiagMor: bad u");
  if (f.dom() != dom.B || f.cod() != cod.B) throw structural_error("PolyDiagMor: bad f");
  if (g.dom() != dom.E || g.cod() != cod.E) throw structural_error("PolyDiagMor: bad g");
  for (const auto& b : dom.B.elems())
    if (cod.t(f(b)) != u(dom.t(b))) throw structural_error("PolyDiagMor: t-square fails");
  for (const auto& e : dom.E.elems()) {
    if (cod.s(g(e)) != u(dom.s(e))) throw structural_error("PolyDiagMor: s-square fails");
    if (cod.p(g(e)) != f(dom.p(e))) throw structural_error("PolyDiagMor: p-square fails");
  }
  // middle square must be a pullback: g fiberwise bijective
  for (const auto& b : dom.B.elems()) {
    auto fib = poly_fiber(dom, b);
    auto fib2 = poly_fiber(cod, f(b));
    std::set<std::string> image;
    for (const auto& e : fib) image.insert(g(e));
    if (image.size() != fib.size() || image.size() != fib2.size())
      throw structural_error("PolyDiagMor: middle square is not a pullback at '" + b + "'");
  }
  return PolyDiagMor{std::move(dom), std::move(cod), std::move(u), std::move(f), std::move(g)};
}

PolyDiagMor identity_poly_mor(const PolyDiag& d) {
  return make_poly_mor(d, d, FinMap::identity(d.base), FinMap::identity(d.B), FinMap::identity(d.E));
}

PolyDiagMor compose_poly(const PolyDiagMor& g2, const PolyDiagMor& g1) {
  return make_poly_mor(g1.dom, g2.cod, compose(g2.u, g1.u), compose(g2.f, g1.f),
                       compose(g2.g, g1.g));
}

PolyDiag unit_poly(const FinSet& o) {
  FinSet e("IE", o.elems()), b("IB", o.elems());
  return make_poly(o, e, b, FinMap::identity(o), FinMap::identity(o), FinMap::identity(o));
}

namespace {

std::string plug_label(const std::string& head, const std::vector<std::string>& rest) {
  std::vector<std::string> parts{head};
  parts.insert(parts.end(), rest.begin(), rest.end());
  return tuple_label(parts);
}

}  // namespace

PolyDiag tensor_poly(const PolyDiag& a, const PolyDiag& b) {
  if (a.base != b.base) throw structural_error("tensor_poly: base mismatch");
  std::vector<std::string> Belems, Eelems;
  std::map<std::string, std::string> smap, pmap, tmap;
  struct Plug {
    std::string bop;
    std::vector<std::string> fiber;
    std::vector<std::string> ys;
  };
  std::vector<Plug> plugs;
  for (const auto& bop : a.B.elems()) {
    auto fiber = poly_fiber(a, bop);
    std::vector<std::vector<std::string>> cands;
    for (const auto& e : fiber) {
      std::vector<std::string> c;
      for (const auto& b2 : b.B.elems())
        if (b.t(b2) == a.s(e)) c.push_back(b2);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !fiber.empty()) continue;
    std::vector<std::size_t> idx(fiber.size(), 0);
    while (true) {
      std::vector<std::string> ys;
      for (std::size_t i = 0; i < fiber.size(); ++i) ys.push_back(cands[i][idx[i]]);
      plugs.push_back({bop, fiber, ys});
      if (fiber.empty()) break;
      std::size_t i = 0;
      while (i < fiber.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == fiber.size()) break;
    }
  }
  for (const auto& pl : plugs) {
    std::string bb = plug_label(pl.bop, pl.ys);
    Belems.push_back(bb);
    tmap[bb] = a.t(pl.bop);
    for (std::size_t i = 0; i < pl.fiber.size(); ++i) {
      for (const auto& e2 : poly_fiber(b, pl.ys[i])) {
        std::string ee = tuple_label({bb, pl.fiber[i], e2});
        Eelems.push_back(ee);
        smap[ee] = b.s(e2);
        pmap[ee] = bb;
      }
    }
  }
  FinSet BB("Bx", std::move(Belems)), EE("Ex", std::move(Eelems));
  return make_poly(a.base, EE, BB, FinMap(EE, a.base, std::move(smap)), FinMap(EE, BB, std::move(pmap)),
                   FinMap(BB, a.base, std::move(tmap)));
}

PolyDiagMor tensor_poly_mor(const PolyDiagMor& f, const PolyDiagMor& g) {
  if (!(f.u == g.u)) throw structural_error("tensor_poly_mor: base maps differ");
  PolyDiag dom = tensor_poly(f.dom, g.dom);
  PolyDiag cod = tensor_poly(f.cod, g.cod);
  std::map<std::string, std::string> fm, gm;
  for (const auto& bop : f.dom.B.elems()) {
    auto fiber = poly_fiber(f.dom, bop);
    // enumerate plugs of `bop` again, mapping each through (f, g)
    std::vector<std::vector<std::string>> cands;
    for (const auto& e : fiber) {
      std::vector<std::string> c;
      for (const auto& b2 : g.dom.B.elems())
        if (g.dom.t(b2) == f.dom.s(e)) c.push_back(b2);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !fiber.empty()) continue;
    std::vector<std::size_t> idx(fiber.size(), 0);
    while (true) {
      std::vector<std::string> ys;
      for (std::size_t i = 0; i < fiber.size(); ++i) ys.push_back(cands[i][idx[i]]);
      std::string bb = plug_label(bop, ys);
      // image plug: fiber of f.cod over f(bop) corresponds via f.g
      auto fiber2 = poly_fiber(f.cod, f.f(bop));
      std::vector<std::string> ys2;
      for (const auto& e2 : fiber2) {
        // find the dom fiber element mapping to e2
        std::string src;
        for (std::size_t i = 0; i < fiber.size(); ++i)
          if (f.g(fiber[i]) == e2) src = fiber[i];
        std::size_t i = 0;
        while (fiber[i] != src) ++i;
        ys2.push_back(g.f(ys[i]));
      }
      std::string bb2 = plug_label(f.f(bop), ys2);
      fm[bb] = bb2;
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        for (const auto& e2 : poly_fiber(g.dom, ys[i])) {
          gm[tuple_label({bb, fiber[i], e2})] =
              tuple_label({bb2, f.g(fiber[i]), g.g(e2)});
        }
      }
      if (fiber.empty()) break;
      std::size_t k = 0;
      while (k < fiber.size()) {
        if (++idx[k] < cands[k].size()) break;
        idx[k++] = 0;
      }
      if (k == fiber.size()) break;
    }
  }
  return make_poly_mor(dom, cod, f.u, FinMap(dom.B, cod.B, std::move(fm)),
                       FinMap(dom.E, cod.E, std::move(gm)));
}

PolyDiagMor alpha_poly(const PolyDiag& a, const PolyDiag& b, const PolyDiag& c) {
  PolyDiag bc = tensor_poly(b, c);
  PolyDiag ab = tensor_poly(a, b);
  PolyDiag dom = tensor_poly(a, bc);
  PolyDiag cod = tensor_poly(ab, c);
  std::map<std::string, std::string> fm, gm;
  for (const auto& bb : dom.B.elems()) {
    // bb = (abop | q_1..q_k) with q_i in B(bc); recover the parts by
    // matching against the construction order.
    auto fiberA = dom.p.preimage(bb);  // elements (bb, e, e') of dom.E
    // Recover head and plugs by re-parsing through fibers of a.
    // dom elements were built as plug_label(abop, ys): find them by scan.
    std::string abop;
    std::vector<std::string> ys;
    for (const auto& cand : a.B.elems()) {
      auto fib = poly_fiber(a, cand);
      // try to match: bb must equal plug_label(cand, ys) for a unique ys
      std::vector<std::string> trial;
      bool ok = true;
      // brute-force: enumerate bc plugs of cand
      std::vector<std::vector<std::string>> cands2;
      for (const auto& e : fib) {
        std::vector<std::string> cs;
        for (const auto& q : bc.B.elems())
          if (bc.t(q) == a.s(e)) cs.push_back(q);
        cands2.push_back(cs);
      }
      bool empty = false;
      for (const auto& cs : cands2)
        if (cs.empty()) empty = true;
      if (empty && !fib.empty()) continue;
      std::vector<std::size_t> idx(fib.size(), 0);
      bool found = false;
      while (true) {
        std::vector<std::string> t2;
        for (std::size_t i = 0; i < fib.size(); ++i) t2.push_back(cands2[i][idx[i]]);
        if (plug_label(cand, t2) == bb) {
          abop = cand;
          ys = t2;
          found = true;
          break;
        }
        if (fib.empty()) break;
        std::size_t i = 0;
        while (i < fib.size()) {
          if (++idx[i] < cands2[i].size()) break;
          idx[i++] = 0;
        }
        if (i == fib.size()) break;
      }
      (void)ok;
      (void)trial;
      if (found) break;
    }
    auto fib = poly_fiber(a, abop);
    // each ys[i] is a bc-plug (b_i | z_1..z_m); recover b_i and z's likewise
    std::vector<std::string> bops(fib.size());
    std::vector<std::vector<std::string>> zs(fib.size());
    for (std::size_t i = 0; i < fib.size(); ++i) {
      for (const auto& cand : b.B.elems()) {
        auto fibB = poly_fiber(b, cand);
        std::vector<std::vector<std::string>> cands2;
        for (const auto& e : fibB) {
          std::vector<std::string> cs;
          for (const auto& q : c.B.elems())
            if (c.t(q) == b.s(e)) cs.push_back(q);
          cands2.push_back(cs);
        }
        bool empty = false;
        for (const auto& cs : cands2)
          if (cs.empty()) empty = true;
        if (empty && !fibB.empty()) continue;
        std::vector<std::size_t> idx(fibB.size(), 0);
        bool found = false;
        while (true) {
          std::vector<std::string> t2;
          for (std::size_t k = 0; k < fibB.size(); ++k) t2.push_back(cands2[k][idx[k]]);
          if (plug_label(cand, t2) == ys[i]) {
            bops[i] = cand;
            zs[i] = t2;
            found = true;
            break;
          }
          if (fibB.empty()) break;
          std::size_t k = 0;
          while (k < fibB.size()) {
            if (++idx[k] < cands2[k].size()) break;
            idx[k++] = 0;
          }
          if (k == fibB.size()) break;
        }
        if (found) break;
      }
    }
    // target: ((abop | b_1..b_k) | z-parts in E(ab)-fiber order)
    std::string abpart = plug_label(abop, bops);
    auto fiberAB = poly_fiber(ab, abpart);  // elements (abpart, e, e')
    std::vector<std::string> zflat;
    for (const auto& eab : fiberAB) {
      // eab = tuple(abpart, e, e'); locate (e, e') by scanning
      for (std::size_t i = 0; i < fib.size(); ++i) {
        auto fibB = poly_fiber(b, bops[i]);
        for (std::size_t j = 0; j < fibB.size(); ++j) {
          if (tuple_label({abpart, fib[i], fibB[j]}) == eab) zflat.push_back(zs[i][j]);
        }
      }
    }
    std::string target = plug_label(abpart, zflat);
    fm[bb] = target;
    // E-part: dom.E elements (bb, e, e'') with e'' in fiber of bc over ys[i];
    // e'' = (ys[i], eB, eC).
    for (std::size_t i = 0; i < fib.size(); ++i) {
      auto fibB = poly_fiber(b, bops[i]);
      for (std::size_t j = 0; j < fibB.size(); ++j) {
        for (const auto& eC : poly_fiber(c, zs[i][j])) {
          std::string src = tuple_label({bb, fib[i], tuple_label({ys[i], fibB[j], eC})});
          std::string dst = tuple_label({target, tuple_label({abpart, fib[i], fibB[j]}), eC});
          gm[src] = dst;
        }
      }
    }
  }
  return make_poly_mor(dom, cod, FinMap::identity(a.base), FinMap(dom.B, cod.B, std::move(fm)),
                       FinMap(dom.E, cod.E, std::move(gm)));
}

PolyDiagMor lambda_poly(const PolyDiag& a) {
  PolyDiag i = unit_poly(a.base);
  PolyDiag cod = tensor_poly(i, a);
  std::map<std::string, std::string> fm, gm;
  for (const auto& b : a.B.elems()) fm[b] = plug_label(a.t(b), {b});
  for (const auto& e : a.E.elems()) {
    const std::string& b = a.p(e);
    gm[e] = tuple_label({plug_label(a.t(b), {b}), a.t(b), e});
  }
  return make_poly_mor(a, cod, FinMap::identity(a.base), FinMap(a.B, cod.B, std::move(fm)),
                       FinMap(a.E, cod.E, std::move(gm)));
}

PolyDiagMor rho_poly(const PolyDiag& a) {
  PolyDiag i = unit_poly(a.base);
  PolyDiag dom = tensor_poly(a, i);
  std::map<std::string, std::string> fm, gm;
  for (const auto& bb : dom.B.elems()) {
    // bb = (b | s(e_1)..s(e_k)), all plugs into the unit are forced
    for (const auto& b : a.B.elems()) {
      auto fib = poly_fiber(a, b);
      std::vector<std::string> ys;
      for (const auto& e : fib) ys.push_back(a.s(e));
      if (plug_label(b, ys) == bb) {
        fm[bb] = b;
        for (std::size_t i = 0; i < fib.size(); ++i)
          gm[tuple_label({bb, fib[i], a.s(fib[i])})] = fib[i];
        break;
      }
    }
  }
  return make_poly_mor(dom, a, FinMap::identity(a.base), FinMap(dom.B, a.B, std::move(fm)),
                       FinMap(dom.E, a.E, std::move(gm)));
}

// ------------------------------------------------------------- amalgamated

std::string total_tensor_label(const std::string& a, const std::vector<std::string>& bs) {
  return plug_label(a, bs);
}

AmalgSig tensor_total_amalg(const AmalgSig& a, const AmalgSig& b) {
  if (!(a.base() == b.base())) throw structural_error("tensor_total_amalg: base mismatch");
  std::vector<AmalgOp> ops;
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
      std::vector<std::string> ins;
      for (const auto& bn : bs) {
        const auto& bop = b.op(bn);
        ins.insert(ins.end(), bop.ins.begin(), bop.ins.end());
      }
      ops.push_back({total_tensor_label(op.name, bs), op.out, std::move(ins)});
      if (op.arity() == 0) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return AmalgSig(a.base(), std::move(ops));
}

AmalgSigMor tensor_total_mor(const AmalgSigMor& fbar, const AmalgSigMor& gbar) {
  if (!(fbar.u() == gbar.u())) throw structural_error("tensor_total_mor: base maps differ");
  AmalgSig dom = tensor_total_amalg(fbar.dom(), gbar.dom());
  AmalgSig cod = tensor_total_amalg(fbar.cod(), gbar.cod());
  std::map<std::string, std::string> h;
  std::map<std::string, Perm> sig;
  for (const auto& op : fbar.dom().ops()) {
    std::vector<std::vector<std::string>> cands;
    for (const auto& sort : op.ins) {
      std::vector<std::string> c;
      for (const auto& bop : gbar.dom().ops())
        if (bop.out == sort) c.push_back(bop.name);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && op.arity() > 0) continue;
    std::vector<std::size_t> idx(op.arity(), 0);
    const Perm& sa = fbar.sigma(op.name);
    while (true) {
      std::vector<std::string> bs;
      for (int i = 0; i < op.arity(); ++i) bs.push_back(cands[i][idx[i]]);
      // f (x) g <a, b_i> = <f(a), g(b_{sigma_a(j)})>_j
      std::vector<std::string> bs2;
      for (int j = 1; j <= op.arity(); ++j) bs2.push_back(gbar.f(bs[sa(j) - 1]));
      std::string src = total_tensor_label(op.name, bs);
      h[src] = total_tensor_label(fbar.f(op.name), bs2);
      // block permutation: output block j comes from input block sigma_a(j)
      // with inner permutation tau_{b_{sigma_a(j)}}
      std::vector<int> sizes;
      for (const auto& bn : bs) sizes.push_back(gbar.dom().op(bn).arity());
      std::vector<int> assign;
      std::vector<Perm> inner;
      for (int j = 1; j <= op.arity(); ++j) {
        assign.push_back(sa(j));
        inner.push_back(gbar.sigma(bs[sa(j) - 1]));
      }
      sig[src] = assemble_block_perm(sizes, assign, inner);
      if (op.arity() == 0) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return AmalgSigMor(dom, cod, fbar.u(), std::move(h), std::move(sig));
}

AmalgSig tensor_single_amalg(const AmalgSig& a, const AmalgSig& b) {
  if (!(a.base() == b.base())) throw structural_error("tensor_single_amalg: base mismatch");
  std::vector<AmalgOp> ops;
  for (const auto& ao : a.ops()) {
    for (int i = 1; i <= ao.arity(); ++i) {
      for (const auto& bo : b.ops()) {
        if (bo.out != ao.ins[i - 1]) continue;
        std::vector<std::string> ins;
        for (int k = 1; k <= ao.arity(); ++k)
          if (k != i) ins.push_back(ao.ins[k - 1]);
        ins.insert(ins.end(), bo.ins.begin(), bo.ins.end());
        ops.push_back({tuple_label({ao.name, std::to_string(i), bo.name}), ao.out, std::move(ins)});
      }
    }
  }
  return AmalgSig(a.base(), std::move(ops));
}

AmalgSigMor alpha_amalg(const AmalgSig& a, const AmalgSig& b, const AmalgSig& c) {
  AmalgSig bc = tensor_total_amalg(b, c);
  AmalgSig ab = tensor_total_amalg(a, b);
  AmalgSig dom = tensor_total_amalg(a, bc);
  AmalgSig cod = tensor_total_amalg(ab, c);
  std::map<std::string, std::string> f;
  for (const auto& ao : a.ops()) {
    // enumerate plugs of bc into a
    std::vector<std::vector<std::string>> cands;
    for (const auto& sort : ao.ins) {
      std::vector<std::string> cs;
      for (const auto& q : bc.ops())
        if (q.out == sort) cs.push_back(q.name);
      cands.push_back(std::move(cs));
    }
    bool empty = false;
    for (const auto& cs : cands)
      if (cs.empty()) empty = true;
    if (empty && ao.arity() > 0) continue;
    std::vector<std::size_t> idx(ao.arity(), 0);
    while (true) {
      std::vector<std::string> qs;
      for (int i = 0; i < ao.arity(); ++i) qs.push_back(cands[i][idx[i]]);
      // each q = (b_i | c_i1..c_im); find the parts by scanning b and c
      std::vector<std::string> bops;
      std::vector<std::vector<std::string>> cparts;
      for (const auto& q : qs) {
        bool found = false;
        for (const auto& bo : b.ops()) {
          std::vector<std::vector<std::string>> c2;
          for (const auto& sort : bo.ins) {
            std::vector<std::string> cs;
            for (const auto& co : c.ops())
              if (co.out == sort) cs.push_back(co.name);
            c2.push_back(cs);
          }
          bool emp = false;
          for (const auto& cs : c2)
            if (cs.empty()) emp = true;
          if (emp && bo.arity() > 0) continue;
          std::vector<std::size_t> j(bo.arity(), 0);
          while (true) {
            std::vector<std::string> cs;
            for (int k = 0; k < bo.arity(); ++k) cs.push_back(c2[k][j[k]]);
            if (total_tensor_label(bo.name, cs) == q) {
              bops.push_back(bo.name);
              cparts.push_back(cs);
              found = true;
              break;
            }
            if (bo.arity() == 0) break;
            std::size_t k = 0;
            while (k < j.size()) {
              if (++j[k] < c2[k].size()) break;
              j[k++] = 0;
            }
            if (k == j.size()) break;
          }
          if (found) break;
        }
      }
      std::vector<std::string> call;
      for (const auto& cp : cparts) call.insert(call.end(), cp.begin(), cp.end());
      f[total_tensor_label(ao.name, qs)] =
          total_tensor_label(total_tensor_label(ao.name, bops), call);
      if (ao.arity() == 0) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return AmalgSigMor::strict(dom, cod, FinMap::identity(a.base()), std::move(f));
}

AmalgSigMor lambda_amalg(const AmalgSig& a) {
  AmalgSig cod = tensor_total_amalg(unit_amalg(a.base()), a);
  std::map<std::string, std::string> f;
  for (const auto& op : a.ops()) f[op.name] = total_tensor_label(op.out, {op.name});
  return AmalgSigMor::strict(a, cod, FinMap::identity(a.base()), std::move(f));
}

AmalgSigMor rho_amalg(const AmalgSig& a) {
  AmalgSig dom = tensor_total_amalg(a, unit_amalg(a.base()));
  std::map<std::string, std::string> f;
  for (const auto& op : a.ops()) f[total_tensor_label(op.name, op.ins)] = op.name;
  return AmalgSigMor::strict(dom, a, FinMap::identity(a.base()), std::move(f));
}

// ---------------------------------------------------------------- symmetric

std::string sym_triple_label(const SymTensorTriple& t) {
  std::vector<std::string> parts{t.a};
  for (const auto& b : t.bs) parts.push_back(b);
  parts.push_back(t.sigma.to_string());
  return tuple_label(parts);
}

std::vector<SymTensorTriple> sym_class_of(const SymSig& a, const SymSig& b,
                                          const SymTensorTriple& seed) {
  std::map<std::string, SymTensorTriple> seen;
  std::deque<SymTensorTriple> queue{seed};
  seen.emplace(sym_triple_label(seed), seed);
  const int k = static_cast<int>(seed.bs.size());
  while (!queue.empty()) {
    SymTensorTriple cur = queue.front();
    queue.pop_front();
    std::vector<int> sizes;
    for (const auto& bn : cur.bs) {
      int n = -1;
      for (const auto& [g, gr] : b.carrier().grades())
        if (gr.contains(bn)) n = g;
      sizes.push_back(n);
    }
    for (const auto& tau : Perm::all(k)) {
      // inner permutations rho_i act on block tau(i)
      std::vector<std::vector<Perm>> cand;
      for (int i = 1; i <= k; ++i) cand.push_back(Perm::all(sizes[tau(i) - 1]));
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        std::vector<Perm> rhos;
        for (int i = 0; i < k; ++i) rhos.push_back(cand[i][idx[i]]);
        SymTensorTriple nxt;
        nxt.a = a.carrier().act(k, cur.a, tau);
        for (int i = 1; i <= k; ++i)
          nxt.bs.push_back(b.carrier().act(sizes[tau(i) - 1], cur.bs[tau(i) - 1], rhos[i - 1]));
        Perm blk = operad_compose(tau, rhos);
        nxt.sigma = compose(blk.inverse(), cur.sigma);
        std::string lbl = sym_triple_label(nxt);
        if (!seen.count(lbl)) {
          seen.emplace(lbl, nxt);
          queue.push_back(nxt);
        }
        if (k == 0) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cand[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
      if (k == 0) break;
    }
  }
  std::vector<SymTensorTriple> out;
  for (const auto& [lbl, t] : seen) out.push_back(t);
  return out;
}

namespace {

std::vector<std::string> sym_tensor_profile(const SymSig& a, const SymSig& b,
                                            const SymTensorTriple& t) {
  const int k = static_cast<int>(t.bs.size());
  std::vector<std::string> concat;  // positive typings of the b_i, in block order
  for (int i = 0; i < k; ++i) {
    int n = -1;
    for (const auto& [g, gr] : b.carrier().grades())
      if (gr.contains(t.bs[i])) n = g;
    const auto& p = b.profile(n, t.bs[i]);
    for (int j = 1; j <= n; ++j) concat.push_back(p[j]);
  }
  std::vector<std::string> out{a.profile(k, t.a)[0]};
  for (int m = 1; m <= static_cast<int>(concat.size()); ++m)
    out.push_back(concat[t.sigma(m) - 1]);
  return out;
}

// All (a, b_1..b_k) plug tuples with matching types.
struct SymPlug {
  int k = 0;
  std::string a;
  std::vector<std::string> bs;
  int total = 0;
};

std::vector<SymPlug> sym_plugs(const SymSig& a, const SymSig& b) {
  std::vector<SymPlug> out;
  for (const auto& [k, gr] : a.carrier().grades()) {
    for (const auto& an : gr.elems()) {
      const auto& pa = a.profile(k, an);
      std::vector<std::vector<std::pair<std::string, int>>> cands;
      for (int i = 1; i <= k; ++i) {
        std::vector<std::pair<std::string, int>> c;
        for (const auto& [m, grb] : b.carrier().grades())
          for (const auto& bn : grb.elems())
            if (b.profile(m, bn)[0] == pa[i]) c.push_back({bn, m});
        cands.push_back(std::move(c));
      }
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty && k > 0) continue;
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        SymPlug pl;
        pl.k = k;
        pl.a = an;
        pl.total = 0;
        for (int i = 0; i < k; ++i) {
          pl.bs.push_back(cands[i][idx[i]].first);
          pl.total += cands[i][idx[i]].second;
        }
        out.push_back(pl);
        if (k == 0) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
  }
  return out;
}

}  // namespace

SymSig tensor_sym(const SymSig& a, const SymSig& b) {
  if (!(a.base() == b.base())) throw structural_error("tensor_sym: base mismatch");
  // Enumerate raw triples, partition into ~-classes, and represent each class
  // by its lexicographically minimal member.
  std::map<int, std::vector<std::string>> reps_by_grade;
  std::map<int, std::map<std::string, SymTensorTriple>> rep_store;
  std::map<std::string, std::string> class_of;  // raw label -> rep label
  for (const auto& pl : sym_plugs(a, b)) {
    for (const auto& s : Perm::all(pl.total)) {
      SymTensorTriple t{pl.a, pl.bs, s};
      std::string lbl = sym_triple_label(t);
      if (class_of.count(lbl)) continue;
      auto cls = sym_class_of(a, b, t);
      std::string rep = sym_triple_label(cls.front());
      const SymTensorTriple* reptriple = &cls.front();
      for (const auto& m : cls) {
        std::string ml = sym_triple_label(m);
        if (ml < rep) {
          rep = ml;
          reptriple = &m;
        }
      }
      for (const auto& m : cls) class_of[sym_triple_label(m)] = rep;
      reps_by_grade[pl.total].push_back(rep);
      rep_store[pl.total].emplace(rep, *reptriple);
    }
  }
  std::map<int, FinSet> grades;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  for (auto& [n, reps] : reps_by_grade) {
    std::sort(reps.begin(), reps.end());
    grades.emplace(n, FinSet("ts" + std::to_string(n), reps));
    for (const auto& rep : reps) {
      const SymTensorTriple& t = rep_store[n].at(rep);
      profiles[n][rep] = sym_tensor_profile(a, b, t);
      for (const auto& s : Perm::all(n)) {
        SymTensorTriple moved{t.a, t.bs, compose(t.sigma, s)};
        action[n][rep][s.to_string()] = class_of.at(sym_triple_label(moved));
      }
    }
  }
  return SymSig(a.base(), SymSet(std::move(grades), std::move(action)), std::move(profiles));
}

namespace {

// Find the grade of a carrier element (grades partition the labels we use).
int grade_of(const SymSet& s, const std::string& e) {
  for (const auto& [n, g] : s.grades())
    if (g.contains(e)) return n;
  throw structural_error("grade_of: unknown element '" + e + "'");
}

// Canonical representative lookup in a tensor signature built by tensor_sym.
std::string canon_in_tensor(const SymSig& a, const SymSig& b, const SymSig& tensor,
                            const SymTensorTriple& t) {
  auto cls = sym_class_of(a, b, t);
  std::string rep = sym_triple_label(cls.front());
  for (const auto& m : cls) rep = std::min(rep, sym_triple_label(m));
  int n = 0;
  for (const auto& bn : t.bs) n += grade_of(b.carrier(), bn);
  if (!tensor.carrier().grade(n).contains(rep))
    throw structural_error("canon_in_tensor: representative not found");
  return rep;
}

// Tensor constructions store representatives; recover the triple by
// re-running the enumeration (desk-scale fixtures keep this cheap).
SymTensorTriple parse_rep(const SymSig& a, const SymSig& b, const SymSig& tensor, int n,
                          const std::string& rep) {
  for (const auto& pl : sym_plugs(a, b)) {
    if (pl.total != n) continue;
    for (const auto& s : Perm::all(pl.total)) {
      SymTensorTriple t{pl.a, pl.bs, s};
      if (sym_triple_label(t) == rep) return t;
    }
  }
  throw structural_error("parse_rep: '" + rep + "' is not a stored representative");
}

}  // namespace

SymSigMor tensor_sym_mor(const SymSigMor& f, const SymSigMor& g) {
  if (!(f.u() == g.u())) throw structural_error("tensor_sym_mor: base maps differ");
  SymSig dom = tensor_sym(f.dom(), g.dom());
  SymSig cod = tensor_sym(f.cod(), g.cod());
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& [n, gr] : dom.carrier().grades()) {
    for (const auto& rep : gr.elems()) {
      SymTensorTriple t = parse_rep(f.dom(), g.dom(), dom, n, rep);
      SymTensorTriple img;
      img.a = f.f()(static_cast<int>(t.bs.size()), t.a);
      for (const auto& bn : t.bs) img.bs.push_back(g.f()(grade_of(g.dom().carrier(), bn), bn));
      img.sigma = t.sigma;
      table[n][rep] = canon_in_tensor(f.cod(), g.cod(), cod, img);
    }
  }
  return SymSigMor(dom, cod, f.u(), EquivMap(dom.carrier(), cod.carrier(), std::move(table)));
}

SymSigMor alpha_sym(const SymSig& a, const SymSig& b, const SymSig& c) {
  SymSig bc = tensor_sym(b, c);
  SymSig ab = tensor_sym(a, b);
  SymSig dom = tensor_sym(a, bc);
  SymSig cod = tensor_sym(ab, c);
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& [n, gr] : dom.carrier().grades()) {
    for (const auto& rep : gr.elems()) {
      SymTensorTriple t = parse_rep(a, bc, dom, n, rep);
      const int k = static_cast<int>(t.bs.size());
      // unfold each q_i = [ <b_i, c_i, rho_i> ]
      std::vector<std::string> bops;
      std::vector<std::string> call;
      std::vector<Perm> rhos;
      int nb = 0;
      for (const auto& q : t.bs) {
        SymTensorTriple qt = parse_rep(b, c, bc, grade_of(bc.carrier(), q), q);
        bops.push_back(qt.a);
        nb += static_cast<int>(qt.bs.size());
        for (const auto& cn : qt.bs) call.push_back(cn);
        rhos.push_back(qt.sigma);
      }
      Perm combined = compose(operad_compose(Perm::identity(k), rhos), t.sigma);
      SymTensorTriple inner{t.a, bops, Perm::identity(nb)};
      SymTensorTriple target{canon_in_tensor(a, b, ab, inner), call, combined};
      table[n][rep] = canon_in_tensor(ab, c, cod, target);
    }
  }
  return SymSigMor(dom, cod, FinMap::identity(a.base()),
                   EquivMap(dom.carrier(), cod.carrier(), std::move(table)));
}

SymSigMor lambda_sym(const SymSig& a) {
  SymSig i = unit_sym(a.base());
  SymSig cod = tensor_sym(i, a);
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& [n, gr] : a.carrier().grades()) {
    for (const auto& e : gr.elems()) {
      SymTensorTriple t{a.profile(n, e)[0], {e}, Perm::identity(n)};
      table[n][e] = canon_in_tensor(i, a, cod, t);
    }
  }
  return SymSigMor(a, cod, FinMap::identity(a.base()),
                   EquivMap(a.carrier(), cod.carrier(), std::move(table)));
}

SymSigMor rho_sym(const SymSig& a) {
  SymSig i = unit_sym(a.base());
  SymSig dom = tensor_sym(a, i);
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& [n, gr] : dom.carrier().grades()) {
    for (const auto& rep : gr.elems()) {
      SymTensorTriple t = parse_rep(a, i, dom, n, rep);
      table[n][rep] = a.carrier().act(n, t.a, t.sigma);
    }
  }
  return SymSigMor(dom, a, FinMap::identity(a.base()),
                   EquivMap(dom.carrier(), a.carrier(), std::move(table)));
}

// ---------------------------------------------------------------- T-graphs

Word MonadHandle::mu(const std::vector<Word>& ws) const {
  if (kind == MonadKind::Identity) {
    if (ws.size() != 1 || ws[0].size() != 1)
      throw structural_error("identity monad: mu expects a single unary word");
    return ws[0];
  }
  Word out;
  for (const auto& w : ws) out.insert(out.end(), w.begin(), w.end());
  return out;
}

Word MonadHandle::map(const FinMap& u, const Word& w) const {
  Word out;
  for (const auto& x : w) out.push_back(u(x));
  return out;
}

void MonadHandle::validate(const FinSet& o, const Word& w) const {
  if (kind == MonadKind::Identity && w.size() != 1)
    throw structural_error("identity monad: words have exactly one letter");
  for (const auto& x : w)
    if (!o.contains(x)) throw structural_error("word letter '" + x + "' not in base");
}

std::string word_label(const Word& w) { return tuple_label(w); }

TGraph make_tgraph(MonadHandle monad, FinSet base, FinSet carrier, FinMap gamma,
                   std::map<std::string, Word> delta) {
  if (gamma.dom() != carrier || gamma.cod() != base) throw structural_error("TGraph: bad gamma");
  for (const auto& a : carrier.elems()) {
    auto it = delta.find(a);
    if (it == delta.end()) throw structural_error("TGraph: no delta for '" + a + "'");
    monad.validate(base, it->second);
  }
  return TGraph{monad, std::move(base), std::move(carrier), std::move(gamma), std::move(delta)};
}

TGraphMor make_tgraph_mor(TGraph dom, TGraph cod, FinMap u, FinMap f) {
  if (dom.monad.kind != cod.monad.kind) throw structural_error("TGraphMor: monad mismatch");
  if (u.dom() != dom.base || u.cod() != cod.base) throw structural_error("TGraphMor: bad u");
  if (f.dom() != dom.carrier || f.cod() != cod.carrier) throw structural_error("TGraphMor: bad f");
  for (const auto& a : dom.carrier.elems()) {
    if (cod.gamma(f(a)) != u(dom.gamma(a))) throw structural_error("TGraphMor: gamma square fails");
    if (cod.delta.at(f(a)) != dom.monad.map(u, dom.delta.at(a)))
      throw structural_error("TGraphMor: delta square fails");
  }
  return TGraphMor{std::move(dom), std::move(cod), std::move(u), std::move(f)};
}

TGraphMor identity_tgraph_mor(const TGraph& g) {
  return make_tgraph_mor(g, g, FinMap::identity(g.base), FinMap::identity(g.carrier));
}

TGraphMor compose_tgraph(const TGraphMor& g2, const TGraphMor& g1) {
  return make_tgraph_mor(g1.dom, g2.cod, compose(g2.u, g1.u), compose(g2.f, g1.f));
}

TGraph unit_tgraph(const MonadHandle& monad, const FinSet& o) {
  std::map<std::string, Word> delta;
  for (const auto& x : o.elems()) delta[x] = monad.eta(x);
  FinSet carrier("I", o.elems());
  return make_tgraph(monad, o, carrier, FinMap::identity(o), std::move(delta));
}

TGraph tensor_tgraph(const TGraph& a, const TGraph& b) {
  if (!(a.base == b.base) || a.monad.kind != b.monad.kind)
    throw structural_error("tensor_tgraph: base or monad mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> gm;
  std::map<std::string, Word> dm;
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
      std::string lbl = plug_label(x, bs);
      elems.push_back(lbl);
      gm[lbl] = a.gamma(x);
      std::vector<Word> parts;
      for (const auto& y : bs) parts.push_back(b.delta.at(y));
      dm[lbl] = parts.empty() ? Word{} : a.monad.mu(parts);
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  FinSet carrier("tx", std::move(elems));
  return make_tgraph(a.monad, a.base, carrier, FinMap(carrier, a.base, std::move(gm)), std::move(dm));
}

TGraphMor tensor_tgraph_mor(const TGraphMor& f, const TGraphMor& g) {
  if (!(f.u == g.u)) throw structural_error("tensor_tgraph_mor: base maps differ");
  TGraph dom = tensor_tgraph(f.dom, g.dom);
  TGraph cod = tensor_tgraph(f.cod, g.cod);
  std::map<std::string, std::string> fm;
  for (const auto& x : f.dom.carrier.elems()) {
    const Word& w = f.dom.delta.at(x);
    std::vector<std::vector<std::string>> cands;
    for (const auto& o : w) {
      std::vector<std::string> c;
      for (const auto& y : g.dom.carrier.elems())
        if (g.dom.gamma(y) == o) c.push_back(y);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !w.empty()) continue;
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      std::vector<std::string> bs, bs2;
      for (std::size_t i = 0; i < w.size(); ++i) {
        bs.push_back(cands[i][idx[i]]);
        bs2.push_back(g.f(cands[i][idx[i]]));
      }
      fm[plug_label(x, bs)] = plug_label(f.f(x), bs2);
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return make_tgraph_mor(dom, cod, f.u, FinMap(dom.carrier, cod.carrier, std::move(fm)));
}

TGraphMor alpha_tgraph(const TGraph& a, const TGraph& b, const TGraph& c) {
  TGraph bc = tensor_tgraph(b, c);
  TGraph ab = tensor_tgraph(a, b);
  TGraph dom = tensor_tgraph(a, bc);
  TGraph cod = tensor_tgraph(ab, c);
  std::map<std::string, std::string> fm;
  for (const auto& x : a.carrier.elems()) {
    const Word& w = a.delta.at(x);
    std::vector<std::vector<std::string>> cands;
    for (const auto& o : w) {
      std::vector<std::string> cs;
      for (const auto& q : bc.carrier.elems())
        if (bc.gamma(q) == o) cs.push_back(q);
      cands.push_back(std::move(cs));
    }
    bool empty = false;
    for (const auto& cs : cands)
      if (cs.empty()) empty = true;
    if (empty && !w.empty()) continue;
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      std::vector<std::string> qs;
      for (std::size_t i = 0; i < w.size(); ++i) qs.push_back(cands[i][idx[i]]);
      // each q = (b_i | c_i1..c_im): recover parts by re-enumeration
      std::vector<std::string> bops, call;
      for (const auto& q : qs) {
        bool found = false;
        for (const auto& y : b.carrier.elems()) {
          const Word& wy = b.delta.at(y);
          std::vector<std::vector<std::string>> c2;
          for (const auto& o : wy) {
            std::vector<std::string> cs;
            for (const auto& z : c.carrier.elems())
              if (c.gamma(z) == o) cs.push_back(z);
            c2.push_back(cs);
          }
          bool emp = false;
          for (const auto& cs : c2)
            if (cs.empty()) emp = true;
          if (emp && !wy.empty()) continue;
          std::vector<std::size_t> j(wy.size(), 0);
          while (true) {
            std::vector<std::string> cs;
            for (std::size_t m = 0; m < wy.size(); ++m) cs.push_back(c2[m][j[m]]);
            if (plug_label(y, cs) == q) {
              bops.push_back(y);
              call.insert(call.end(), cs.begin(), cs.end());
              found = true;
              break;
            }
            if (wy.empty()) break;
            std::size_t m = 0;
            while (m < j.size()) {
              if (++j[m] < c2[m].size()) break;
              j[m++] = 0;
            }
            if (m == j.size()) break;
          }
          if (found) break;
        }
      }
      fm[plug_label(x, qs)] = plug_label(plug_label(x, bops), call);
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return make_tgraph_mor(dom, cod, FinMap::identity(a.base),
                         FinMap(dom.carrier, cod.carrier, std::move(fm)));
}

TGraphMor lambda_tgraph(const TGraph& a) {
  TGraph i = unit_tgraph(a.monad, a.base);
  TGraph cod = tensor_tgraph(i, a);
  std::map<std::string, std::string> fm;
  for (const auto& x : a.carrier.elems()) fm[x] = plug_label(a.gamma(x), {x});
  return make_tgraph_mor(a, cod, FinMap::identity(a.base),
                         FinMap(a.carrier, cod.carrier, std::move(fm)));
}

TGraphMor rho_tgraph(const TGraph& a) {
  TGraph i = unit_tgraph(a.monad, a.base);
  TGraph dom = tensor_tgraph(a, i);
  std::map<std::string, std::string> fm;
  for (const auto& x : a.carrier.elems()) fm[plug_label(x, a.delta.at(x))] = x;
  return make_tgraph_mor(dom, a, FinMap::identity(a.base),
                         FinMap(dom.carrier, a.carrier, std::move(fm)));
}

TGraphReindexResult reindex_tgraph(const FinMap& u, const TGraph& b) {
  if (u.cod() != b.base) throw structural_error("reindex_tgraph: base mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> gm, fm;
  std::map<std::string, Word> dm;
  for (const auto& x : b.carrier.elems()) {
    const Word& w = b.delta.at(x);
    std::vector<std::string> os = u.preimage(b.gamma(x));
    std::vector<std::vector<std::string>> cands;
    for (const auto& letter : w) cands.push_back(u.preimage(letter));
    bool empty = os.empty();
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty) continue;
    for (const auto& o : os) {
      std::vector<std::size_t> idx(w.size(), 0);
      while (true) {
        Word lift;
        for (std::size_t i = 0; i < w.size(); ++i) lift.push_back(cands[i][idx[i]]);
        std::vector<std::string> parts{o, x};
        parts.insert(parts.end(), lift.begin(), lift.end());
        std::string lbl = tuple_label(parts);
        elems.push_back(lbl);
        gm[lbl] = o;
        dm[lbl] = lift;
        fm[lbl] = x;
        if (w.empty()) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
  }
  FinSet carrier("u*", std::move(elems));
  TGraph g = make_tgraph(b.monad, u.dom(), carrier, FinMap(carrier, u.dom(), std::move(gm)),
                         std::move(dm));
  TGraphMor prone = make_tgraph_mor(g, b, u, FinMap(carrier, b.carrier, std::move(fm)));
  return TGraphReindexResult{g, prone};
}

TGraphSupineResult supine_tgraph(const FinMap& u, const TGraph& a) {
  if (u.dom() != a.base) throw structural_error("supine_tgraph: base mismatch");
  std::map<std::string, std::string> gm;
  std::map<std::string, Word> dm;
  for (const auto& x : a.carrier.elems()) {
    gm[x] = u(a.gamma(x));
    dm[x] = a.monad.map(u, a.delta.at(x));
  }
  TGraph g = make_tgraph(a.monad, u.cod(), a.carrier, FinMap(a.carrier, u.cod(), std::move(gm)),
                         std::move(dm));
  TGraphMor mor = make_tgraph_mor(a, g, u, FinMap::identity(a.carrier));
  return TGraphSupineResult{g, mor};
}

MonadMorphism unit_collapse(const MonadHandle& t) {
  MonadMorphism m;
  m.src = t;
  m.dst = MonadHandle{MonadKind::Identity};
  m.xi = [](const FinSet&, const Word& w) { return w; };  // eta on one-letter words
  return m;
}

MonadMorphism identity_monad_morphism(const MonadHandle& t) {
  MonadMorphism m;
  m.src = t;
  m.dst = t;
  m.xi = [](const FinSet&, const Word& w) { return w; };
  return m;
}

TGraph gph_of_monad_morphism(const MonadMorphism& m, const TGraph& a) {
  if (a.monad.kind != m.src.kind)
    throw structural_error("gph_of_monad_morphism: graph not over the source monad");
  // unit condition xi o eta^T = eta^S, checked on every base element
  for (const auto& o : a.base.elems()) {
    if (m.xi(a.base, m.dst.eta(o)) != m.src.eta(o))
      throw structural_error("gph_of_monad_morphism: unit square fails at '" + o + "'");
  }
  // carrier = pullback of delta against xi_O; candidate words: the original
  // delta value (identity morphisms) plus all unary words (collapses).
  std::vector<std::string> elems;
  std::map<std::string, std::string> gm;
  std::map<std::string, Word> dm;
  for (const auto& x : a.carrier.elems()) {
    std::vector<Word> cands{a.delta.at(x)};
    for (const auto& o : a.base.elems()) cands.push_back(Word{o});
    std::set<std::string> done;
    for (const auto& w : cands) {
      try {
        m.dst.validate(a.base, w);
      } catch (const structural_error&) {
        continue;
      }
      if (!done.insert(word_label(w)).second) continue;
      if (m.xi(a.base, w) == a.delta.at(x)) {
        std::vector<std::string> parts{x};
        parts.insert(parts.end(), w.begin(), w.end());
        std::string lbl = tuple_label(parts);
        elems.push_back(lbl);
        gm[lbl] = a.gamma(x);
        dm[lbl] = w;
      }
    }
  }
  FinSet carrier("gph", std::move(elems));
  return make_tgraph(m.dst, a.base, carrier, FinMap(carrier, a.base, std::move(gm)), std::move(dm));
}

// ------------------------------------------------------------- analytic dg

AnDiag make_andiag(FinSet base, SymSet carrier,
                   std::map<int, std::map<std::string, std::vector<std::string>>> s,
                   std::map<int, std::map<std::string, std::string>> t) {
  for (const auto& [n, g] : carrier.grades()) {
    for (const auto& a : g.elems()) {
      const auto& sa = s.at(n).at(a);
      if (static_cast<int>(sa.size()) != n) throw structural_error("AnDiag: source arity mismatch");
      for (const auto& o : sa)
        if (!base.contains(o)) throw structural_error("AnDiag: source type not in base");
      if (!base.contains(t.at(n).at(a))) throw structural_error("AnDiag: target type not in base");
      for (const auto& sig : Perm::all(n)) {
        const std::string& a2 = carrier.act(n, a, sig);
        if (t.at(n).at(a2) != t.at(n).at(a)) throw structural_error("AnDiag: target not invariant");
        // positions carry the conjugation action: s(a.sigma, j) = s(a, sigma(j))
        for (int j = 1; j <= n; ++j)
          if (s.at(n).at(a2)[j - 1] != sa[sig(j) - 1])
            throw structural_error("AnDiag: source typing not equivariant");
      }
    }
  }
  return AnDiag{std::move(base), std::move(carrier), std::move(s), std::move(t)};
}

AnDiagMor make_andiag_mor(AnDiag dom, AnDiag cod, FinMap u, EquivMap f) {
  for (const auto& [n, g] : dom.carrier.grades()) {
    for (const auto& a : g.elems()) {
      const std::string& fa = f(n, a);
      if (cod.t.at(n).at(fa) != u(dom.t.at(n).at(a)))
        throw structural_error("AnDiagMor: target square fails");
      for (int j = 1; j <= n; ++j)
        if (cod.s.at(n).at(fa)[j - 1] != u(dom.s.at(n).at(a)[j - 1]))
          throw structural_error("AnDiagMor: source square fails");
    }
  }
  return AnDiagMor{std::move(dom), std::move(cod), std::move(u), std::move(f)};
}

AnDiag unit_andiag(const FinSet& o) {
  std::map<int, FinSet> grades;
  grades.emplace(1, FinSet("I1", o.elems()));
  SymSet carrier = SymSet::trivial(std::move(grades));
  std::map<int, std::map<std::string, std::vector<std::string>>> s;
  std::map<int, std::map<std::string, std::string>> t;
  for (const auto& x : o.elems()) {
    s[1][x] = {x};
    t[1][x] = x;
  }
  return make_andiag(o, std::move(carrier), std::move(s), std::move(t));
}

}  // namespace polyan
