#include "polyan/evaluation.hpp"

#include <algorithm>
#include <set>

namespace polyan {

SliceObj make_slice(FinSet total, FinMap d) {
  if (d.dom() != total) throw structural_error("SliceObj: typing domain mismatch");
  return SliceObj{std::move(total), std::move(d)};
}

SliceObj identity_slice(const FinSet& o) { return SliceObj{o, FinMap::identity(o)}; }

std::vector<FinMap> slice_maps(const SliceObj& x, const SliceObj& y) {
  std::vector<FinMap> out;
  if (!(x.d.cod() == y.d.cod())) return out;
  if (x.total.size() == 0) {
    out.push_back(FinMap(x.total, y.total, {}));
    return out;
  }
  std::vector<std::vector<std::string>> cands;
  for (const auto& e : x.total.elems()) {
    std::vector<std::string> c;
    for (const auto& v : y.total.elems())
      if (y.d(v) == x.d(e)) c.push_back(v);
    if (c.empty()) return out;
    cands.push_back(std::move(c));
  }
  std::vector<std::size_t> idx(x.total.size(), 0);
  while (true) {
    std::map<std::string, std::string> t;
    for (std::size_t i = 0; i < x.total.size(); ++i) t[x.total.at(i)] = cands[i][idx[i]];
    out.emplace_back(x.total, y.total, std::move(t));
    std::size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < cands[i].size()) break;
      idx[i++] = 0;
    }
    if (i == idx.size()) break;
  }
  return out;
}

std::vector<SliceObj> canonical_slices(const FinSet& o, int bound) {
  std::vector<SliceObj> out;
  for (int k = 0; k <= bound; ++k) {
    // nondecreasing typings: multisets of base elements of size k
    std::vector<std::vector<std::size_t>> typings;
    std::vector<std::size_t> cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
      if (left == 0) {
        typings.push_back(cur);
        return;
      }
      for (std::size_t i = start; i < o.size(); ++i) {
        cur.push_back(i);
        rec(i, left - 1);
        cur.pop_back();
      }
    };
    rec(0, k);
    for (const auto& ty : typings) {
      std::vector<std::string> elems;
      std::map<std::string, std::string> d;
      for (int i = 0; i < k; ++i) {
        std::string e = "x" + std::to_string(i + 1);
        elems.push_back(e);
        d[e] = o.at(ty[i]);
      }
      FinSet total("X", std::move(elems));
      out.push_back(SliceObj{total, FinMap(total, o, std::move(d))});
    }
  }
  return out;
}

std::vector<SliceObj> all_slices(const FinSet& o, int bound) {
  std::vector<SliceObj> out;
  for (int k = 0; k <= bound; ++k) {
    std::vector<std::string> elems;
    for (int i = 0; i < k; ++i) elems.push_back("x" + std::to_string(i + 1));
    FinSet total("X", elems);
    if (k == 0) {
      out.push_back(SliceObj{total, FinMap(total, o, {})});
      continue;
    }
    for (const auto& d : all_maps(total, o)) out.push_back(SliceObj{total, d});
  }
  return out;
}

// ------------------------------------------------------------- evaluation

SliceObj eval_amalg(const AmalgSig& a, const SliceObj& x) {
  if (!(a.base() == x.d.cod())) throw structural_error("eval_amalg: base mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> d;
  for (const auto& op : a.ops()) {
    std::vector<std::vector<std::string>> cands;
    for (const auto& sort : op.ins) {
      std::vector<std::string> c;
      for (const auto& e : x.total.elems())
        if (x.d(e) == sort) c.push_back(e);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && op.arity() > 0) continue;
    std::vector<std::size_t> idx(op.arity(), 0);
    while (true) {
      std::vector<std::string> parts{op.name};
      for (int i = 0; i < op.arity(); ++i) parts.push_back(cands[i][idx[i]]);
      std::string lbl = tuple_label(parts);
      elems.push_back(lbl);
      d[lbl] = op.out;
      if (op.arity() == 0) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  FinSet total("A*X", std::move(elems));
  return SliceObj{total, FinMap(total, a.base(), std::move(d))};
}

SliceObj eval_poly(const PolyDiag& dg, const SliceObj& x) {
  if (!(dg.base == x.d.cod())) throw structural_error("eval_poly: base mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> d;
  for (const auto& b : dg.B.elems()) {
    auto fiber = poly_fiber(dg, b);
    std::vector<std::vector<std::string>> cands;
    for (const auto& e : fiber) {
      std::vector<std::string> c;
      for (const auto& v : x.total.elems())
        if (x.d(v) == dg.s(e)) c.push_back(v);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !fiber.empty()) continue;
    std::vector<std::size_t> idx(fiber.size(), 0);
    while (true) {
      std::vector<std::string> parts{b};
      for (std::size_t i = 0; i < fiber.size(); ++i) parts.push_back(cands[i][idx[i]]);
      std::string lbl = tuple_label(parts);
      elems.push_back(lbl);
      d[lbl] = dg.t(b);
      if (fiber.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  FinSet total("P(X)", std::move(elems));
  return SliceObj{total, FinMap(total, dg.base, std::move(d))};
}

std::string analytic_class_rep(const SymSig& a, int n, const std::string& op,
                               const std::vector<std::string>& xs) {
  std::string best;
  for (const auto& s : Perm::all(n)) {
    std::vector<std::string> parts{a.carrier().act(n, op, s)};
    for (int i = 1; i <= n; ++i) parts.push_back(xs[s(i) - 1]);
    std::string lbl = tuple_label(parts);
    if (best.empty() || lbl < best) best = lbl;
  }
  return best;
}

SliceObj eval_analytic(const SymSig& a, const SliceObj& x) {
  if (!(a.base() == x.d.cod())) throw structural_error("eval_analytic: base mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> d;
  std::set<std::string> seen;
  for (const auto& [n, g] : a.carrier().grades()) {
    for (const auto& op : g.elems()) {
      const auto& p = a.profile(n, op);
      std::vector<std::vector<std::string>> cands;
      for (int i = 1; i <= n; ++i) {
        std::vector<std::string> c;
        for (const auto& v : x.total.elems())
          if (x.d(v) == p[i]) c.push_back(v);
        cands.push_back(std::move(c));
      }
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty && n > 0) continue;
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        std::vector<std::string> xs;
        for (int i = 0; i < n; ++i) xs.push_back(cands[i][idx[i]]);
        std::string rep = analytic_class_rep(a, n, op, xs);
        if (seen.insert(rep).second) {
          elems.push_back(rep);
          d[rep] = p[0];
        }
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
  std::sort(elems.begin(), elems.end());
  FinSet total("An(X)", std::move(elems));
  return SliceObj{total, FinMap(total, a.base(), std::move(d))};
}

SliceObj eval_tgraph(const TGraph& g, const SliceObj& x) {
  if (!(g.base == x.d.cod())) throw structural_error("eval_tgraph: base mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> d;
  for (const auto& a : g.carrier.elems()) {
    const Word& w = g.delta.at(a);
    std::vector<std::vector<std::string>> cands;
    for (const auto& o : w) {
      std::vector<std::string> c;
      for (const auto& v : x.total.elems())
        if (x.d(v) == o) c.push_back(v);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !w.empty()) continue;
    std::vector<std::size_t> idx(w.size(), 0);
    while (true) {
      std::vector<std::string> parts{a};
      for (std::size_t i = 0; i < w.size(); ++i) parts.push_back(cands[i][idx[i]]);
      std::string lbl = tuple_label(parts);
      elems.push_back(lbl);
      d[lbl] = g.gamma(a);
      if (w.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  FinSet total("T*X", std::move(elems));
  return SliceObj{total, FinMap(total, g.base, std::move(d))};
}

// ----------------------------------------------------- endofunctor handles

namespace {

// Generic "elements are head + argument tuple, maps act on arguments"
// action used by every evaluator.
FinMap tuple_action(const SliceObj& fx, const SliceObj& fy,
                    const std::function<std::string(const std::string&)>& act) {
  std::map<std::string, std::string> t;
  for (const auto& e : fx.total.elems()) t[e] = act(e);
  return FinMap(fx.total, fy.total, std::move(t));
}

// Re-enumerates an evaluator's elements as (head, argument list) pairs.
struct Decomposed {
  std::string head;
  std::vector<std::string> args;
};

std::map<std::string, Decomposed> decompose_amalg(const AmalgSig& a, const SliceObj& x) {
  std::map<std::string, Decomposed> out;
  for (const auto& op : a.ops()) {
    std::vector<std::vector<std::string>> cands;
    for (const auto& sort : op.ins) {
      std::vector<std::string> c;
      for (const auto& e : x.total.elems())
        if (x.d(e) == sort) c.push_back(e);
      cands.push_back(std::move(c));
    }
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && op.arity() > 0) continue;
    std::vector<std::size_t> idx(op.arity(), 0);
    while (true) {
      std::vector<std::string> parts{op.name};
      std::vector<std::string> args;
      for (int i = 0; i < op.arity(); ++i) {
        parts.push_back(cands[i][idx[i]]);
        args.push_back(cands[i][idx[i]]);
      }
      out[tuple_label(parts)] = Decomposed{op.name, args};
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

FunctorHandle functor_of_amalg(const AmalgSig& a) {
  FunctorHandle h;
  h.dom_base = a.base();
  h.cod_base = a.base();
  h.on_obj = [a](const SliceObj& x) { return eval_amalg(a, x); };
  h.on_map = [a](const FinMap& g, const SliceObj& x, const SliceObj& y) {
    SliceObj fx = eval_amalg(a, x), fy = eval_amalg(a, y);
    auto dec = decompose_amalg(a, x);
    return tuple_action(fx, fy, [&](const std::string& e) {
      const auto& de = dec.at(e);
      std::vector<std::string> parts{de.head};
      for (const auto& v : de.args) parts.push_back(g(v));
      return tuple_label(parts);
    });
  };
  return h;
}

FunctorHandle functor_of_poly(const PolyDiag& d) {
  FunctorHandle h;
  h.dom_base = d.base;
  h.cod_base = d.base;
  h.on_obj = [d](const SliceObj& x) { return eval_poly(d, x); };
  h.on_map = [d](const FinMap& g, const SliceObj& x, const SliceObj& y) {
    SliceObj fx = eval_poly(d, x), fy = eval_poly(d, y);
    std::map<std::string, std::string> t;
    for (const auto& b : d.B.elems()) {
      auto fiber = poly_fiber(d, b);
      std::vector<std::vector<std::string>> cands;
      for (const auto& e : fiber) {
        std::vector<std::string> c;
        for (const auto& v : x.total.elems())
          if (x.d(v) == d.s(e)) c.push_back(v);
        cands.push_back(std::move(c));
      }
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty && !fiber.empty()) continue;
      std::vector<std::size_t> idx(fiber.size(), 0);
      while (true) {
        std::vector<std::string> parts{b}, parts2{b};
        for (std::size_t i = 0; i < fiber.size(); ++i) {
          parts.push_back(cands[i][idx[i]]);
          parts2.push_back(g(cands[i][idx[i]]));
        }
        t[tuple_label(parts)] = tuple_label(parts2);
        if (fiber.empty()) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    return FinMap(fx.total, fy.total, std::move(t));
  };
  return h;
}

FunctorHandle functor_of_analytic(const SymSig& a) {
  FunctorHandle h;
  h.dom_base = a.base();
  h.cod_base = a.base();
  h.on_obj = [a](const SliceObj& x) { return eval_analytic(a, x); };
  h.on_map = [a](const FinMap& g, const SliceObj& x, const SliceObj& y) {
    SliceObj fx = eval_analytic(a, x), fy = eval_analytic(a, y);
    std::map<std::string, std::string> t;
    for (const auto& [n, gr] : a.carrier().grades()) {
      for (const auto& op : gr.elems()) {
        const auto& p = a.profile(n, op);
        std::vector<std::vector<std::string>> cands;
        for (int i = 1; i <= n; ++i) {
          std::vector<std::string> c;
          for (const auto& v : x.total.elems())
            if (x.d(v) == p[i]) c.push_back(v);
          cands.push_back(std::move(c));
        }
        bool empty = false;
        for (const auto& c : cands)
          if (c.empty()) empty = true;
        if (empty && n > 0) continue;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
          std::vector<std::string> xs, ys;
          for (int i = 0; i < n; ++i) {
            xs.push_back(cands[i][idx[i]]);
            ys.push_back(g(cands[i][idx[i]]));
          }
          t[analytic_class_rep(a, n, op, xs)] = analytic_class_rep(a, n, op, ys);
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
    return FinMap(fx.total, fy.total, std::move(t));
  };
  return h;
}

FunctorHandle functor_of_tgraph(const TGraph& gph) {
  FunctorHandle h;
  h.dom_base = gph.base;
  h.cod_base = gph.base;
  h.on_obj = [gph](const SliceObj& x) { return eval_tgraph(gph, x); };
  h.on_map = [gph](const FinMap& g, const SliceObj& x, const SliceObj& y) {
    SliceObj fx = eval_tgraph(gph, x), fy = eval_tgraph(gph, y);
    std::map<std::string, std::string> t;
    for (const auto& a : gph.carrier.elems()) {
      const Word& w = gph.delta.at(a);
      std::vector<std::vector<std::string>> cands;
      for (const auto& o : w) {
        std::vector<std::string> c;
        for (const auto& v : x.total.elems())
          if (x.d(v) == o) c.push_back(v);
        cands.push_back(std::move(c));
      }
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty && !w.empty()) continue;
      std::vector<std::size_t> idx(w.size(), 0);
      while (true) {
        std::vector<std::string> parts{a}, parts2{a};
        for (std::size_t i = 0; i < w.size(); ++i) {
          parts.push_back(cands[i][idx[i]]);
          parts2.push_back(g(cands[i][idx[i]]));
        }
        t[tuple_label(parts)] = tuple_label(parts2);
        if (w.empty()) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    return FinMap(fx.total, fy.total, std::move(t));
  };
  return h;
}

namespace {

SliceObj u_star_slice(const FinMap& u, const SliceObj& y) {
  PullbackResult pb = pullback(u, y.d);
  return SliceObj{pb.object, pb.to_left};
}

FinMap u_star_map(const FinMap& u, const SliceObj& y, const SliceObj& y2, const FinMap& g) {
  SliceObj py = u_star_slice(u, y), py2 = u_star_slice(u, y2);
  std::map<std::string, std::string> t;
  for (const auto& o : u.dom().elems())
    for (const auto& v : y.total.elems())
      if (u(o) == y.d(v)) t[pair_label(o, v)] = pair_label(o, g(v));
  return FinMap(py.total, py2.total, std::move(t));
}

}  // namespace

FunctorHandle precompose_pullback(const FunctorHandle& f, const FinMap& u) {
  FunctorHandle h;
  h.dom_base = u.cod();
  h.cod_base = f.cod_base;
  h.on_obj = [f, u](const SliceObj& y) { return f.on_obj(u_star_slice(u, y)); };
  h.on_map = [f, u](const FinMap& g, const SliceObj& y, const SliceObj& y2) {
    return f.on_map(u_star_map(u, y, y2, g), u_star_slice(u, y), u_star_slice(u, y2));
  };
  return h;
}

FunctorHandle postcompose_pullback(const FinMap& u, const FunctorHandle& f) {
  FunctorHandle h;
  h.dom_base = f.dom_base;
  h.cod_base = u.dom();
  h.on_obj = [f, u](const SliceObj& y) { return u_star_slice(u, f.on_obj(y)); };
  h.on_map = [f, u](const FinMap& g, const SliceObj& y, const SliceObj& y2) {
    return u_star_map(u, f.on_obj(y), f.on_obj(y2), f.on_map(g, y, y2));
  };
  return h;
}

NatTransData make_nat_trans(FunctorHandle source, FunctorHandle target,
                            std::vector<SliceObj> family,
                            std::vector<std::map<std::string, std::string>> components) {
  if (family.size() != components.size())
    throw structural_error("NatTransData: one component per family object required");
  NatTransData t{std::move(source), std::move(target), std::move(family), std::move(components)};
  for (std::size_t i = 0; i < t.family.size(); ++i) {
    SliceObj fx = t.source.on_obj(t.family[i]);
    SliceObj gx = t.target.on_obj(t.family[i]);
    for (const auto& e : fx.total.elems()) {
      auto it = t.components[i].find(e);
      if (it == t.components[i].end())
        throw structural_error("NatTransData: missing component value");
      if (!gx.total.contains(it->second))
        throw structural_error("NatTransData: component value outside target");
      if (gx.d(it->second) != fx.d(e))
        throw structural_error("NatTransData: component does not respect typing");
    }
    for (std::size_t j = 0; j < t.family.size(); ++j) {
      for (const auto& g : slice_maps(t.family[i], t.family[j])) {
        FinMap fg = t.source.on_map(g, t.family[i], t.family[j]);
        FinMap gg = t.target.on_map(g, t.family[i], t.family[j]);
        for (const auto& e : fx.total.elems())
          if (gg(t.components[i].at(e)) != t.components[j].at(fg(e)))
            throw structural_error("NatTransData: naturality square fails");
      }
    }
  }
  return t;
}

// ---------------------------------------------------------- rep on morphism

NatTransData rep_on_morphism(const AmalgSigMor& m, const std::vector<SliceObj>& family) {
  FunctorHandle src = precompose_pullback(functor_of_amalg(m.dom()), m.u());
  FunctorHandle dst = postcompose_pullback(m.u(), functor_of_amalg(m.cod()));
  std::vector<std::map<std::string, std::string>> comps;
  for (const auto& y : family) {
    SliceObj uy = u_star_slice(m.u(), y);
    auto dec = decompose_amalg(m.dom(), uy);
    std::map<std::string, std::string> c;
    for (const auto& [lbl, de] : dec) {
      const AmalgOp& op = m.dom().op(de.head);
      const Perm& s = m.sigma(de.head);
      std::vector<std::string> parts{m.f(de.head)};
      for (int j = 1; j <= op.arity(); ++j) {
        // strip the pullback tag: arguments are pairs (o, y-elem)
        const std::string& arg = de.args[s(j) - 1];
        // recover the Y component via the pullback projection
        PullbackResult pb = pullback(m.u(), y.d);
        parts.push_back(pb.to_right(arg));
      }
      c[lbl] = pair_label(op.out, tuple_label(parts));
    }
    comps.push_back(std::move(c));
  }
  return make_nat_trans(src, dst, family, std::move(comps));
}

NatTransData rep_on_morphism(const PolyDiagMor& m, const std::vector<SliceObj>& family) {
  FunctorHandle src = precompose_pullback(functor_of_poly(m.dom), m.u);
  FunctorHandle dst = postcompose_pullback(m.u, functor_of_poly(m.cod));
  std::vector<std::map<std::string, std::string>> comps;
  for (const auto& y : family) {
    SliceObj uy = u_star_slice(m.u, y);
    PullbackResult pb = pullback(m.u, y.d);
    std::map<std::string, std::string> c;
    for (const auto& b : m.dom.B.elems()) {
      auto fiber = poly_fiber(m.dom, b);
      auto fiber2 = poly_fiber(m.cod, m.f(b));
      std::vector<std::vector<std::string>> cands;
      for (const auto& e : fiber) {
        std::vector<std::string> cc;
        for (const auto& v : uy.total.elems())
          if (uy.d(v) == m.dom.s(e)) cc.push_back(v);
        cands.push_back(std::move(cc));
      }
      bool empty = false;
      for (const auto& cc : cands)
        if (cc.empty()) empty = true;
      if (empty && !fiber.empty()) continue;
      std::vector<std::size_t> idx(fiber.size(), 0);
      while (true) {
        std::vector<std::string> parts{b};
        std::map<std::string, std::string> assignment;
        for (std::size_t i = 0; i < fiber.size(); ++i) {
          parts.push_back(cands[i][idx[i]]);
          assignment[fiber[i]] = cands[i][idx[i]];
        }
        // <b,y> |-> <f(b), y o (g|fiber)^{-1}> paired with t(b)
        std::vector<std::string> parts2{m.f(b)};
        for (const auto& e2 : fiber2) {
          std::string pre;
          for (const auto& e : fiber)
            if (m.g(e) == e2) pre = e;
          parts2.push_back(pb.to_right(assignment.at(pre)));
        }
        c[tuple_label(parts)] = pair_label(m.dom.t(b), tuple_label(parts2));
        if (fiber.empty()) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    comps.push_back(std::move(c));
  }
  return make_nat_trans(src, dst, family, std::move(comps));
}

NatTransData rep_on_morphism(const SymSigMor& m, const std::vector<SliceObj>& family) {
  FunctorHandle src = precompose_pullback(functor_of_analytic(m.dom()), m.u());
  FunctorHandle dst = postcompose_pullback(m.u(), functor_of_analytic(m.cod()));
  std::vector<std::map<std::string, std::string>> comps;
  for (const auto& y : family) {
    SliceObj uy = u_star_slice(m.u(), y);
    PullbackResult pb = pullback(m.u(), y.d);
    std::map<std::string, std::string> c;
    for (const auto& [n, gr] : m.dom().carrier().grades()) {
      for (const auto& op : gr.elems()) {
        const auto& p = m.dom().profile(n, op);
        std::vector<std::vector<std::string>> cands;
        for (int i = 1; i <= n; ++i) {
          std::vector<std::string> cc;
          for (const auto& v : uy.total.elems())
            if (uy.d(v) == p[i]) cc.push_back(v);
          cands.push_back(std::move(cc));
        }
        bool empty = false;
        for (const auto& cc : cands)
          if (cc.empty()) empty = true;
        if (empty && n > 0) continue;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
          std::vector<std::string> xs, ys;
          for (int i = 0; i < n; ++i) {
            xs.push_back(cands[i][idx[i]]);
            ys.push_back(pb.to_right(cands[i][idx[i]]));
          }
          c[analytic_class_rep(m.dom(), n, op, xs)] =
              pair_label(p[0], analytic_class_rep(m.cod(), n, m.f()(n, op), ys));
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
    comps.push_back(std::move(c));
  }
  return make_nat_trans(src, dst, family, std::move(comps));
}

NatTransData rep_on_morphism(const TGraphMor& m, const std::vector<SliceObj>& family) {
  FunctorHandle src = precompose_pullback(functor_of_tgraph(m.dom), m.u);
  FunctorHandle dst = postcompose_pullback(m.u, functor_of_tgraph(m.cod));
  std::vector<std::map<std::string, std::string>> comps;
  for (const auto& y : family) {
    SliceObj uy = u_star_slice(m.u, y);
    PullbackResult pb = pullback(m.u, y.d);
    std::map<std::string, std::string> c;
    for (const auto& a : m.dom.carrier.elems()) {
      const Word& w = m.dom.delta.at(a);
      std::vector<std::vector<std::string>> cands;
      for (const auto& o : w) {
        std::vector<std::string> cc;
        for (const auto& v : uy.total.elems())
          if (uy.d(v) == o) cc.push_back(v);
        cands.push_back(std::move(cc));
      }
      bool empty = false;
      for (const auto& cc : cands)
        if (cc.empty()) empty = true;
      if (empty && !w.empty()) continue;
      std::vector<std::size_t> idx(w.size(), 0);
      while (true) {
        std::vector<std::string> parts{a}, parts2{m.f(a)};
        for (std::size_t i = 0; i < w.size(); ++i) {
          parts.push_back(cands[i][idx[i]]);
          parts2.push_back(pb.to_right(cands[i][idx[i]]));
        }
        c[tuple_label(parts)] = pair_label(m.dom.gamma(a), tuple_label(parts2));
        if (w.empty()) break;
        std::size_t i = 0;
        while (i < idx.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == idx.size()) break;
      }
    }
    comps.push_back(std::move(c));
  }
  return make_nat_trans(src, dst, family, std::move(comps));
}

namespace {

bool cartesian_check(const NatTransData& t, bool strict) {
  for (std::size_t i = 0; i < t.family.size(); ++i) {
    SliceObj fx = t.source.on_obj(t.family[i]);
    SliceObj gx = t.target.on_obj(t.family[i]);
    FinMap ti(fx.total, gx.total,
              [&] {
                std::map<std::string, std::string> m;
                for (const auto& e : fx.total.elems()) m[e] = t.components[i].at(e);
                return m;
              }());
    for (std::size_t j = 0; j < t.family.size(); ++j) {
      SliceObj fy = t.source.on_obj(t.family[j]);
      SliceObj gy = t.target.on_obj(t.family[j]);
      FinMap tj(fy.total, gy.total,
                [&] {
                  std::map<std::string, std::string> m;
                  for (const auto& e : fy.total.elems()) m[e] = t.components[j].at(e);
                  return m;
                }());
      for (const auto& g : slice_maps(t.family[i], t.family[j])) {
        FinMap fg = t.source.on_map(g, t.family[i], t.family[j]);
        FinMap gg = t.target.on_map(g, t.family[i], t.family[j]);
        SquareOfSets sq{fg, ti, tj, gg};
        if (strict ? !is_strict_pullback(sq) : !is_weak_pullback(sq)) return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_weakly_cartesian(const NatTransData& t) { return cartesian_check(t, false); }
bool is_cartesian(const NatTransData& t) { return cartesian_check(t, true); }

// -------------------------------------------------------- prone and supine

PolyProneResult prone_poly(const FinMap& u, const PolyDiag& d) {
  if (u.cod() != d.base) throw structural_error("prone_poly: base mismatch");
  // W = t_! p_* s^* applied to (O, u); B~ = u^*(W); E~ has fibers carried
  // over from the original fibers.
  std::vector<std::string> Bel, Eel;
  std::map<std::string, std::string> tm, sm, pm, fm, gm;
  for (const auto& b : d.B.elems()) {
    auto fiber = poly_fiber(d, b);
    std::vector<std::vector<std::string>> cands;
    for (const auto& e : fiber) cands.push_back(u.preimage(d.s(e)));
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty && !fiber.empty()) continue;
    std::vector<std::string> outs = u.preimage(d.t(b));
    if (outs.empty()) continue;
    std::vector<std::size_t> idx(fiber.size(), 0);
    while (true) {
      std::vector<std::string> lifts;
      for (std::size_t i = 0; i < fiber.size(); ++i) lifts.push_back(cands[i][idx[i]]);
      std::vector<std::string> wparts{b};
      wparts.insert(wparts.end(), lifts.begin(), lifts.end());
      std::string w = tuple_label(wparts);
      for (const auto& o : outs) {
        std::string bb = pair_label(o, w);
        Bel.push_back(bb);
        tm[bb] = o;
        fm[bb] = b;
        for (std::size_t i = 0; i < fiber.size(); ++i) {
          std::string ee = tuple_label({bb, fiber[i]});
          Eel.push_back(ee);
          pm[ee] = bb;
          sm[ee] = lifts[i];
          gm[ee] = fiber[i];
        }
      }
      if (fiber.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  FinSet BB("uB", std::move(Bel)), EE("uE", std::move(Eel));
  PolyDiag lift = make_poly(u.dom(), EE, BB, FinMap(EE, u.dom(), std::move(sm)),
                            FinMap(EE, BB, std::move(pm)), FinMap(BB, u.dom(), std::move(tm)));
  PolyDiagMor prone = make_poly_mor(lift, d, u, FinMap(BB, d.B, std::move(fm)),
                                    FinMap(EE, d.E, std::move(gm)));
  return PolyProneResult{lift, prone};
}

PolySupineResult supine_poly(const FinMap& u, const PolyDiag& d) {
  if (u.dom() != d.base) throw structural_error("supine_poly: base mismatch");
  PolyDiag pushed = make_poly(u.cod(), d.E, d.B, compose(u, d.s), d.p, compose(u, d.t));
  PolyDiagMor supine = make_poly_mor(d, pushed, u, FinMap::identity(d.B), FinMap::identity(d.E));
  return PolySupineResult{pushed, supine};
}

// --------------------------------------------------------------- checkers

CheckReport check_weak_wide_pullback_preservation(const FunctorHandle& f, int legs, int bound,
                                                  bool strict, int max_pullback_size) {
  CheckReport report;
  if (legs < 2) throw structural_error("check_weak_wide_pullback_preservation: need >= 2 legs");
  auto objects = canonical_slices(f.dom_base, bound);
  for (const auto& z : objects) {
    std::vector<std::pair<SliceObj, FinMap>> chosen;
    std::function<void(int)> rec = [&](int leg) {
      if (!report.ok) return;
      if (leg == legs) {
        // the wide pullback P of the chosen cospan
        std::vector<std::vector<std::string>> tuples;
        std::vector<std::string> cur(legs);
        std::function<void(int)> build = [&](int i) {
          if (i == legs) {
            for (int k = 1; k < legs; ++k)
              if (chosen[k].second(cur[k]) != chosen[0].second(cur[0])) return;
            tuples.push_back(cur);
            return;
          }
          for (const auto& e : chosen[i].first.total.elems()) {
            cur[i] = e;
            build(i + 1);
          }
        };
        build(0);
        std::vector<std::string> pel;
        std::map<std::string, std::string> pd;
        std::vector<std::map<std::string, std::string>> projs(legs);
        for (const auto& tp : tuples) {
          std::string lbl = tuple_label(tp);
          pel.push_back(lbl);
          pd[lbl] = chosen[0].first.d(tp[0]);
          for (int k = 0; k < legs; ++k) projs[k][lbl] = tp[k];
        }
        if (max_pullback_size >= 0 && static_cast<int>(pel.size()) > max_pullback_size) return;
        FinSet P("P", std::move(pel));
        SliceObj pobj{P, FinMap(P, f.dom_base, std::move(pd))};
        SliceObj fp = f.on_obj(pobj);
        std::vector<SliceObj> fx;
        std::vector<FinMap> fproj, flegs;
        for (int k = 0; k < legs; ++k) {
          fx.push_back(f.on_obj(chosen[k].first));
          fproj.push_back(
              f.on_map(FinMap(P, chosen[k].first.total, projs[k]), pobj, chosen[k].first));
          flegs.push_back(f.on_map(chosen[k].second, chosen[k].first, z));
        }
        // every compatible tuple must have a (unique, if strict) filler
        std::vector<std::string> pick(legs);
        std::function<void(int)> scan = [&](int i) {
          if (!report.ok) return;
          if (i == legs) {
            for (int k = 1; k < legs; ++k)
              if (flegs[k](pick[k]) != flegs[0](pick[0])) return;
            int fillers = 0;
            for (const auto& w : fp.total.elems()) {
              bool hit = true;
              for (int k = 0; k < legs && hit; ++k)
                if (fproj[k](w) != pick[k]) hit = false;
              if (hit) ++fillers;
            }
            if (fillers == 0 || (strict && fillers != 1)) {
              report.ok = false;
              std::string msg = "no " + std::string(strict ? "unique " : "") + "filler for (";
              for (int k = 0; k < legs; ++k) msg += (k ? "," : "") + pick[k];
              report.counterexamples.push_back(msg + ")");
            }
            return;
          }
          for (const auto& v : fx[i].total.elems()) {
            pick[i] = v;
            scan(i + 1);
          }
        };
        scan(0);
        return;
      }
      for (const auto& xo : objects) {
        for (const auto& g : slice_maps(xo, z)) {
          chosen.push_back({xo, g});
          rec(leg + 1);
          chosen.pop_back();
          if (!report.ok) return;
        }
      }
    };
    rec(0);
    if (!report.ok) return report;
  }
  return report;
}

// --------------------------------------------------------------- tabulation

int TabulatedFunctor::index_of(const SliceObj& x) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].total == x.total && objects[i].d == x.d) return static_cast<int>(i);
  }
  throw structural_error("TabulatedFunctor: object not tabulated");
}

TabulatedFunctor tabulate(const FunctorHandle& f, int bound) {
  TabulatedFunctor tab;
  tab.base = f.dom_base;
  tab.bound = bound;
  tab.objects = canonical_slices(f.dom_base, bound);
  for (const auto& x : tab.objects) tab.values.push_back(f.on_obj(x));
  const int n = static_cast<int>(tab.objects.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto ms = slice_maps(tab.objects[i], tab.objects[j]);
      std::vector<FinMap> acts;
      for (const auto& g : ms) acts.push_back(f.on_map(g, tab.objects[i], tab.objects[j]));
      tab.maps[{i, j}] = std::move(ms);
      tab.action[{i, j}] = std::move(acts);
    }
  }
  // functoriality spot checks: identities and one layer of composites
  for (int i = 0; i < n; ++i) {
    const auto& ms = tab.maps.at({i, i});
    for (std::size_t k = 0; k < ms.size(); ++k) {
      if (ms[k] == FinMap::identity(tab.objects[i].total)) {
        if (!(tab.action.at({i, i})[k] == FinMap::identity(tab.values[i].total)))
          throw structural_error("tabulate: functor does not preserve identities");
      }
    }
  }
  return tab;
}

namespace {

FinMap tabulated_action(const TabulatedFunctor& tab, int i, int j, const FinMap& g) {
  const auto& ms = tab.maps.at({i, j});
  for (std::size_t k = 0; k < ms.size(); ++k)
    if (ms[k] == g) return tab.action.at({i, j})[k];
  throw structural_error("tabulated_action: map not tabulated");
}

// Type-preserving bijection from a slice to its canonical representative.
struct CanonIso {
  int index;
  FinMap to_canonical;
};

CanonIso canonical_iso(const TabulatedFunctor& tab, const SliceObj& x) {
  for (std::size_t i = 0; i < tab.objects.size(); ++i) {
    const SliceObj& c = tab.objects[i];
    if (c.total.size() != x.total.size()) continue;
    // greedy type-matched assignment; canonical objects have sorted types
    std::map<std::string, std::vector<std::string>> pool;
    for (const auto& e : c.total.elems()) pool[c.d(e)].push_back(e);
    std::map<std::string, std::string> t;
    bool ok = true;
    for (const auto& e : x.total.elems()) {
      auto& cand = pool[x.d(e)];
      if (cand.empty()) {
        ok = false;
        break;
      }
      t[e] = cand.back();
      cand.pop_back();
    }
    if (!ok) continue;
    return CanonIso{static_cast<int>(i), FinMap(x.total, c.total, std::move(t))};
  }
  throw structural_error("canonical_iso: no representative within the bound");
}

}  // namespace

FunctorHandle tabulated_handle(const TabulatedFunctor& tab) {
  FunctorHandle h;
  h.dom_base = tab.base;
  h.cod_base = tab.base;
  h.on_obj = [tab](const SliceObj& x) { return tab.values[canonical_iso(tab, x).index]; };
  h.on_map = [tab](const FinMap& g, const SliceObj& x, const SliceObj& y) {
    CanonIso cx = canonical_iso(tab, x);
    CanonIso cy = canonical_iso(tab, y);
    // transport g to a map between representatives
    std::map<std::string, std::string> t;
    for (const auto& e : x.total.elems()) t[cx.to_canonical(e)] = cy.to_canonical(g(e));
    FinMap canon_g(tab.objects[cx.index].total, tab.objects[cy.index].total, std::move(t));
    return tabulated_action(tab, cx.index, cy.index, canon_g);
  };
  return h;
}

RecoverResult recover_signature(const TabulatedFunctor& tab) {
  RecoverResult result;
  const FinSet& base = tab.base;
  if (static_cast<int>(base.size()) > tab.bound) {
    result.outcome = RecoverOutcome::Inconclusive;
    result.detail = "tabulation bound below |O|; terminal slice missing";
    return result;
  }
  // locate the canonical representative of 1_O (|X| = |O|, bijective typing)
  int one_idx = -1;
  for (std::size_t i = 0; i < tab.objects.size(); ++i) {
    if (tab.objects[i].total.size() == base.size() && tab.objects[i].d.is_bijective())
      one_idx = static_cast<int>(i);
  }
  if (one_idx < 0) {
    result.outcome = RecoverOutcome::Inconclusive;
    result.detail = "no terminal representative in the table";
    return result;
  }
  // component of an element: its image in F(1_O) under the unique map to 1_O
  auto bang = [&](int i) {
    std::map<std::string, std::string> t;
    for (const auto& e : tab.objects[i].total.elems()) {
      for (const auto& v : tab.objects[one_idx].total.elems())
        if (tab.objects[one_idx].d(v) == tab.objects[i].d(e)) {
          t[e] = v;
          break;
        }
    }
    return FinMap(tab.objects[i].total, tab.objects[one_idx].total, std::move(t));
  };
  std::map<std::pair<int, std::string>, std::string> component;
  for (std::size_t i = 0; i < tab.objects.size(); ++i) {
    FinMap cmap = tabulated_action(tab, static_cast<int>(i), one_idx, bang(static_cast<int>(i)));
    for (const auto& e : tab.values[i].total.elems())
      component[{static_cast<int>(i), e}] = cmap(e);
  }

  struct Component {
    std::string tag;            // element of F(1_O)
    std::string out;            // its type
    int minimal = -1;           // index of the minimal object
    std::string generic;        // generic element in F(minimal)
    std::vector<Perm> group;    // stabilizer inside the slice autos
  };
  std::vector<Component> comps;
  for (const auto& w : tab.values[one_idx].total.elems()) {
    Component c;
    c.tag = w;
    c.out = tab.values[one_idx].d(w);
    comps.push_back(c);
  }

  // For F(sigma) with sigma a permutation of a canonical object.
  auto apply_perm = [&](int i, const Perm& s, const std::string& v) {
    const SliceObj& M = tab.objects[i];
    std::map<std::string, std::string> t;
    for (int k = 1; k <= s.n(); ++k) t[M.total.at(k - 1)] = M.total.at(s(k) - 1);
    return tabulated_action(tab, i, i, FinMap(M.total, M.total, std::move(t)))(v);
  };

  for (auto& c : comps) {
    // minimal object: smallest canonical slice whose component elements
    // generate everything in this component
    for (std::size_t mi = 0; mi < tab.objects.size() && c.minimal < 0; ++mi) {
      bool generates = true;
      for (std::size_t xi = 0; xi < tab.objects.size() && generates; ++xi) {
        for (const auto& v : tab.values[xi].total.elems()) {
          if (component.at({static_cast<int>(xi), v}) != c.tag) continue;
          bool hit = false;
          const auto& ms = tab.maps.at({static_cast<int>(mi), static_cast<int>(xi)});
          for (std::size_t k = 0; k < ms.size() && !hit; ++k) {
            const FinMap& act = tab.action.at({static_cast<int>(mi), static_cast<int>(xi)})[k];
            for (const auto& y : tab.values[mi].total.elems()) {
              if (component.at({static_cast<int>(mi), y}) != c.tag) continue;
              if (act(y) == v) {
                hit = true;
                break;
              }
            }
          }
          if (!hit) {
            generates = false;
            break;
          }
        }
      }
      if (generates) c.minimal = static_cast<int>(mi);
    }
    if (c.minimal < 0) {
      result.outcome = RecoverOutcome::Inconclusive;
      result.detail = "no generating object within the bound for component " + c.tag;
      return result;
    }
    // generic element: not an image from any strictly smaller object
    for (const auto& y : tab.values[c.minimal].total.elems()) {
      if (component.at({c.minimal, y}) != c.tag) continue;
      bool hit_by_smaller = false;
      for (std::size_t xi = 0; xi < tab.objects.size() && !hit_by_smaller; ++xi) {
        if (tab.objects[xi].total.size() >= tab.objects[c.minimal].total.size()) continue;
        const auto& acts = tab.action.at({static_cast<int>(xi), c.minimal});
        for (const auto& act : acts) {
          for (const auto& z : tab.values[xi].total.elems())
            if (act(z) == y) hit_by_smaller = true;
        }
      }
      if (!hit_by_smaller) {
        c.generic = y;
        break;
      }
    }
    if (c.generic.empty()) {
      result.outcome = RecoverOutcome::Inconclusive;
      result.detail = "no generic element for component " + c.tag;
      return result;
    }
    // stabilizer: typing-preserving permutations fixing the generic element
    const SliceObj& M = tab.objects[c.minimal];
    int n = static_cast<int>(M.total.size());
    for (const auto& s : Perm::all(n)) {
      bool typed = true;
      for (int k = 1; k <= n; ++k)
        if (M.d(M.total.at(s(k) - 1)) != M.d(M.total.at(k - 1))) typed = false;
      if (!typed) continue;
      if (apply_perm(c.minimal, s, c.generic) == c.generic) c.group.push_back(s);
    }
  }

  // assemble the signature: right cosets of the stabilizer with the
  // right-composition action
  std::map<int, std::vector<std::string>> grade_elems;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  struct CosetElem {
    int comp;
    Perm tau;
  };
  std::map<std::pair<int, std::string>, CosetElem> decode;
  auto coset_label = [&](std::size_t ci, const Perm& tau) {
    const Component& c = comps[ci];
    std::string best;
    for (const auto& g : c.group) {
      Perm member = compose(g, tau);
      std::string lbl = tuple_label({std::to_string(ci), member.to_string()});
      if (best.empty() || lbl < best) best = lbl;
    }
    return best;
  };
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const Component& c = comps[ci];
    const SliceObj& M = tab.objects[c.minimal];
    int n = static_cast<int>(M.total.size());
    std::set<std::string> emitted;
    for (const auto& tau : Perm::all(n)) {
      std::string lbl = coset_label(ci, tau);
      if (!emitted.insert(lbl).second) continue;
      grade_elems[n].push_back(lbl);
      decode[{n, lbl}] = CosetElem{static_cast<int>(ci), tau};
      std::vector<std::string> prof{c.out};
      for (int k = 1; k <= n; ++k) prof.push_back(M.d(M.total.at(tau(k) - 1)));
      profiles[n][lbl] = std::move(prof);
    }
  }
  for (auto& [n, elems] : grade_elems) std::sort(elems.begin(), elems.end());
  std::map<int, FinSet> grades;
  for (const auto& [n, elems] : grade_elems) grades.emplace(n, FinSet("rec" + std::to_string(n), elems));
  for (const auto& [n, g] : grades) {
    for (const auto& lbl : g.elems()) {
      const CosetElem& ce = decode.at({n, lbl});
      for (const auto& s : Perm::all(n))
        action[n][lbl][s.to_string()] = coset_label(ce.comp, compose(ce.tau, s));
    }
  }
  SymSig sig(base, SymSet(std::move(grades), std::move(action)), std::move(profiles));

  // verify the canonical comparison is a natural bijection on the table
  for (std::size_t xi = 0; xi < tab.objects.size(); ++xi) {
    const SliceObj& X = tab.objects[xi];
    SliceObj ev = eval_analytic(sig, X);
    if (ev.total.size() != tab.values[xi].total.size()) {
      CheckReport wp = check_weak_wide_pullback_preservation(tabulated_handle(tab), 2,
                                                             std::min(tab.bound, 2), false,
                                                             tab.bound);
      result.outcome = wp.ok ? RecoverOutcome::Inconclusive : RecoverOutcome::NotAnalytic;
      result.detail = wp.ok ? "comparison not bijective; bound too small"
                            : "weak pullback preservation fails: " + wp.counterexamples.front();
      return result;
    }
  }
  result.outcome = RecoverOutcome::Recovered;
  result.signature = sig;
  return result;
}

SymSigMor transformation_to_morphism(const SymSig& a, const SymSig& b, const NatTransData& t) {
  // decoder: class representative -> raw members, per family object
  auto raw_members = [](const SymSig& sig, const SliceObj& x, const std::string& rep) {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& [n, g] : sig.carrier().grades()) {
      for (const auto& op : g.elems()) {
        const auto& p = sig.profile(n, op);
        std::vector<std::vector<std::string>> cands;
        for (int i = 1; i <= n; ++i) {
          std::vector<std::string> c;
          for (const auto& v : x.total.elems())
            if (x.d(v) == p[i]) c.push_back(v);
          cands.push_back(std::move(c));
        }
        bool empty = false;
        for (const auto& c : cands)
          if (c.empty()) empty = true;
        if (empty && n > 0) continue;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
          std::vector<std::string> xs;
          for (int i = 0; i < n; ++i) xs.push_back(cands[i][idx[i]]);
          if (analytic_class_rep(sig, n, op, xs) == rep) out.push_back({op, xs});
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
    return out;
  };

  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& [n, g] : a.carrier().grades()) {
    std::set<std::string> done;
    for (const auto& an : g.elems()) {
      if (done.count(an)) continue;
      // find a family object isomorphic to the positive typing of an
      const auto& p = a.profile(n, an);
      int fi = -1;
      std::vector<std::string> bij;  // x_i = image of position i
      for (std::size_t i = 0; i < t.family.size() && fi < 0; ++i) {
        const SliceObj& y = t.family[i];
        if (static_cast<int>(y.total.size()) != n) continue;
        // search for a typed bijection (n] -> y
        std::vector<std::string> pool(y.total.elems());
        std::sort(pool.begin(), pool.end());
        do {
          bool ok = true;
          for (int k = 1; k <= n && ok; ++k)
            if (y.d(pool[k - 1]) != p[k]) ok = false;
          if (ok) {
            fi = static_cast<int>(i);
            bij = pool;
            break;
          }
        } while (std::next_permutation(pool.begin(), pool.end()));
      }
      if (fi < 0)
        throw structural_error("transformation_to_morphism: family lacks the minimal object of '" +
                               an + "'");
      std::string xa = analytic_class_rep(a, n, an, bij);
      std::string img = t.components[fi].at(xa);
      // pick a member of the image class with a bijective tuple
      bool assigned = false;
      for (const auto& [bop, ys] : raw_members(b, t.family[fi], img)) {
        std::set<std::string> distinct(ys.begin(), ys.end());
        if (static_cast<int>(distinct.size()) != n) continue;
        // v = x^{-1} o y as a permutation of (n]
        std::vector<int> vimg(n);
        for (int k = 1; k <= n; ++k) {
          int pos = -1;
          for (int m = 1; m <= n; ++m)
            if (bij[m - 1] == ys[k - 1]) pos = m;
          if (pos < 0) { vimg.clear(); break; }
          vimg[k - 1] = pos;
        }
        if (vimg.empty()) continue;
        Perm v(vimg);
        std::string fa = b.carrier().act(n, bop, v.inverse());
        // extend equivariantly over the orbit
        bool consistent = true;
        std::map<std::string, std::string> ext;
        for (const auto& s : Perm::all(n)) {
          std::string src = a.carrier().act(n, an, s);
          std::string dst = b.carrier().act(n, fa, s);
          auto it = ext.find(src);
          if (it != ext.end() && it->second != dst) consistent = false;
          ext[src] = dst;
        }
        if (!consistent) continue;
        for (const auto& [k, vv] : ext) {
          table[n][k] = vv;
          done.insert(k);
        }
        assigned = true;
        break;
      }
      if (!assigned)
        throw structural_error(
            "transformation_to_morphism: no bijective member; transformation is not weakly "
            "cartesian on the generic element of '" + an + "'");
    }
  }
  SymSigMor mor(a, b, FinMap::identity(a.base()),
                EquivMap(a.carrier(), b.carrier(), std::move(table)));
  // confirm that rep(mor), as the fibre transformation [c,xs] -> [f(c),xs],
  // reproduces t on the whole family
  for (std::size_t i = 0; i < t.family.size(); ++i) {
    const SliceObj& y = t.family[i];
    for (const auto& [n, g] : a.carrier().grades()) {
      for (const auto& op : g.elems()) {
        const auto& p = a.profile(n, op);
        std::vector<std::vector<std::string>> cands;
        for (int k = 1; k <= n; ++k) {
          std::vector<std::string> c;
          for (const auto& v : y.total.elems())
            if (y.d(v) == p[k]) c.push_back(v);
          cands.push_back(std::move(c));
        }
        bool empty = false;
        for (const auto& c : cands)
          if (c.empty()) empty = true;
        if (empty && n > 0) continue;
        std::vector<std::size_t> idx(n, 0);
        while (true) {
          std::vector<std::string> xs;
          for (int k = 0; k < n; ++k) xs.push_back(cands[k][idx[k]]);
          std::string src = analytic_class_rep(a, n, op, xs);
          std::string want = analytic_class_rep(b, n, mor.f()(n, op), xs);
          if (t.components[i].at(src) != want)
            throw structural_error("transformation_to_morphism: reconstruction mismatch at " + src);
          if (n == 0) break;
          std::size_t k = 0;
          while (k < idx.size()) {
            if (++idx[k] < cands[k].size()) break;
            idx[k++] = 0;
          }
          if (k == idx.size()) break;
        }
      }
    }
  }
  return mor;
}

std::vector<NatTransData> enumerate_poly_nat_trans(const PolyDiag& d1, const PolyDiag& d2,
                                                   const std::vector<SliceObj>& family) {
  if (!(d1.base == d2.base)) throw structural_error("enumerate_poly_nat_trans: base mismatch");
  // A transformation is a choice, per operation b of d1, of an element of
  // eval(d2) at the universal object of b with matching output type.
  struct Universal {
    SliceObj obj;
    std::vector<std::string> choices;
  };
  std::vector<std::string> bs(d1.B.elems());
  std::vector<Universal> uni;
  for (const auto& b : bs) {
    auto fiber = poly_fiber(d1, b);
    std::vector<std::string> elems(fiber);
    FinSet total("U", elems);
    std::map<std::string, std::string> dt;
    for (const auto& e : fiber) dt[e] = d1.s(e);
    SliceObj u{total, FinMap(total, d1.base, std::move(dt))};
    SliceObj v = eval_poly(d2, u);
    Universal cell{u, {}};
    for (const auto& w : v.total.elems())
      if (v.d(w) == d1.t(b)) cell.choices.push_back(w);
    uni.push_back(std::move(cell));
  }
  std::vector<NatTransData> out;
  std::vector<std::size_t> idx(bs.size(), 0);
  bool any_empty = false;
  for (const auto& cell : uni)
    if (cell.choices.empty()) any_empty = true;
  if (any_empty && !bs.empty()) return out;
  FunctorHandle f1 = functor_of_poly(d1), f2 = functor_of_poly(d2);
  while (true) {
    std::vector<std::map<std::string, std::string>> comps;
    bool valid = true;
    for (const auto& y : family) {
      std::map<std::string, std::string> c;
      for (std::size_t bi = 0; bi < bs.size() && valid; ++bi) {
        const auto& b = bs[bi];
        auto fiber = poly_fiber(d1, b);
        std::vector<std::vector<std::string>> cands;
        for (const auto& e : fiber) {
          std::vector<std::string> cc;
          for (const auto& v : y.total.elems())
            if (y.d(v) == d1.s(e)) cc.push_back(v);
          cands.push_back(std::move(cc));
        }
        bool empty = false;
        for (const auto& cc : cands)
          if (cc.empty()) empty = true;
        if (empty && !fiber.empty()) continue;
        std::vector<std::size_t> ix(fiber.size(), 0);
        while (true) {
          std::vector<std::string> parts{b};
          std::map<std::string, std::string> yt;
          for (std::size_t i = 0; i < fiber.size(); ++i) {
            parts.push_back(cands[i][ix[i]]);
            yt[fiber[i]] = cands[i][ix[i]];
          }
          FinMap ymap(uni[bi].obj.total, y.total, yt);
          c[tuple_label(parts)] =
              f2.on_map(ymap, uni[bi].obj, y)(uni[bi].choices[idx[bi]]);
          if (fiber.empty()) break;
          std::size_t i = 0;
          while (i < ix.size()) {
            if (++ix[i] < cands[i].size()) break;
            ix[i++] = 0;
          }
          if (i == ix.size()) break;
        }
      }
      comps.push_back(std::move(c));
    }
    if (valid) {
      try {
        out.push_back(make_nat_trans(f1, f2, family, std::move(comps)));
      } catch (const structural_error&) {
        // non-natural choices are discarded (cannot arise for polynomial
        // targets, but keep the guard for safety)
      }
    }
    if (bs.empty()) break;
    std::size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < uni[i].choices.size()) break;
      idx[i++] = 0;
    }
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace polyan
