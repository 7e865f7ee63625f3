#include "polyan/compare.hpp"

#include <algorithm>
#include <set>

namespace polyan {

std::string k_sig_elem(const std::string& op, const Perm& tau) {
  return tuple_label({op, tau.to_string()});
}

SymSig k_sig(const AmalgSig& a) {
  std::map<int, std::vector<std::string>> grade_elems;
  std::map<int, std::map<std::string, std::pair<std::string, Perm>>> decode;
  for (const auto& op : a.ops()) {
    int n = op.arity();
    for (const auto& tau : Perm::all(n)) {
      std::string lbl = k_sig_elem(op.name, tau);
      grade_elems[n].push_back(lbl);
      decode[n].emplace(lbl, std::make_pair(op.name, tau));
    }
  }
  std::map<int, FinSet> grades;
  for (auto& [n, elems] : grade_elems) grades.emplace(n, FinSet("ks" + std::to_string(n), elems));
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  for (const auto& [n, g] : grades) {
    for (const auto& lbl : g.elems()) {
      const auto& [op, tau] = decode[n].at(lbl);
      const AmalgOp& o = a.op(op);
      std::vector<std::string> prof{o.out};
      for (int i = 1; i <= n; ++i) prof.push_back(o.ins[tau(i) - 1]);
      profiles[n][lbl] = std::move(prof);
      for (const auto& s : Perm::all(n))
        action[n][lbl][s.to_string()] = k_sig_elem(op, compose(tau, s));
    }
  }
  return SymSig(a.base(), SymSet(std::move(grades), std::move(action)), std::move(profiles));
}

SymSigMor k_sig(const AmalgSigMor& m) {
  SymSig dom = k_sig(m.dom());
  SymSig cod = k_sig(m.cod());
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& op : m.dom().ops()) {
    int n = op.arity();
    const Perm sinv = m.sigma(op.name).inverse();
    for (const auto& tau : Perm::all(n))
      table[n][k_sig_elem(op.name, tau)] = k_sig_elem(m.f(op.name), compose(sinv, tau));
  }
  return SymSigMor(dom, cod, m.u(), EquivMap(dom.carrier(), cod.carrier(), std::move(table)));
}

std::string iota_a_pos(const std::string& op, int i) {
  return tuple_label({op, std::to_string(i)});
}

PolyDiag iota_a(const AmalgSig& a) {
  std::vector<std::string> eel;
  std::map<std::string, std::string> sm, pm, tm;
  std::vector<std::string> bel;
  for (const auto& op : a.ops()) {
    bel.push_back(op.name);
    tm[op.name] = op.out;
    for (int i = 1; i <= op.arity(); ++i) {
      std::string e = iota_a_pos(op.name, i);
      eel.push_back(e);
      sm[e] = op.ins[i - 1];
      pm[e] = op.name;
    }
  }
  FinSet E("E", std::move(eel)), B("B", std::move(bel));
  return make_poly(a.base(), E, B, FinMap(E, a.base(), std::move(sm)), FinMap(E, B, std::move(pm)),
                   FinMap(B, a.base(), std::move(tm)));
}

PolyDiagMor iota_a(const AmalgSigMor& m) {
  PolyDiag dom = iota_a(m.dom());
  PolyDiag cod = iota_a(m.cod());
  std::map<std::string, std::string> fm, gm;
  for (const auto& op : m.dom().ops()) {
    fm[op.name] = m.f(op.name);
    const Perm sinv = m.sigma(op.name).inverse();
    for (int i = 1; i <= op.arity(); ++i)
      gm[iota_a_pos(op.name, i)] = iota_a_pos(m.f(op.name), sinv(i));
  }
  return make_poly_mor(dom, cod, m.u(), FinMap(dom.B, cod.B, std::move(fm)),
                       FinMap(dom.E, cod.E, std::move(gm)));
}

AmalgSig iota_a_inv(const PolyDiag& d) {
  std::vector<AmalgOp> ops;
  for (const auto& b : d.B.elems()) {
    auto fiber = poly_fiber(d, b);  // canonical order = chosen bijection tau_b
    std::vector<std::string> ins;
    for (const auto& e : fiber) ins.push_back(d.s(e));
    ops.push_back({b, d.t(b), std::move(ins)});
  }
  return AmalgSig(d.base, std::move(ops));
}

AnDiag iota_s(const SymSig& a) {
  std::map<int, std::map<std::string, std::vector<std::string>>> s;
  std::map<int, std::map<std::string, std::string>> t;
  for (const auto& [n, g] : a.carrier().grades()) {
    for (const auto& e : g.elems()) {
      const auto& p = a.profile(n, e);
      t[n][e] = p[0];
      s[n][e] = std::vector<std::string>(p.begin() + 1, p.end());
    }
  }
  return make_andiag(a.base(), a.carrier(), std::move(s), std::move(t));
}

AnDiagMor iota_s(const SymSigMor& m) {
  return make_andiag_mor(iota_s(m.dom()), iota_s(m.cod()), m.u(), m.f());
}

std::string k_diag_elem(const std::string& op, const std::vector<std::string>& h) {
  std::vector<std::string> parts{op};
  parts.insert(parts.end(), h.begin(), h.end());
  return tuple_label(parts);
}

AnDiag k_diag(const PolyDiag& d) {
  std::map<int, std::vector<std::string>> grade_elems;
  std::map<int, std::map<std::string, std::pair<std::string, std::vector<std::string>>>> decode;
  for (const auto& b : d.B.elems()) {
    auto fiber = poly_fiber(d, b);
    int n = static_cast<int>(fiber.size());
    std::vector<std::string> h(fiber);
    std::sort(h.begin(), h.end());
    do {
      std::string lbl = k_diag_elem(b, h);
      grade_elems[n].push_back(lbl);
      decode[n].emplace(lbl, std::make_pair(b, h));
    } while (std::next_permutation(h.begin(), h.end()));
  }
  for (auto& [n, v] : grade_elems) std::sort(v.begin(), v.end());
  std::map<int, FinSet> grades;
  for (const auto& [n, v] : grade_elems) grades.emplace(n, FinSet("kd" + std::to_string(n), v));
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::vector<std::string>>> s;
  std::map<int, std::map<std::string, std::string>> t;
  for (const auto& [n, g] : grades) {
    for (const auto& lbl : g.elems()) {
      const auto& [b, h] = decode[n].at(lbl);
      t[n][lbl] = d.t(b);
      std::vector<std::string> src;
      for (int i = 1; i <= n; ++i) src.push_back(d.s(h[i - 1]));
      s[n][lbl] = std::move(src);
      for (const auto& tau : Perm::all(n)) {
        std::vector<std::string> h2;
        for (int i = 1; i <= n; ++i) h2.push_back(h[tau(i) - 1]);
        action[n][lbl][tau.to_string()] = k_diag_elem(b, h2);
      }
    }
  }
  return make_andiag(d.base, SymSet(std::move(grades), std::move(action)), std::move(s),
                     std::move(t));
}

AnDiagMor k_diag(const PolyDiagMor& m) {
  AnDiag dom = k_diag(m.dom);
  AnDiag cod = k_diag(m.cod);
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& b : m.dom.B.elems()) {
    auto fiber = poly_fiber(m.dom, b);
    int n = static_cast<int>(fiber.size());
    std::vector<std::string> h(fiber);
    std::sort(h.begin(), h.end());
    do {
      std::vector<std::string> h2;
      for (const auto& e : h) h2.push_back(m.g(e));
      table[n][k_diag_elem(b, h)] = k_diag_elem(m.f(b), h2);
    } while (std::next_permutation(h.begin(), h.end()));
  }
  return make_andiag_mor(dom, cod, m.u, EquivMap(dom.carrier, cod.carrier, std::move(table)));
}

SliceObj eval_andiag(const AnDiag& d, const SliceObj& x) {
  if (!(d.base == x.d.cod())) throw structural_error("eval_andiag: base mismatch");
  int bound = 0;
  for (const auto& [n, g] : d.carrier.grades())
    if (g.size() > 0) bound = std::max(bound, n);
  // delta_{/O}
  SlicedSymSet dx = delta_over(d.base, x.d, bound);
  // carrier and positions of the diagram as symmetric sets over delta(O)
  SymSet carr = d.carrier;
  std::map<int, FinSet> egrades;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> eaction;
  std::map<int, std::map<std::string, std::string>> etyping;  // position -> carrier elem
  std::map<int, std::map<std::string, std::string>> estypes;  // position -> source type
  auto pos_label = [](const std::string& a, int i) {
    return tuple_label({a, std::to_string(i)});
  };
  for (const auto& [n, g] : carr.grades()) {
    std::vector<std::string> poss;
    for (const auto& a : g.elems())
      for (int i = 1; i <= n; ++i) poss.push_back(pos_label(a, i));
    egrades.emplace(n, FinSet("pos" + std::to_string(n), std::move(poss)));
  }
  for (const auto& [n, g] : egrades) {
    for (const auto& a : carr.grade(n).elems()) {
      for (int i = 1; i <= n; ++i) {
        std::string lbl = pos_label(a, i);
        etyping[n][lbl] = a;
        estypes[n][lbl] = d.s.at(n).at(a)[i - 1];
        for (const auto& tau : Perm::all(n)) {
          Perm tinv = tau.inverse();
          eaction[n][lbl][tau.to_string()] = pos_label(carr.act(n, a, tau), tinv(i));
        }
      }
    }
  }
  SymSet E(std::move(egrades), std::move(eaction));
  EquivMap p(E, carr, etyping);
  // s^* : pull the delta-sliced X back along the source typing of positions
  // (the source typing lands in delta(O); the pullback pairs positions with
  // matching X-elements at the same grade).
  std::map<int, FinSet> pbg;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> pba;
  std::map<int, std::map<std::string, std::string>> pbt;
  for (const auto& [n, g] : E.grades()) {
    std::vector<std::string> labels;
    for (const auto& e : g.elems())
      for (const auto& v : x.total.elems())
        if (x.d(v) == estypes.at(n).at(e)) labels.push_back(pair_label(e, v));
    pbg.emplace(n, FinSet("sx" + std::to_string(n), std::move(labels)));
  }
  for (const auto& [n, g] : pbg) {
    for (const auto& e : E.grade(n).elems()) {
      for (const auto& v : x.total.elems()) {
        if (x.d(v) != estypes.at(n).at(e)) continue;
        std::string lbl = pair_label(e, v);
        pbt[n][lbl] = e;
        for (const auto& tau : Perm::all(n))
          pba[n][lbl][tau.to_string()] = pair_label(E.act(n, e, tau), v);
      }
    }
  }
  SymSet SX(std::move(pbg), std::move(pba));
  SymSlice sx{SX, E, EquivMap(SX, E, pbt)};
  // p_* : sections over position fibers with the conjugation action
  SymSlice sections = pi_star(p, sx);
  // t_! then orb_{/O}
  std::map<int, std::map<std::string, std::string>> typing;
  for (const auto& [n, g] : sections.total.grades())
    for (const auto& sec : g.elems())
      typing[n][sec] = d.t.at(n).at(sections.typing(n, sec));
  SlicedSymSet over_o = make_sliced(sections.total, d.base, std::move(typing));
  SliceOfSets res = orb_over(over_o);
  return SliceObj{res.total, res.d};
}

PhiComponent phi_component(const AmalgSig& a) {
  PolyDiag pd = iota_a(a);
  AnDiag dom = k_diag(pd);
  AnDiag cod = iota_s(k_sig(a));
  std::map<int, std::map<std::string, std::string>> table;
  for (const auto& op : a.ops()) {
    int n = op.arity();
    std::vector<std::string> fiber = poly_fiber(pd, op.name);
    std::vector<std::string> h(fiber);
    std::sort(h.begin(), h.end());
    do {
      // Phi_0(a, h) = (a, pi_2 o h)
      std::vector<int> img;
      for (const auto& e : h) {
        for (int i = 1; i <= n; ++i)
          if (e == iota_a_pos(op.name, i)) img.push_back(i);
      }
      table[n][k_diag_elem(op.name, h)] = k_sig_elem(op.name, Perm(img));
    } while (std::next_permutation(h.begin(), h.end()));
  }
  return PhiComponent{dom, cod, std::move(table)};
}

PsiComponent psi_component(const PolyDiag& d, const SliceObj& x) {
  SliceObj dom = eval_poly(d, x);
  AnDiag kd = k_diag(d);
  SliceObj cod = eval_andiag(kd, x);
  // (a, xs) |-> class of all triples (a, h, xs o h); compute one section
  // label and find its orbit representative in the pipeline output.
  std::map<std::string, std::string> map;
  for (const auto& b : d.B.elems()) {
    auto fiber = poly_fiber(d, b);
    int n = static_cast<int>(fiber.size());
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
      std::map<std::string, std::string> assign;
      std::vector<std::string> parts{b};
      for (std::size_t i = 0; i < fiber.size(); ++i) {
        parts.push_back(cands[i][idx[i]]);
        assign[fiber[i]] = cands[i][idx[i]];
      }
      // choose h = identity enumeration of the fiber
      std::vector<std::string> h(fiber);
      std::string atilde = k_diag_elem(b, h);
      // the section over atilde assigns to position (atilde, i) the value
      // paired with position label; mirror the pi_star label format
      std::vector<std::string> sparts{atilde};
      for (int i = 1; i <= n; ++i) {
        std::string pos = tuple_label({atilde, std::to_string(i)});
        sparts.push_back(pair_label(pos, assign.at(h[i - 1])));
      }
      std::string section = tuple_label(sparts);
      (void)section;
      // the orbit of the section under the conjugation action consists of
      // the variants over all re-enumerations h o tau; exactly one of them
      // is the stored orbit representative
      std::string found;
      for (const auto& tau : Perm::all(n)) {
        std::vector<std::string> h2;
        for (int i = 1; i <= n; ++i) h2.push_back(h[tau(i) - 1]);
        std::string a2 = k_diag_elem(b, h2);
        std::vector<std::string> s2{a2};
        for (int i = 1; i <= n; ++i) {
          std::string pos = tuple_label({a2, std::to_string(i)});
          s2.push_back(pair_label(pos, assign.at(h2[i - 1])));
        }
        std::string cand = std::to_string(n) + ":" + tuple_label(s2);
        if (cod.total.contains(cand)) {
          found = cand;
          break;
        }
      }
      if (found.empty())
        throw structural_error("psi_component: representative not in pipeline output");
      map[tuple_label(parts)] = found;
      if (fiber.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return PsiComponent{dom, cod, std::move(map)};
}

EmbFullReport confirm_emb_full(const PolyDiag& d1, const PolyDiag& d2,
                               const std::vector<SliceObj>& family) {
  EmbFullReport report;
  auto all = enumerate_poly_nat_trans(d1, d2, family);
  report.transformations = static_cast<int>(all.size());
  for (const auto& t : all) {
    if (!is_weakly_cartesian(t)) continue;
    ++report.weakly_cartesian;
    if (!is_cartesian(t)) {
      report.ok = false;
      report.violations.push_back("weakly cartesian transformation that is not cartesian");
    }
  }
  return report;
}

}  // namespace polyan
