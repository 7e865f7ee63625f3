#include "polyan/symset.hpp"

#include <algorithm>
#include <set>

namespace polyan {

SymSet::SymSet(std::map<int, FinSet> grades,
               std::map<int, std::map<std::string, std::map<std::string, std::string>>> action)
    : grades_(std::move(grades)), action_(std::move(action)) {
  for (const auto& [n, g] : grades_) {
    if (n < 0) throw structural_error("SymSet: negative grade");
    auto perms = Perm::all(n);
    for (const auto& a : g.elems()) {
      for (const auto& s : perms) {
        const std::string& img = act(n, a, s);
        if (!g.contains(img)) throw structural_error("SymSet: action leaves grade " + std::to_string(n));
      }
      if (act(n, a, Perm::identity(n)) != a) throw structural_error("SymSet: a.id != a");
      for (const auto& s : perms)
        for (const auto& t : perms)
          if (act(n, act(n, a, s), t) != act(n, a, compose(s, t)))
            throw structural_error("SymSet: (a.s).t != a.(s o t) at grade " + std::to_string(n));
    }
  }
}

SymSet SymSet::from_action(
    std::map<int, FinSet> grades,
    const std::function<std::string(int, const std::string&, const Perm&)>& act) {
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> table;
  for (const auto& [n, g] : grades) {
    for (const auto& a : g.elems())
      for (const auto& s : Perm::all(n)) table[n][a][s.to_string()] = act(n, a, s);
  }
  return SymSet(std::move(grades), std::move(table));
}

SymSet SymSet::trivial(std::map<int, FinSet> grades) {
  return from_action(std::move(grades),
                     [](int, const std::string& a, const Perm&) { return a; });
}

const FinSet& SymSet::grade(int n) const {
  auto it = grades_.find(n);
  if (it == grades_.end()) throw structural_error("SymSet: no grade " + std::to_string(n));
  return it->second;
}

std::string SymSet::act(int n, const std::string& a, const Perm& sigma) const {
  auto gi = action_.find(n);
  if (gi == action_.end()) throw structural_error("SymSet: no action at grade " + std::to_string(n));
  auto ai = gi->second.find(a);
  if (ai == gi->second.end()) throw structural_error("SymSet: no action row for '" + a + "'");
  auto si = ai->second.find(sigma.to_string());
  if (si == ai->second.end()) throw structural_error("SymSet: no action entry for " + sigma.to_string());
  return si->second;
}

std::size_t SymSet::total_size() const {
  std::size_t n = 0;
  for (const auto& [g, s] : grades_) n += s.size();
  return n;
}

std::vector<int> SymSet::grade_list() const {
  std::vector<int> out;
  for (const auto& [n, g] : grades_) out.push_back(n);
  return out;
}

EquivMap::EquivMap(SymSet dom, SymSet cod, std::map<int, std::map<std::string, std::string>> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  for (const auto& [n, g] : dom_.grades()) {
    if (!cod_.has_grade(n) && g.size() > 0)
      throw structural_error("EquivMap: target lacks grade " + std::to_string(n));
    for (const auto& a : g.elems()) {
      const std::string& fa = (*this)(n, a);
      if (!cod_.grade(n).contains(fa))
        throw structural_error("EquivMap: image outside target grade");
      for (const auto& s : Perm::all(n))
        if ((*this)(n, dom_.act(n, a, s)) != cod_.act(n, fa, s))
          throw structural_error("EquivMap: not equivariant at grade " + std::to_string(n));
    }
  }
}

EquivMap EquivMap::identity(const SymSet& s) {
  std::map<int, std::map<std::string, std::string>> t;
  for (const auto& [n, g] : s.grades())
    for (const auto& a : g.elems()) t[n][a] = a;
  return EquivMap(s, s, std::move(t));
}

const std::string& EquivMap::operator()(int n, const std::string& a) const {
  auto gi = table_.find(n);
  if (gi == table_.end()) throw structural_error("EquivMap: no grade " + std::to_string(n));
  auto ai = gi->second.find(a);
  if (ai == gi->second.end()) throw structural_error("EquivMap: '" + a + "' not in domain");
  return ai->second;
}

EquivMap compose(const EquivMap& g, const EquivMap& f) {
  std::map<int, std::map<std::string, std::string>> t;
  for (const auto& [n, gr] : f.dom().grades())
    for (const auto& a : gr.elems()) t[n][a] = g(n, f(n, a));
  return EquivMap(f.dom(), g.cod(), std::move(t));
}

SlicedSymSet make_sliced(SymSet total, FinSet base,
                         std::map<int, std::map<std::string, std::string>> typing) {
  for (const auto& [n, g] : total.grades()) {
    for (const auto& a : g.elems()) {
      auto gi = typing.find(n);
      if (gi == typing.end() || !gi->second.count(a))
        throw structural_error("SlicedSymSet: missing typing for '" + a + "'");
      if (!base.contains(gi->second.at(a)))
        throw structural_error("SlicedSymSet: typing outside base");
      for (const auto& s : Perm::all(n))
        if (gi->second.at(total.act(n, a, s)) != gi->second.at(a))
          throw structural_error("SlicedSymSet: typing not orbit-constant");
    }
  }
  return SlicedSymSet{std::move(total), std::move(base), std::move(typing)};
}

SymSet delta(const FinSet& o, int grade_bound) {
  std::map<int, FinSet> grades;
  for (int n = 0; n <= grade_bound; ++n)
    grades.emplace(n, FinSet("delta" + std::to_string(n), o.elems()));
  return SymSet::trivial(std::move(grades));
}

SlicedSymSet delta_slice(const FinSet& o, int grade_bound) {
  SymSet d = delta(o, grade_bound);
  std::map<int, std::map<std::string, std::string>> typing;
  for (int n = 0; n <= grade_bound; ++n)
    for (const auto& e : o.elems()) typing[n][e] = e;
  return make_sliced(std::move(d), o, std::move(typing));
}

OrbitsResult orbits(const SymSet& a) {
  std::vector<std::string> labels;
  std::map<int, std::map<std::string, std::string>> projection;
  for (const auto& [n, g] : a.grades()) {
    std::map<std::string, std::string> rep;
    auto perms = Perm::all(n);
    for (const auto& e : g.elems()) {
      if (rep.count(e)) continue;
      std::vector<std::string> members;
      for (const auto& s : perms) members.push_back(a.act(n, e, s));
      std::string least = e;
      for (const auto& m : members)
        if (g.index_of(m) < g.index_of(least)) least = m;
      for (const auto& m : members) rep[m] = least;
    }
    std::set<std::string> emitted;
    for (const auto& e : g.elems()) {
      std::string lbl = std::to_string(n) + ":" + rep[e];
      if (emitted.insert(rep[e]).second) labels.push_back(lbl);
      projection[n][e] = lbl;
    }
  }
  return OrbitsResult{FinSet("orbits", std::move(labels)), std::move(projection)};
}

FinSet fixpoints(const SymSet& a) {
  std::vector<std::string> labels;
  for (const auto& [n, g] : a.grades()) {
    auto perms = Perm::all(n);
    for (const auto& e : g.elems()) {
      bool fixed = true;
      for (const auto& s : perms)
        if (a.act(n, e, s) != e) { fixed = false; break; }
      if (fixed) labels.push_back(std::to_string(n) + ":" + e);
    }
  }
  return FinSet("fix", std::move(labels));
}

namespace {

// Fiber of a map of symmetric sets over a grade-n element, in grade order.
std::vector<std::string> fiber_of(const EquivMap& p, int n, const std::string& a) {
  std::vector<std::string> out;
  if (!p.dom().has_grade(n)) return out;
  for (const auto& e : p.dom().grade(n).elems())
    if (p(n, e) == a) out.push_back(e);
  return out;
}

std::string section_label(const std::string& a, const std::vector<std::string>& fiber,
                          const std::map<std::string, std::string>& sec) {
  std::vector<std::string> parts{a};
  for (const auto& e : fiber) parts.push_back(sec.at(e));
  return tuple_label(parts);
}

}  // namespace

SymSlice pi_star(const EquivMap& p, const SymSlice& x) {
  // x is typed into E = p.dom(); the result is typed into A = p.cod().
  const SymSet& E = p.dom();
  const SymSet& A = p.cod();
  if (!(x.base == E)) throw structural_error("pi_star: slice not typed into dom(p)");

  std::map<int, FinSet> grades;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::string>> typing;
  // sections[n][label] = (a, value assignment on the fiber)
  std::map<int, std::map<std::string, std::pair<std::string, std::map<std::string, std::string>>>> sections;

  for (const auto& [n, gA] : A.grades()) {
    std::vector<std::string> labels;
    for (const auto& a : gA.elems()) {
      std::vector<std::string> fiber = fiber_of(p, n, a);
      // Candidate values per fiber element: x-elements typed over it.
      std::vector<std::vector<std::string>> cands;
      for (const auto& e : fiber) {
        std::vector<std::string> c;
        if (x.total.has_grade(n))
          for (const auto& v : x.total.grade(n).elems())
            if (x.typing(n, v) == e) c.push_back(v);
        cands.push_back(std::move(c));
      }
      std::vector<std::size_t> idx(fiber.size(), 0);
      bool any_empty = false;
      for (const auto& c : cands)
        if (c.empty()) any_empty = true;
      if (any_empty && !fiber.empty()) continue;  // no sections over a
      while (true) {
        std::map<std::string, std::string> sec;
        for (std::size_t i = 0; i < fiber.size(); ++i) sec[fiber[i]] = cands[i][idx[i]];
        std::string lbl = section_label(a, fiber, sec);
        labels.push_back(lbl);
        sections[n][lbl] = {a, sec};
        if (fiber.empty()) break;
        std::size_t i = 0;
        while (i < fiber.size()) {
          if (++idx[i] < cands[i].size()) break;
          idx[i++] = 0;
        }
        if (i == fiber.size()) break;
      }
    }
    grades.emplace(n, FinSet("pi*" + std::to_string(n), std::move(labels)));
  }

  for (const auto& [n, g] : grades) {
    for (const auto& lbl : g.elems()) {
      const auto& [a, sec] = sections[n][lbl];
      typing[n][lbl] = a;
      for (const auto& s : Perm::all(n)) {
        // <a,x>.s = <a.s, e |-> x(e.s^{-1}).s>
        std::string a2 = A.act(n, a, s);
        Perm sinv = s.inverse();
        std::vector<std::string> fiber2 = fiber_of(p, n, a2);
        std::map<std::string, std::string> sec2;
        for (const auto& e : fiber2)
          sec2[e] = x.total.act(n, sec.at(E.act(n, e, sinv)), s);
        action[n][lbl][s.to_string()] = section_label(a2, fiber2, sec2);
      }
    }
  }

  SymSet total(std::move(grades), std::move(action));
  std::map<int, std::map<std::string, std::string>> ttable;
  for (const auto& [n, m] : typing)
    for (const auto& [k, v] : m) ttable[n][k] = v;
  return SymSlice{total, A, EquivMap(total, A, std::move(ttable))};
}

SymSlice pullback_along(const EquivMap& q, const SymSlice& x) {
  const SymSet& E = q.dom();
  if (!(x.base == q.cod())) throw structural_error("pullback_along: slice not over cod(q)");
  std::map<int, FinSet> grades;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::string>> typing;
  std::map<int, std::map<std::string, std::pair<std::string, std::string>>> parts;
  for (const auto& [n, gE] : E.grades()) {
    std::vector<std::string> labels;
    for (const auto& e : gE.elems()) {
      if (!x.total.has_grade(n)) continue;
      for (const auto& v : x.total.grade(n).elems()) {
        if (x.typing(n, v) == q(n, e)) {
          std::string lbl = pair_label(e, v);
          labels.push_back(lbl);
          parts[n][lbl] = {e, v};
        }
      }
    }
    grades.emplace(n, FinSet("q*" + std::to_string(n), std::move(labels)));
  }
  for (const auto& [n, g] : grades) {
    for (const auto& lbl : g.elems()) {
      const auto& [e, v] = parts[n][lbl];
      typing[n][lbl] = e;
      for (const auto& s : Perm::all(n))
        action[n][lbl][s.to_string()] = pair_label(E.act(n, e, s), x.total.act(n, v, s));
    }
  }
  SymSet total(std::move(grades), std::move(action));
  return SymSlice{total, E, EquivMap(total, E, std::move(typing))};
}

SymSlice postcompose(const EquivMap& t, const SymSlice& x) {
  if (!(x.base == t.dom())) throw structural_error("postcompose: base mismatch");
  return SymSlice{x.total, t.cod(), compose(t, x.typing)};
}

SlicedSymSet delta_over(const FinSet& o, const FinMap& d, int grade_bound) {
  if (d.cod() != o) throw structural_error("delta_over: slice not over O");
  std::map<int, FinSet> grades;
  std::map<int, std::map<std::string, std::string>> typing;
  for (int n = 0; n <= grade_bound; ++n) {
    grades.emplace(n, FinSet("dX" + std::to_string(n), d.dom().elems()));
    for (const auto& e : d.dom().elems()) typing[n][e] = d(e);
  }
  return make_sliced(SymSet::trivial(std::move(grades)), o, std::move(typing));
}

SliceOfSets orb_over(const SlicedSymSet& y) {
  OrbitsResult o = orbits(y.total);
  std::map<std::string, std::string> d;
  for (const auto& [n, proj] : o.projection)
    for (const auto& [e, orb] : proj) d[orb] = y.typing.at(n).at(e);
  return SliceOfSets{o.orbits, FinMap(o.orbits, y.base, std::move(d))};
}

SliceOfSets fix_over(const SlicedSymSet& y) {
  FinSet fp = fixpoints(y.total);
  std::map<std::string, std::string> d;
  for (const auto& lbl : fp.elems()) {
    auto pos = lbl.find(':');
    int n = std::stoi(lbl.substr(0, pos));
    d[lbl] = y.typing.at(n).at(lbl.substr(pos + 1));
  }
  return SliceOfSets{fp, FinMap(fp, y.base, std::move(d))};
}

SlicedSymSet delta_u_lower(const FinMap& u, const SlicedSymSet& y) {
  if (u.dom() != y.base) throw structural_error("delta(u)_!: base mismatch");
  std::map<int, std::map<std::string, std::string>> typing;
  for (const auto& [n, m] : y.typing)
    for (const auto& [e, o] : m) typing[n][e] = u(o);
  return make_sliced(y.total, u.cod(), std::move(typing));
}

SlicedSymSet delta_u_upper(const FinMap& u, const SlicedSymSet& y) {
  if (u.cod() != y.base) throw structural_error("delta(u)^*: base mismatch");
  std::map<int, FinSet> grades;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::string>> typing;
  for (const auto& [n, g] : y.total.grades()) {
    std::vector<std::string> labels;
    std::map<std::string, std::pair<std::string, std::string>> parts;
    for (const auto& o : u.dom().elems())
      for (const auto& e : g.elems())
        if (u(o) == y.typing.at(n).at(e)) {
          std::string lbl = pair_label(o, e);
          labels.push_back(lbl);
          parts[lbl] = {o, e};
        }
    FinSet gr("u*" + std::to_string(n), std::move(labels));
    for (const auto& lbl : gr.elems()) {
      const auto& [o, e] = parts[lbl];
      typing[n][lbl] = o;
      for (const auto& s : Perm::all(n))
        action[n][lbl][s.to_string()] = pair_label(o, y.total.act(n, e, s));
    }
    grades.emplace(n, std::move(gr));
  }
  return make_sliced(SymSet(std::move(grades), std::move(action)), u.dom(), std::move(typing));
}

SliceOfSets u_lower(const FinMap& u, const SliceOfSets& x) {
  if (u.dom() != x.d.cod()) throw structural_error("u_!: base mismatch");
  return SliceOfSets{x.total, compose(u, x.d)};
}

SliceOfSets u_upper(const FinMap& u, const SliceOfSets& x) {
  if (u.cod() != x.d.cod()) throw structural_error("u^*: base mismatch");
  PullbackResult pb = pullback(u, x.d);
  return SliceOfSets{pb.object, pb.to_left};
}

std::vector<std::map<int, std::map<std::string, std::string>>> all_equiv_maps_over(
    const SymSlice& x, const SymSlice& y) {
  if (!(x.base == y.base)) throw structural_error("all_equiv_maps_over: base mismatch");
  // Choose an image for one representative per orbit, extend equivariantly,
  // keep the choices that are well defined and typing-compatible.
  struct OrbitInfo {
    int n;
    std::string rep;
  };
  std::vector<OrbitInfo> reps;
  for (const auto& [n, g] : x.total.grades()) {
    std::set<std::string> seen;
    for (const auto& e : g.elems()) {
      if (seen.count(e)) continue;
      for (const auto& s : Perm::all(n)) seen.insert(x.total.act(n, e, s));
      reps.push_back({n, e});
    }
  }
  std::vector<std::map<int, std::map<std::string, std::string>>> out;
  std::map<int, std::map<std::string, std::string>> current;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == reps.size()) {
      out.push_back(current);
      return;
    }
    const auto& [n, rep] = reps[i];
    if (!y.total.has_grade(n)) return;
    for (const auto& img : y.total.grade(n).elems()) {
      if (y.typing(n, img) != x.typing(n, rep)) continue;
      // extend over the orbit and check single-valuedness
      std::map<std::string, std::string> ext;
      bool ok = true;
      for (const auto& s : Perm::all(n)) {
        std::string src = x.total.act(n, rep, s);
        std::string dst = y.total.act(n, img, s);
        auto it = ext.find(src);
        if (it != ext.end() && it->second != dst) { ok = false; break; }
        ext[src] = dst;
        if (y.typing(n, dst) != x.typing(n, src)) { ok = false; break; }
      }
      if (!ok) continue;
      for (const auto& [k, v] : ext) current[n][k] = v;
      rec(i + 1);
      for (const auto& [k, v] : ext) current[n].erase(k);
    }
  };
  rec(0);
  return out;
}

}  // namespace polyan
