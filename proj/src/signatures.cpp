#include "polyan/signatures.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace polyan {

AmalgSig::AmalgSig(FinSet base, std::vector<AmalgOp> ops)
    : base_(std::move(base)), ops_(std::move(ops)) {
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const AmalgOp& op = ops_[i];
    if (!index_.emplace(op.name, i).second)
      throw structural_error("AmalgSig: duplicate op name '" + op.name + "'");
    if (!base_.contains(op.out))
      throw structural_error("AmalgSig: output sort of '" + op.name + "' not in base");
    for (const auto& s : op.ins)
      if (!base_.contains(s))
        throw structural_error("AmalgSig: input sort of '" + op.name + "' not in base");
  }
}

const AmalgOp& AmalgSig::op(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw structural_error("AmalgSig: no op '" + name + "'");
  return ops_[it->second];
}

std::vector<std::string> AmalgSig::profile(const std::string& name) const {
  const AmalgOp& o = op(name);
  std::vector<std::string> p{o.out};
  p.insert(p.end(), o.ins.begin(), o.ins.end());
  return p;
}

bool operator==(const AmalgSig& a, const AmalgSig& b) {
  if (!(a.base_ == b.base_) || a.ops_.size() != b.ops_.size()) return false;
  for (std::size_t i = 0; i < a.ops_.size(); ++i) {
    if (a.ops_[i].name != b.ops_[i].name || a.ops_[i].out != b.ops_[i].out ||
        a.ops_[i].ins != b.ops_[i].ins)
      return false;
  }
  return true;
}

AmalgSig unit_amalg(const FinSet& o) {
  std::vector<AmalgOp> ops;
  for (const auto& x : o.elems()) ops.push_back({x, x, {x}});
  return AmalgSig(o, std::move(ops));
}

AmalgSigMor::AmalgSigMor(AmalgSig dom, AmalgSig cod, FinMap u, std::map<std::string, std::string> f,
                         std::map<std::string, Perm> sigma)
    : dom_(std::move(dom)), cod_(std::move(cod)), u_(std::move(u)), f_(std::move(f)),
      sigma_(std::move(sigma)) {
  if (u_.dom() != dom_.base() || u_.cod() != cod_.base())
    throw structural_error("AmalgSigMor: base map does not match bases");
  for (const auto& op : dom_.ops()) {
    auto fit = f_.find(op.name);
    if (fit == f_.end()) throw structural_error("AmalgSigMor: no image for op '" + op.name + "'");
    const AmalgOp& target = cod_.op(fit->second);
    if (target.arity() != op.arity())
      throw structural_error("AmalgSigMor: arity mismatch at '" + op.name + "'");
    auto sit = sigma_.find(op.name);
    if (sit == sigma_.end()) throw structural_error("AmalgSigMor: no permutation at '" + op.name + "'");
    const Perm& s = sit->second;
    if (s.n() != op.arity()) throw structural_error("AmalgSigMor: permutation arity mismatch");
    // d_{f(a)} = u o d_a o sigma_a, with sigma_a fixing 0
    if (target.out != u_(op.out))
      throw structural_error("AmalgSigMor: output square fails at '" + op.name + "'");
    for (int i = 1; i <= op.arity(); ++i)
      if (target.ins[i - 1] != u_(op.ins[s(i) - 1]))
        throw structural_error("AmalgSigMor: input square fails at '" + op.name + "'");
  }
}

AmalgSigMor AmalgSigMor::identity(const AmalgSig& a) {
  std::map<std::string, std::string> f;
  std::map<std::string, Perm> sigma;
  for (const auto& op : a.ops()) {
    f[op.name] = op.name;
    sigma[op.name] = Perm::identity(op.arity());
  }
  return AmalgSigMor(a, a, FinMap::identity(a.base()), std::move(f), std::move(sigma));
}

AmalgSigMor AmalgSigMor::strict(AmalgSig dom, AmalgSig cod, FinMap u,
                                std::map<std::string, std::string> f) {
  std::map<std::string, Perm> sigma;
  for (const auto& op : dom.ops()) sigma[op.name] = Perm::identity(op.arity());
  return AmalgSigMor(std::move(dom), std::move(cod), std::move(u), std::move(f), std::move(sigma));
}

bool AmalgSigMor::is_strict() const {
  for (const auto& [a, s] : sigma_)
    if (s != Perm::identity(s.n())) return false;
  return true;
}

AmalgSigMor compose_amalg(const AmalgSigMor& g, const AmalgSigMor& f) {
  if (!(f.cod() == g.dom())) throw structural_error("compose_amalg: cod(f) != dom(g)");
  std::map<std::string, std::string> h;
  std::map<std::string, Perm> sigma;
  for (const auto& op : f.dom().ops()) {
    h[op.name] = g.f(f.f(op.name));
    sigma[op.name] = compose(f.sigma(op.name), g.sigma(f.f(op.name)));
  }
  return AmalgSigMor(f.dom(), g.cod(), compose(g.u(), f.u()), std::move(h), std::move(sigma));
}

AmalgReindexResult reindex_amalg(const FinMap& u, const AmalgSig& b) {
  if (u.cod() != b.base()) throw structural_error("reindex_amalg: base mismatch");
  std::vector<AmalgOp> ops;
  std::map<std::string, std::string> proj;
  for (const auto& op : b.ops()) {
    // lifts d : [n] -> O of the profile along u, enumerated lexicographically
    std::vector<std::vector<std::string>> cands;
    cands.push_back(u.preimage(op.out));
    for (const auto& s : op.ins) cands.push_back(u.preimage(s));
    bool empty = false;
    for (const auto& c : cands)
      if (c.empty()) empty = true;
    if (empty) continue;
    std::vector<std::size_t> idx(cands.size(), 0);
    while (true) {
      std::vector<std::string> lift;
      for (std::size_t i = 0; i < cands.size(); ++i) lift.push_back(cands[i][idx[i]]);
      std::vector<std::string> parts{op.name};
      parts.insert(parts.end(), lift.begin(), lift.end());
      std::string name = tuple_label(parts);
      ops.push_back({name, lift[0], {lift.begin() + 1, lift.end()}});
      proj[name] = op.name;
      std::size_t i = cands.size();
      while (i > 0) {
        if (++idx[i - 1] < cands[i - 1].size()) break;
        idx[--i] = 0;
      }
      if (i == 0) break;
    }
  }
  AmalgSig sig(u.dom(), std::move(ops));
  AmalgSigMor prone = AmalgSigMor::strict(sig, b, u, std::move(proj));
  return AmalgReindexResult{sig, prone};
}

AmalgSupineResult supine_amalg(const FinMap& u, const AmalgSig& a) {
  if (u.dom() != a.base()) throw structural_error("supine_amalg: base mismatch");
  std::vector<AmalgOp> ops;
  std::map<std::string, std::string> f;
  for (const auto& op : a.ops()) {
    std::vector<std::string> ins;
    for (const auto& s : op.ins) ins.push_back(u(s));
    ops.push_back({op.name, u(op.out), std::move(ins)});
    f[op.name] = op.name;
  }
  AmalgSig sig(u.cod(), std::move(ops));
  AmalgSigMor mor = AmalgSigMor::strict(a, sig, u, std::move(f));
  return AmalgSupineResult{sig, mor};
}

MultisortedSig from_multisorted(const AmalgSig& m) { return MultisortedSig{m}; }

std::vector<AmalgSigMor> all_homs_amalg(const AmalgSig& dom, const AmalgSig& cod, const FinMap& u,
                                        bool strict_only) {
  std::vector<AmalgSigMor> out;
  std::vector<const AmalgOp*> dops;
  for (const auto& op : dom.ops()) dops.push_back(&op);
  std::map<std::string, std::string> f;
  std::map<std::string, Perm> sigma;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == dops.size()) {
      out.emplace_back(dom, cod, u, f, sigma);
      return;
    }
    const AmalgOp& a = *dops[i];
    for (const auto& b : cod.ops()) {
      if (b.arity() != a.arity()) continue;
      if (b.out != u(a.out)) continue;
      for (const auto& s : Perm::all(a.arity())) {
        if (strict_only && s != Perm::identity(a.arity())) continue;
        bool ok = true;
        for (int k = 1; k <= a.arity() && ok; ++k)
          if (b.ins[k - 1] != u(a.ins[s(k) - 1])) ok = false;
        if (!ok) continue;
        f[a.name] = b.name;
        sigma[a.name] = s;
        rec(i + 1);
      }
    }
  };
  rec(0);
  return out;
}

SymSig::SymSig(FinSet base, SymSet carrier,
               std::map<int, std::map<std::string, std::vector<std::string>>> profiles)
    : base_(std::move(base)), carrier_(std::move(carrier)), profiles_(std::move(profiles)) {
  for (const auto& [n, g] : carrier_.grades()) {
    for (const auto& a : g.elems()) {
      const auto& p = profile(n, a);
      if (static_cast<int>(p.size()) != n + 1)
        throw structural_error("SymSig: profile length mismatch for '" + a + "'");
      for (const auto& s : p)
        if (!base_.contains(s)) throw structural_error("SymSig: profile sort not in base");
      // equivariance: d_{a.sigma} = d_a o sigma (fixing 0)
      for (const auto& s : Perm::all(n)) {
        const auto& q = profile(n, carrier_.act(n, a, s));
        if (q[0] != p[0]) throw structural_error("SymSig: output not action-invariant");
        for (int i = 1; i <= n; ++i)
          if (q[i] != p[s(i)]) throw structural_error("SymSig: typing not equivariant");
      }
    }
  }
}

const std::vector<std::string>& SymSig::profile(int n, const std::string& a) const {
  auto gi = profiles_.find(n);
  if (gi == profiles_.end()) throw structural_error("SymSig: no profiles at grade " + std::to_string(n));
  auto ai = gi->second.find(a);
  if (ai == gi->second.end()) throw structural_error("SymSig: no profile for '" + a + "'");
  return ai->second;
}

SymSig unit_sym(const FinSet& o) {
  std::map<int, FinSet> grades;
  grades.emplace(1, FinSet("I1", o.elems()));
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  for (const auto& x : o.elems()) profiles[1][x] = {x, x};
  return SymSig(o, SymSet::trivial(std::move(grades)), std::move(profiles));
}

SymSigMor::SymSigMor(SymSig dom, SymSig cod, FinMap u, EquivMap f)
    : dom_(std::move(dom)), cod_(std::move(cod)), u_(std::move(u)), f_(std::move(f)) {
  if (u_.dom() != dom_.base() || u_.cod() != cod_.base())
    throw structural_error("SymSigMor: base map mismatch");
  for (const auto& [n, g] : dom_.carrier().grades()) {
    for (const auto& a : g.elems()) {
      const auto& p = dom_.profile(n, a);
      const auto& q = cod_.profile(n, f_(n, a));
      for (int i = 0; i <= n; ++i)
        if (q[i] != u_(p[i]))
          throw structural_error("SymSigMor: typing square fails at '" + a + "'");
    }
  }
}

SymSigMor SymSigMor::identity(const SymSig& a) {
  return SymSigMor(a, a, FinMap::identity(a.base()), EquivMap::identity(a.carrier()));
}

SymSigMor compose_sym(const SymSigMor& g, const SymSigMor& f) {
  return SymSigMor(f.dom(), g.cod(), compose(g.u(), f.u()), compose(g.f(), f.f()));
}

SymReindexResult reindex_sym(const FinMap& u, const SymSig& b) {
  if (u.cod() != b.base()) throw structural_error("reindex_sym: base mismatch");
  std::map<int, FinSet> grades;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  std::map<int, std::map<std::string, std::string>> proj;
  std::map<int, std::map<std::string, std::pair<std::string, std::vector<std::string>>>> parts;

  auto lift_label = [](const std::string& b0, const std::vector<std::string>& d) {
    std::vector<std::string> ps{b0};
    ps.insert(ps.end(), d.begin(), d.end());
    return tuple_label(ps);
  };

  for (const auto& [n, g] : b.carrier().grades()) {
    std::vector<std::string> labels;
    for (const auto& a : g.elems()) {
      const auto& p = b.profile(n, a);
      std::vector<std::vector<std::string>> cands;
      for (const auto& s : p) cands.push_back(u.preimage(s));
      bool empty = false;
      for (const auto& c : cands)
        if (c.empty()) empty = true;
      if (empty) continue;
      std::vector<std::size_t> idx(cands.size(), 0);
      while (true) {
        std::vector<std::string> lift;
        for (std::size_t i = 0; i < cands.size(); ++i) lift.push_back(cands[i][idx[i]]);
        std::string lbl = lift_label(a, lift);
        labels.push_back(lbl);
        parts[n][lbl] = {a, lift};
        std::size_t i = cands.size();
        while (i > 0) {
          if (++idx[i - 1] < cands[i - 1].size()) break;
          idx[--i] = 0;
        }
        if (i == 0) break;
      }
    }
    grades.emplace(n, FinSet("u*" + std::to_string(n), std::move(labels)));
  }
  for (const auto& [n, g] : grades) {
    for (const auto& lbl : g.elems()) {
      const auto& [a, lift] = parts[n][lbl];
      profiles[n][lbl] = lift;
      proj[n][lbl] = a;
      for (const auto& s : Perm::all(n)) {
        // <b,d>.sigma = <b.sigma, d o sigma>
        std::vector<std::string> d2(lift.size());
        d2[0] = lift[0];
        for (int i = 1; i <= n; ++i) d2[i] = lift[s(i)];
        action[n][lbl][s.to_string()] = lift_label(b.carrier().act(n, a, s), d2);
      }
    }
  }
  SymSet carr(std::move(grades), std::move(action));
  SymSig sig(u.dom(), carr, std::move(profiles));
  EquivMap f(carr, b.carrier(), std::move(proj));
  return SymReindexResult{sig, SymSigMor(sig, b, u, f)};
}

SymSupineResult supine_sym(const FinMap& u, const SymSig& a) {
  if (u.dom() != a.base()) throw structural_error("supine_sym: base mismatch");
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  std::map<int, std::map<std::string, std::string>> id;
  for (const auto& [n, g] : a.carrier().grades()) {
    for (const auto& e : g.elems()) {
      std::vector<std::string> p;
      for (const auto& s : a.profile(n, e)) p.push_back(u(s));
      profiles[n][e] = std::move(p);
      id[n][e] = e;
    }
  }
  SymSig sig(u.cod(), a.carrier(), std::move(profiles));
  EquivMap f(a.carrier(), sig.carrier(), std::move(id));
  return SymSupineResult{sig, SymSigMor(a, sig, u, f)};
}

std::map<std::string, std::string> phi0_amalg(const FinMap& u) {
  // I_O -> u^*(I_Q), x |-> (u(x) | x, x)
  std::map<std::string, std::string> out;
  for (const auto& x : u.dom().elems()) out[x] = tuple_label({u(x), x, x});
  return out;
}

std::vector<SymSigMor> all_homs_sym(const SymSig& dom, const SymSig& cod, const FinMap& u) {
  std::vector<SymSigMor> out;
  // Reuse the equivariant-map enumeration over matched typings.
  for (const auto& table : [&] {
        // Build SymSlice views with typing into delta(base) replaced by raw
        // profile comparison: enumerate equivariant maps on carriers, filter
        // by the typing square.
        std::vector<std::map<int, std::map<std::string, std::string>>> cands;
        struct Rep { int n; std::string e; };
        std::vector<Rep> reps;
        for (const auto& [n, g] : dom.carrier().grades()) {
          std::set<std::string> seen;
          for (const auto& e : g.elems()) {
            if (seen.count(e)) continue;
            for (const auto& s : Perm::all(n)) seen.insert(dom.carrier().act(n, e, s));
            reps.push_back({n, e});
          }
        }
        std::map<int, std::map<std::string, std::string>> current;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == reps.size()) {
            cands.push_back(current);
            return;
          }
          const auto& [n, rep] = reps[i];
          if (!cod.carrier().has_grade(n)) return;
          for (const auto& img : cod.carrier().grade(n).elems()) {
            bool ok = true;
            const auto& p = dom.profile(n, rep);
            const auto& q = cod.profile(n, img);
            for (int k = 0; k <= n && ok; ++k)
              if (q[k] != u(p[k])) ok = false;
            if (!ok) continue;
            std::map<std::string, std::string> ext;
            for (const auto& s : Perm::all(n)) {
              std::string src = dom.carrier().act(n, rep, s);
              std::string dst = cod.carrier().act(n, img, s);
              auto it = ext.find(src);
              if (it != ext.end() && it->second != dst) { ok = false; break; }
              ext[src] = dst;
            }
            if (!ok) continue;
            for (const auto& [k, v] : ext) current[n][k] = v;
            rec(i + 1);
            for (const auto& [k, v] : ext) current[n].erase(k);
          }
        };
        rec(0);
        return cands;
      }()) {
    out.emplace_back(dom, cod, u, EquivMap(dom.carrier(), cod.carrier(), table));
  }
  return out;
}

}  // namespace polyan
