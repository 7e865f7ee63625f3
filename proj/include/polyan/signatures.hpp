#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyan/finset.hpp"
#include "polyan/symset.hpp"

namespace polyan {

struct AmalgOp {
  std::string name;
  std::string out;
  std::vector<std::string> ins;
  int arity() const { return static_cast<int>(ins.size()); }
};

// An object (A, d, O) of Sig_a: typed operations over a sort set.
class AmalgSig {
 public:
  AmalgSig() = default;
  AmalgSig(FinSet base, std::vector<AmalgOp> ops);

  const FinSet& base() const { return base_; }
  const std::vector<AmalgOp>& ops() const { return ops_; }
  const AmalgOp& op(const std::string& name) const;
  bool has_op(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t size() const { return ops_.size(); }

  // profile(a) = [out, in_1, ..., in_n]
  std::vector<std::string> profile(const std::string& name) const;

  friend bool operator==(const AmalgSig& a, const AmalgSig& b);

 private:
  FinSet base_;
  std::vector<AmalgOp> ops_;
  std::map<std::string, std::size_t> index_;
};

// The unit I_O: one operation per sort, typed o -> o, named by the sort.
AmalgSig unit_amalg(const FinSet& o);

// A morphism (f, sigma, u): per-op permutations satisfy
//   d_{f(a)} = u o d_a o sigma_a   (sigma_a fixes 0).
class AmalgSigMor {
 public:
  AmalgSigMor() = default;
  AmalgSigMor(AmalgSig dom, AmalgSig cod, FinMap u, std::map<std::string, std::string> f,
              std::map<std::string, Perm> sigma);

  static AmalgSigMor identity(const AmalgSig& a);
  // strict morphism: all permutations are identities
  static AmalgSigMor strict(AmalgSig dom, AmalgSig cod, FinMap u,
                            std::map<std::string, std::string> f);

  const AmalgSig& dom() const { return dom_; }
  const AmalgSig& cod() const { return cod_; }
  const FinMap& u() const { return u_; }
  const std::string& f(const std::string& a) const { return f_.at(a); }
  const Perm& sigma(const std::string& a) const { return sigma_.at(a); }
  bool is_strict() const;

  friend bool operator==(const AmalgSigMor& a, const AmalgSigMor& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.u_ == b.u_ && a.f_ == b.f_ &&
           a.sigma_ == b.sigma_;
  }

 private:
  AmalgSig dom_, cod_;
  FinMap u_;
  std::map<std::string, std::string> f_;
  std::map<std::string, Perm> sigma_;
};

// g after f; the composite permutation at a is sigma^f_a o sigma^g_{f(a)}.
AmalgSigMor compose_amalg(const AmalgSigMor& g, const AmalgSigMor& f);

struct AmalgReindexResult {
  AmalgSig sig;        // u^*(B) with ops "(b|d0,d1,...)"
  AmalgSigMor prone;   // strict projection to B over u
};

// Pulls B over Q back along u : O -> Q; ops are pairs (b, d) with d a
// profile lift of d_b along u.
AmalgReindexResult reindex_amalg(const FinMap& u, const AmalgSig& b);

struct AmalgSupineResult {
  AmalgSig sig;         // u_!(A): same op names, profiles pushed along u
  AmalgSigMor supine;   // identity-on-ops, strict
};

AmalgSupineResult supine_amalg(const FinMap& u, const AmalgSig& a);

// Strict-subcategory marker (Sig_m inside Sig_a).
struct MultisortedSig {
  AmalgSig sig;
};
MultisortedSig from_multisorted(const AmalgSig& m);

// All morphisms dom -> cod over u (optionally strict only); exhaustive,
// for hom-set and factorization tests.
std::vector<AmalgSigMor> all_homs_amalg(const AmalgSig& dom, const AmalgSig& cod, const FinMap& u,
                                        bool strict_only = false);

// An object (A, alpha, d, O) of Sig_s: symmetric-set carrier with
// equivariant typing d_{a.sigma} = d_a o sigma (sigma fixing 0).
class SymSig {
 public:
  SymSig() = default;
  SymSig(FinSet base, SymSet carrier, std::map<int, std::map<std::string, std::vector<std::string>>> profiles);

  const FinSet& base() const { return base_; }
  const SymSet& carrier() const { return carrier_; }
  // profile(n, a) = [out, in_1, ..., in_n]
  const std::vector<std::string>& profile(int n, const std::string& a) const;

  friend bool operator==(const SymSig& a, const SymSig& b) {
    return a.base_ == b.base_ && a.carrier_ == b.carrier_ && a.profiles_ == b.profiles_;
  }

 private:
  FinSet base_;
  SymSet carrier_;
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles_;
};

SymSig unit_sym(const FinSet& o);

class SymSigMor {
 public:
  SymSigMor() = default;
  SymSigMor(SymSig dom, SymSig cod, FinMap u, EquivMap f);

  static SymSigMor identity(const SymSig& a);

  const SymSig& dom() const { return dom_; }
  const SymSig& cod() const { return cod_; }
  const FinMap& u() const { return u_; }
  const EquivMap& f() const { return f_; }

 private:
  SymSig dom_, cod_;
  FinMap u_;
  EquivMap f_;
};

SymSigMor compose_sym(const SymSigMor& g, const SymSigMor& f);

struct SymReindexResult {
  SymSig sig;       // u^*(B) with elements "(b,d0 d1 ...)", diagonal action
  SymSigMor prone;  // projection over u
};

SymReindexResult reindex_sym(const FinMap& u, const SymSig& b);

struct SymSupineResult {
  SymSig sig;
  SymSigMor supine;  // (1_A, u)
};

SymSupineResult supine_sym(const FinMap& u, const SymSig& a);

// phi_0 : I_O -> u^*(I_Q) and phi_2 : u^*(A) (x) u^*(B) -> u^*(A (x) B)
// transition data for Sig_a (as element maps; both strict).
std::map<std::string, std::string> phi0_amalg(const FinMap& u);

// All symmetric-signature morphisms dom -> cod over u.
std::vector<SymSigMor> all_homs_sym(const SymSig& dom, const SymSig& cod, const FinMap& u);

}  // namespace polyan
