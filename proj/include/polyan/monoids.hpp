#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyan/diagrams.hpp"
#include "polyan/evaluation.hpp"
#include "polyan/finset.hpp"
#include "polyan/signatures.hpp"

namespace polyan {

struct Report {
  bool ok = true;
  std::vector<std::string> failures;
  void fail(const std::string& msg) {
    ok = false;
    failures.push_back(msg);
  }
};

// Monoid data is kept as raw tables so that broken candidates (mutation
// tests) can still be *checked*; check_monoid never throws on bad data.

// Multiplication table keyed by the ops of M (x) M (labels as produced by
// tensor_total_amalg), with its amalgamation permutations.
struct AmalgMonoid {
  AmalgSig M;
  std::map<std::string, std::string> mult_f;
  std::map<std::string, Perm> mult_sigma;
  std::map<std::string, std::string> unit_f;  // keyed by sorts
};

struct SymMonoid {
  SymSig M;
  std::map<int, std::map<std::string, std::string>> mult;  // tensor class -> carrier
  std::map<std::string, std::string> unit;                 // sort -> carrier (grade 1)
};

struct TGraphMonoid {
  TGraph M;
  std::map<std::string, std::string> mult;  // tensor element -> carrier
  std::map<std::string, std::string> unit;  // base -> carrier
};

struct PolyMonoid {
  PolyDiag M;
  std::map<std::string, std::string> mult_f;  // B of M (x) M -> B of M
  std::map<std::string, std::string> mult_g;  // E of M (x) M -> E of M
  std::map<std::string, std::string> unit_f;  // B of I -> B of M
  std::map<std::string, std::string> unit_g;  // E of I -> E of M
};

Report check_monoid(const AmalgMonoid& m);
Report check_monoid(const SymMonoid& m);
Report check_monoid(const TGraphMonoid& m);
Report check_monoid(const PolyMonoid& m);

// A small category presented as an identity-monad T-graph monoid.
TGraphMonoid category_as_monoid(const FinSet& objects, const FinSet& arrows, const FinMap& src,
                                const FinMap& dst,
                                const std::map<std::pair<std::string, std::string>, std::string>& comp,
                                const std::map<std::string, std::string>& ids);

// ---------------------------------------------------------------- algebras

struct AmalgAlgebra {
  AmalgMonoid monoid;
  SliceObj x;
  std::map<std::string, std::string> nu;  // eval_amalg(M, x) elements -> x
};

struct TGraphAlgebra {
  TGraphMonoid monoid;
  SliceObj x;
  std::map<std::string, std::string> nu;
};

struct SymAlgebra {
  SymMonoid monoid;
  SliceObj x;
  std::map<std::string, std::string> nu;  // analytic classes -> x
};

Report check_algebra(const AmalgAlgebra& al);
Report check_algebra(const TGraphAlgebra& al);
Report check_algebra(const SymAlgebra& al);

// --------------------------------------------------------------- free chain

enum class FreeKind { Strict, Amalg, Sym, TGraphList, TGraphId };

// Planar operation trees: leaves are typed unit slots, nodes are
// generators with one subtree per input slot.
struct OpTree {
  bool leaf = true;
  std::string head;  // sort (leaf) or generator name (node)
  std::vector<OpTree> kids;
  friend bool operator==(const OpTree& a, const OpTree& b) {
    return a.leaf == b.leaf && a.head == b.head && a.kids == b.kids;
  }
};

std::string tree_label(const OpTree& t);
int tree_arity(const OpTree& t);  // number of leaves

// Free-multicategory trees over an amalgamated signature.
std::string tree_output(const AmalgSig& gens, const OpTree& t);
std::vector<std::string> tree_inputs(const AmalgSig& gens, const OpTree& t);
// Grafts the i-th subtree onto the i-th leaf (left-to-right).
OpTree graft(const OpTree& t, const std::vector<OpTree>& subs);

struct FreeChainTruncation {
  FreeKind kind = FreeKind::Strict;
  int depth = 0;
  int arity_bound = 0;
  std::vector<std::vector<OpTree>> stages;      // tree kinds only
  std::vector<std::map<int, int>> stage_counts;  // per stage: arity -> count
  std::map<int, int> stabilized_at;              // arity -> first stable stage
  std::vector<int> growing;                      // arities still growing at depth
  bool stabilized(int arity) const { return stabilized_at.count(arity) != 0; }
};

// Stages of the free monoid chain A^0 = I, A^{i+1} = I + A (x) A^i.
// For Sym the stages are computed through tensor_sym (counts only).
FreeChainTruncation free_multicategory(const AmalgSig& gens, FreeKind kind, int depth,
                                       int arity_bound);
FreeChainTruncation free_multicategory(const TGraph& gens, int depth, int arity_bound);
FreeChainTruncation free_multicategory_sym(const SymSig& gens, int depth, int arity_bound);

// Truncation-level monoid laws: unit laws and associativity for every
// grafting that stays inside the listed trees.
Report check_free_monoid(const AmalgSig& gens, const FreeChainTruncation& chain);

// Evaluates a tree in a monoid along a generator assignment; the unique
// candidate for the adjunction's extension.
std::string eval_tree_in_monoid(const AmalgSig& gens, const AmalgMonoid& m,
                                const std::map<std::string, std::string>& gen_images,
                                const std::map<std::string, Perm>& gen_sigmas, const OpTree& t);

// ---------------------------------------------------------------- transport

PolyMonoid monoid_along_iota_a(const AmalgMonoid& m);
SymMonoid monoid_along_k_sig(const AmalgMonoid& m);

}  // namespace polyan
