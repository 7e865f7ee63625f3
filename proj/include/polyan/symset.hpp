#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polyan/finset.hpp"

namespace polyan {

// A finitely supported graded set {A_n} with right S_n actions, stored as
// full action tables per grade.  Construction checks the action laws
// exhaustively:  a.id = a  and  (a.sigma).tau = a.(sigma o tau), where
// sigma o tau means "apply tau, then sigma" as functions on positions.
class SymSet {
 public:
  SymSet() = default;
  SymSet(std::map<int, FinSet> grades,
         std::map<int, std::map<std::string, std::map<std::string, std::string>>> action);

  // Convenience constructor: materializes tables from a callback.
  static SymSet from_action(std::map<int, FinSet> grades,
                            const std::function<std::string(int, const std::string&, const Perm&)>& act);
  static SymSet trivial(std::map<int, FinSet> grades);

  const std::map<int, FinSet>& grades() const { return grades_; }
  const FinSet& grade(int n) const;
  bool has_grade(int n) const { return grades_.count(n) != 0; }
  std::string act(int n, const std::string& a, const Perm& sigma) const;
  std::size_t total_size() const;
  // Grade of an element (labels may repeat across grades; callers track
  // the grade alongside the label).
  std::vector<int> grade_list() const;

  friend bool operator==(const SymSet& a, const SymSet& b) {
    return a.grades_ == b.grades_ && a.action_ == b.action_;
  }

 private:
  std::map<int, FinSet> grades_;
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action_;
};

// A grade-preserving, action-commuting map of symmetric sets.
class EquivMap {
 public:
  EquivMap() = default;
  EquivMap(SymSet dom, SymSet cod, std::map<int, std::map<std::string, std::string>> table);

  static EquivMap identity(const SymSet& s);

  const SymSet& dom() const { return dom_; }
  const SymSet& cod() const { return cod_; }
  const std::string& operator()(int n, const std::string& a) const;
  const std::map<int, std::map<std::string, std::string>>& table() const { return table_; }

 private:
  SymSet dom_, cod_;
  std::map<int, std::map<std::string, std::string>> table_;
};

EquivMap compose(const EquivMap& g, const EquivMap& f);

// An object of sigmaSet over another symmetric set: total + typing.
struct SymSlice {
  SymSet total;
  SymSet base;
  EquivMap typing;  // total -> base
};

// An object of sigmaSet over delta(O): gradewise typing into O.
// delta(O) has trivial actions, so the typing must be orbit-constant.
struct SlicedSymSet {
  SymSet total;
  FinSet base;
  std::map<int, std::map<std::string, std::string>> typing;  // grade -> elem -> O
};

SlicedSymSet make_sliced(SymSet total, FinSet base,
                         std::map<int, std::map<std::string, std::string>> typing);

// delta(O) truncated at `grade_bound`: grade n = {n} x O, trivial action.
SymSet delta(const FinSet& o, int grade_bound);
SlicedSymSet delta_slice(const FinSet& o, int grade_bound);

struct OrbitsResult {
  FinSet orbits;  // labels "n:rep", grade order then representative order
  std::map<int, std::map<std::string, std::string>> projection;  // grade -> elem -> orbit label
};

OrbitsResult orbits(const SymSet& a);

// Disjoint union over nonempty grades of the gradewise fixed points,
// labelled "n:elem".
FinSet fixpoints(const SymSet& a);

// Dependent product along p : E -> A in sigmaSet.  The universe over
// a in A_n is the set of sections  x : p^{-1}(a) -> X_n  with
// typing(x(e)) = e, carrying the conjugation action
//   <a,x>.sigma = <a.sigma, e |-> x(e.sigma^{-1}).sigma>.
SymSlice pi_star(const EquivMap& p, const SymSlice& x);

// Pullback of a slice along a map q : E -> B of symmetric sets.
SymSlice pullback_along(const EquivMap& q, const SymSlice& x);

// Post-composition of the typing with t : B -> C.
SymSlice postcompose(const EquivMap& t, const SymSlice& x);

// Slice-level functors between Set_{/O} and sigmaSet_{/delta(O)}.
SlicedSymSet delta_over(const FinSet& o, const FinMap& d, int grade_bound);  // delta_{/O}
struct SliceOfSets {
  FinSet total;
  FinMap d;
};
SliceOfSets orb_over(const SlicedSymSet& y);  // orb_{/O}
SliceOfSets fix_over(const SlicedSymSet& y);  // fix_{/O}, gradewise coproduct reading

// Reindexing along delta(u) for u : O -> Q.
SlicedSymSet delta_u_lower(const FinMap& u, const SlicedSymSet& y);  // delta(u)_!
SlicedSymSet delta_u_upper(const FinMap& u, const SlicedSymSet& y);  // delta(u)^*

// Basic-fibration (co)reindexing on FinMap slices.
SliceOfSets u_lower(const FinMap& u, const SliceOfSets& x);  // u_!
SliceOfSets u_upper(const FinMap& u, const SliceOfSets& x);  // u^*

// All equivariant maps X -> Y over the common base (typed commutation),
// used by adjunction tests.
std::vector<std::map<int, std::map<std::string, std::string>>> all_equiv_maps_over(
    const SymSlice& x, const SymSlice& y);

}  // namespace polyan
