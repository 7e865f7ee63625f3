#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polyan/diagrams.hpp"
#include "polyan/finset.hpp"
#include "polyan/signatures.hpp"

namespace polyan {

// An object d : X -> O of Set_{/O}.
struct SliceObj {
  FinSet total;
  FinMap d;
};

SliceObj make_slice(FinSet total, FinMap d);
SliceObj identity_slice(const FinSet& o);

// All slice maps (X,d) -> (Y,e) over the identity of the base.
std::vector<FinMap> slice_maps(const SliceObj& x, const SliceObj& y);

// Canonical slice objects with |X| <= bound over O: totals {x1,..,xk} with
// typings in nondecreasing base order (one representative per iso class).
std::vector<SliceObj> canonical_slices(const FinSet& o, int bound);
// Every slice object with totals {x1..xk}, k <= bound (all typings).
std::vector<SliceObj> all_slices(const FinSet& o, int bound);

// ------------------------------------------------------------- evaluation

// A (x) X for an amalgamated signature: typed tuples (a, x_1..x_n).
SliceObj eval_amalg(const AmalgSig& a, const SliceObj& x);

// t_! p_* s^* for a polynomial diagram: elements (b; y restricted to the
// fiber of p over b), labelled in fiber order.
SliceObj eval_poly(const PolyDiag& d, const SliceObj& x);

// Analytic evaluation: tuples modulo (a, xs) ~ (a.sigma, xs o sigma),
// with the lexicographically minimal member as class representative.
SliceObj eval_analytic(const SymSig& a, const SliceObj& x);
std::string analytic_class_rep(const SymSig& a, int n, const std::string& op,
                               const std::vector<std::string>& xs);

// A *^T X for a T-graph: tuples matching the delta word.
SliceObj eval_tgraph(const TGraph& g, const SliceObj& x);

// ----------------------------------------------------- endofunctor handles

// A functor Set_{/Q} -> Set_{/O} given extensionally (O = Q in the fibre
// case).  on_map(g, X, Y) is the action on a slice map g : X -> Y.
struct FunctorHandle {
  FinSet dom_base;
  FinSet cod_base;
  std::function<SliceObj(const SliceObj&)> on_obj;
  std::function<FinMap(const FinMap&, const SliceObj&, const SliceObj&)> on_map;
};

FunctorHandle functor_of_amalg(const AmalgSig& a);
FunctorHandle functor_of_poly(const PolyDiag& d);
FunctorHandle functor_of_analytic(const SymSig& a);
FunctorHandle functor_of_tgraph(const TGraph& g);
// F o u^* and u^* o F composites used by rep-on-morphism over u : O -> Q.
FunctorHandle precompose_pullback(const FunctorHandle& f, const FinMap& u);
FunctorHandle postcompose_pullback(const FinMap& u, const FunctorHandle& f);

// ------------------------------------------------------ natural transforms

// Components over a fixed probe family, naturality checked over every
// slice map within the family.
struct NatTransData {
  FunctorHandle source;
  FunctorHandle target;
  std::vector<SliceObj> family;  // objects of Set_{/Q}
  std::vector<std::map<std::string, std::string>> components;
};

NatTransData make_nat_trans(FunctorHandle source, FunctorHandle target,
                            std::vector<SliceObj> family,
                            std::vector<std::map<std::string, std::string>> components);

enum class RepKind { Amalg, Poly, Sym, TGraph };

// rep on morphisms: the component at Y maps eval(dom)(u^* Y) into
// u^*(eval(cod)(Y)) by the representation formulas.
NatTransData rep_on_morphism(const AmalgSigMor& m, const std::vector<SliceObj>& family);
NatTransData rep_on_morphism(const PolyDiagMor& m, const std::vector<SliceObj>& family);
NatTransData rep_on_morphism(const SymSigMor& m, const std::vector<SliceObj>& family);
NatTransData rep_on_morphism(const TGraphMor& m, const std::vector<SliceObj>& family);

bool is_weakly_cartesian(const NatTransData& t);
bool is_cartesian(const NatTransData& t);

// -------------------------------------------------------- prone and supine

struct PolyProneResult {
  PolyDiag diagram;
  PolyDiagMor prone;
};
PolyProneResult prone_poly(const FinMap& u, const PolyDiag& d);

struct PolySupineResult {
  PolyDiag diagram;
  PolyDiagMor supine;
};
PolySupineResult supine_poly(const FinMap& u, const PolyDiag& d);

// --------------------------------------------------------------- checkers

struct CheckReport {
  bool ok = true;
  std::vector<std::string> counterexamples;
};

// For every wide cospan with `legs` legs over slices of size <= bound,
// checks that the image of the wide pullback is a weak (resp. strict)
// limit of the image cone.  Cospans whose pullback exceeds
// `max_pullback_size` are skipped (tabulated functors cannot evaluate
// beyond their bound); a negative value means no cap.
CheckReport check_weak_wide_pullback_preservation(const FunctorHandle& f, int legs, int bound,
                                                  bool strict = false,
                                                  int max_pullback_size = -1);

// --------------------------------------------------------------- tabulation

struct TabulatedFunctor {
  FinSet base;
  int bound = 3;
  std::vector<SliceObj> objects;                      // canonical slices
  std::vector<SliceObj> values;                       // F(object)
  // action[i][j][k]: image of the k-th slice map object_i -> object_j
  std::map<std::pair<int, int>, std::vector<FinMap>> maps;
  std::map<std::pair<int, int>, std::vector<FinMap>> action;
  int index_of(const SliceObj& x) const;
};

TabulatedFunctor tabulate(const FunctorHandle& f, int bound);

// Evaluates a tabulated functor on arbitrary slices (within the bound) by
// transporting along the canonical iso to a tabulated representative.
FunctorHandle tabulated_handle(const TabulatedFunctor& tab);

enum class RecoverOutcome { Recovered, Inconclusive, NotAnalytic };

struct RecoverResult {
  RecoverOutcome outcome = RecoverOutcome::Inconclusive;
  SymSig signature;       // valid when outcome == Recovered
  std::string detail;
};

// Constructive direction of the analytic characterization: Trnkova-style
// thin decomposition, minimal objects, generic elements, stabilizer
// subgroups, coset actions.
RecoverResult recover_signature(const TabulatedFunctor& f);

// The unique (f, 1_O) with rep(f) = t, for t weakly cartesian between two
// analytic evaluators in one fibre; throws structural_error when no
// morphism reproduces t.
SymSigMor transformation_to_morphism(const SymSig& a, const SymSig& b, const NatTransData& t);

// All natural transformations between two polynomial evaluators in the
// fibre over their shared base (via the representable decomposition),
// returned over the given probe family.
std::vector<NatTransData> enumerate_poly_nat_trans(const PolyDiag& d1, const PolyDiag& d2,
                                                   const std::vector<SliceObj>& family);

}  // namespace polyan
