#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polyan/finset.hpp"
#include "polyan/signatures.hpp"
#include "polyan/symset.hpp"

namespace polyan {

// ---------------------------------------------------------------- PolyDiag

// A finitary polynomial diagram O <-s- E -p-> B -t-> O.
struct PolyDiag {
  FinSet base;
  FinSet E;
  FinSet B;
  FinMap s;  // E -> base
  FinMap p;  // E -> B
  FinMap t;  // B -> base
};

PolyDiag make_poly(FinSet base, FinSet E, FinSet B, FinMap s, FinMap p, FinMap t);
std::vector<std::string> poly_fiber(const PolyDiag& d, const std::string& b);

bool is_linear(const PolyDiag& d);    // p bijective
bool is_monomial(const PolyDiag& d);  // t bijective

// A morphism (f, g, u); the middle square must be a pullback, i.e. g
// restricts to a bijection on every p-fiber.
struct PolyDiagMor {
  PolyDiag dom, cod;
  FinMap u;  // base -> base'
  FinMap f;  // B -> B'
  FinMap g;  // E -> E'
};

PolyDiagMor make_poly_mor(PolyDiag dom, PolyDiag cod, FinMap u, FinMap f, FinMap g);
PolyDiagMor identity_poly_mor(const PolyDiag& d);
PolyDiagMor compose_poly(const PolyDiagMor& g2, const PolyDiagMor& g1);

PolyDiag unit_poly(const FinSet& o);

// Composition tensor of diagrams over the same base (GK 1.11):
// operations are pairs <b, y> with y : p^{-1}(b) -> B' matching types.
PolyDiag tensor_poly(const PolyDiag& a, const PolyDiag& b);
PolyDiagMor tensor_poly_mor(const PolyDiagMor& f, const PolyDiagMor& g);

// Strong coherence isos in the fibre, as element maps on B-parts/E-parts.
PolyDiagMor alpha_poly(const PolyDiag& a, const PolyDiag& b, const PolyDiag& c);
PolyDiagMor lambda_poly(const PolyDiag& a);  // A -> I (x) A
PolyDiagMor rho_poly(const PolyDiag& a);     // A (x) I -> A

// ------------------------------------------------------------- amalgamated

// Total tensor over a shared base: <a, b_1..b_{|a|}> with matching types,
// inputs concatenated block after block.
AmalgSig tensor_total_amalg(const AmalgSig& a, const AmalgSig& b);
std::string total_tensor_label(const std::string& a, const std::vector<std::string>& bs);

// Tensor of morphisms over the same base map.
AmalgSigMor tensor_total_mor(const AmalgSigMor& fbar, const AmalgSigMor& gbar);

// Single tensor <a, i, b>: slot i of a receives b; the composite profile
// keeps a's other inputs in order and appends b's inputs.
AmalgSig tensor_single_amalg(const AmalgSig& a, const AmalgSig& b);

// Strong coherence isos for the total tensor in Sig_a (all strict).
AmalgSigMor alpha_amalg(const AmalgSig& a, const AmalgSig& b, const AmalgSig& c);
AmalgSigMor lambda_amalg(const AmalgSig& a);  // A -> I (x) A
AmalgSigMor rho_amalg(const AmalgSig& a);     // A (x) I -> A

// ---------------------------------------------------------------- symmetric

// Tensor in Sig_s: ~-classes of <a, (b_i), sigma>; canonical class
// representative is the lexicographically minimal member.
SymSig tensor_sym(const SymSig& a, const SymSig& b);
SymSigMor tensor_sym_mor(const SymSigMor& f, const SymSigMor& g);

// Raw triple bookkeeping (exposed for oracles/tests).
struct SymTensorTriple {
  std::string a;
  std::vector<std::string> bs;  // b_1..b_{|a|}
  Perm sigma;                   // in S_{sum |b_i|}
};
std::string sym_triple_label(const SymTensorTriple& t);
// All members of the ~-class of `t` (closure under the defining relation).
std::vector<SymTensorTriple> sym_class_of(const SymSig& a, const SymSig& b,
                                          const SymTensorTriple& t);

SymSigMor alpha_sym(const SymSig& a, const SymSig& b, const SymSig& c);
SymSigMor lambda_sym(const SymSig& a);
SymSigMor rho_sym(const SymSig& a);

// ---------------------------------------------------------------- T-graphs

// T(O) elements are words over the base; the identity monad restricts to
// one-letter words.  Carriers are materialized on demand (every operation
// touches finitely many words).
using Word = std::vector<std::string>;

enum class MonadKind { Identity, FreeMonoid };

struct MonadHandle {
  MonadKind kind = MonadKind::FreeMonoid;
  Word eta(const std::string& o) const { return Word{o}; }
  Word mu(const std::vector<Word>& ws) const;
  Word map(const FinMap& u, const Word& w) const;
  void validate(const FinSet& o, const Word& w) const;
};

std::string word_label(const Word& w);

struct TGraph {
  MonadHandle monad;
  FinSet base;
  FinSet carrier;
  FinMap gamma;                       // carrier -> base
  std::map<std::string, Word> delta;  // carrier -> T(base)
};

TGraph make_tgraph(MonadHandle monad, FinSet base, FinSet carrier, FinMap gamma,
                   std::map<std::string, Word> delta);

struct TGraphMor {
  TGraph dom, cod;
  FinMap u;
  FinMap f;  // carriers
};

TGraphMor make_tgraph_mor(TGraph dom, TGraph cod, FinMap u, FinMap f);
TGraphMor identity_tgraph_mor(const TGraph& g);
TGraphMor compose_tgraph(const TGraphMor& g2, const TGraphMor& g1);

TGraph unit_tgraph(const MonadHandle& monad, const FinSet& o);

// Burroni tensor: carrier = pullback of delta_A against T(gamma_B);
// elements "(a|b_1,..,b_k)" where k = |delta_A(a)|.
TGraph tensor_tgraph(const TGraph& a, const TGraph& b);
TGraphMor tensor_tgraph_mor(const TGraphMor& f, const TGraphMor& g);

TGraphMor alpha_tgraph(const TGraph& a, const TGraph& b, const TGraph& c);
TGraphMor lambda_tgraph(const TGraph& a);  // A -> O (x) A
TGraphMor rho_tgraph(const TGraph& a);     // A (x) O -> A

// Prone lift of b along u: carrier {(o,b,w) : u(o)=gamma(b), T(u)(w)=delta(b)}.
struct TGraphReindexResult {
  TGraph graph;
  TGraphMor prone;
};
TGraphReindexResult reindex_tgraph(const FinMap& u, const TGraph& b);

struct TGraphSupineResult {
  TGraph graph;
  TGraphMor supine;  // (1_A, u)
};
TGraphSupineResult supine_tgraph(const FinMap& u, const TGraph& a);

// A monad morphism (F, xi) : (S,...) -> (T,...) with F the identity
// functor on finite sets; xi_O : T(O) -> S(O) given per object.
struct MonadMorphism {
  MonadHandle src;  // S
  MonadHandle dst;  // T
  std::function<Word(const FinSet&, const Word&)> xi;  // xi_O : T(O) -> S(O)
};

// The unit collapse (T, eta) -> identity monad; picks out unary cells.
MonadMorphism unit_collapse(const MonadHandle& t);
MonadMorphism identity_monad_morphism(const MonadHandle& t);

// Gph(F, xi): pullback of F(delta) against xi_O, per materialized element.
TGraph gph_of_monad_morphism(const MonadMorphism& m, const TGraph& a);

// ------------------------------------------------------------- analytic dg

// An analytic diagram: symmetric-set carrier with source/target typings;
// positions <a,i> always carry the conjugation action (not stored).
struct AnDiag {
  FinSet base;
  SymSet carrier;
  // s[(grade,elem)][i-1] = source type of position i; t[(grade,elem)] = target
  std::map<int, std::map<std::string, std::vector<std::string>>> s;
  std::map<int, std::map<std::string, std::string>> t;
};

AnDiag make_andiag(FinSet base, SymSet carrier,
                   std::map<int, std::map<std::string, std::vector<std::string>>> s,
                   std::map<int, std::map<std::string, std::string>> t);

struct AnDiagMor {
  AnDiag dom, cod;
  FinMap u;
  EquivMap f;
};

AnDiagMor make_andiag_mor(AnDiag dom, AnDiag cod, FinMap u, EquivMap f);

AnDiag unit_andiag(const FinSet& o);

}  // namespace polyan
