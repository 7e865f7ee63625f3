#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyan/diagrams.hpp"
#include "polyan/evaluation.hpp"
#include "polyan/signatures.hpp"
#include "polyan/symset.hpp"

namespace polyan {

// K_sig : Sig_a -> Sig_s.  s(A) = {(a,tau)} with the free right action,
// d_(a,tau) = d_a o tau; on morphisms s(f,sigma)(a,tau) = (f(a), sigma_a^{-1} o tau).
SymSig k_sig(const AmalgSig& a);
SymSigMor k_sig(const AmalgSigMor& m);
std::string k_sig_elem(const std::string& op, const Perm& tau);

// iota_a : Sig_a -> PolyDiag.  E^A = {(a,i)}, p = pi_1, s(a,i) = d_a(i),
// t(a) = d_a(0); on morphisms g(a,i) = (f(a), sigma_a^{-1}(i)).
PolyDiag iota_a(const AmalgSig& a);
PolyDiagMor iota_a(const AmalgSigMor& m);
std::string iota_a_pos(const std::string& op, int i);
// Quasi-inverse with canonical fiber enumerations.
AmalgSig iota_a_inv(const PolyDiag& d);

// iota_s : Sig_s -> AnDiag with the conjugation action on positions.
AnDiag iota_s(const SymSig& a);
AnDiagMor iota_s(const SymSigMor& m);

// K_diag : PolyDiag -> AnDiag.  A~ = {(a,h) : h : (|a|] ~ p^{-1}(a)}.
AnDiag k_diag(const PolyDiag& d);
AnDiagMor k_diag(const PolyDiagMor& m);
std::string k_diag_elem(const std::string& op, const std::vector<std::string>& h);

// Five-functor evaluation of an analytic diagram, computed literally
// through the symset pipeline orb o t_! o p_* o s^* o delta.
SliceObj eval_andiag(const AnDiag& d, const SliceObj& x);

// Phi : K_diag o iota_a => iota_s o K_sig, as carrier bijections.
struct PhiComponent {
  AnDiag dom, cod;
  std::map<int, std::map<std::string, std::string>> carrier_map;  // A~ -> s(A)
};
PhiComponent phi_component(const AmalgSig& a);

// Psi : rep_pd => rep_and o K_diag, per slice object.
struct PsiComponent {
  SliceObj dom, cod;              // eval_poly(d, x) and eval_andiag(K_diag d, x)
  std::map<std::string, std::string> map;
};
PsiComponent psi_component(const PolyDiag& d, const SliceObj& x);

// Exhaustive emb-full check: every weakly cartesian transformation found
// between the two polynomial evaluators is cartesian.
struct EmbFullReport {
  bool ok = true;
  int transformations = 0;
  int weakly_cartesian = 0;
  std::vector<std::string> violations;
};
EmbFullReport confirm_emb_full(const PolyDiag& d1, const PolyDiag& d2,
                               const std::vector<SliceObj>& family);

}  // namespace polyan
