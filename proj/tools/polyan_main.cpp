// Batch front door: JSON in, JSON/DOT out, stable exit codes.
//   0  success / property verified
//   1  property violation found (counterexample in the JSON output)
//   2  input or structural error

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "polyan/compare.hpp"
#include "polyan/json_io.hpp"

using namespace polyan;

namespace {

json read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("cannot open input file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw structural_error(std::string("malformed JSON: ") + e.what());
  }
  return j;
}

int default_bound() {
  if (const char* env = std::getenv("POLYAN_BOUND")) return std::atoi(env);
  return 3;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int run_opetopes(int dim, int size, const std::string& dot_path) {
  auto cells = terminal_cells(dim, size);
  json out = json::array();
  for (const auto& c : cells) out.push_back(to_json(c));
  emit(out);
  if (!dot_path.empty()) {
    std::ofstream dot(dot_path);
    for (const auto& c : cells) dot << opetope_to_dot(c);
  }
  return 0;
}

int run_eval(const std::string& kind, const json& in) {
  if (kind == "poly") {
    PolyDiag d = polydiag_from_json(in.at("diagram"));
    SliceObj x = slice_from_json(in.at("slice"), d.base);
    emit(to_json(eval_poly(d, x)));
  } else if (kind == "analytic") {
    SymSig a = symsig_from_json(in.at("signature"));
    SliceObj x = slice_from_json(in.at("slice"), a.base());
    emit(to_json(eval_analytic(a, x)));
  } else if (kind == "tgraph") {
    TGraph g = tgraph_from_json(in.at("graph"));
    SliceObj x = slice_from_json(in.at("slice"), g.base);
    emit(to_json(eval_tgraph(g, x)));
  } else if (kind == "amalg") {
    AmalgSig a = amalgsig_from_json(in.at("signature"));
    SliceObj x = slice_from_json(in.at("slice"), a.base());
    emit(to_json(eval_amalg(a, x)));
  } else {
    throw structural_error("eval: unknown kind '" + kind + "'");
  }
  return 0;
}

int run_tensor(const std::string& kind, const json& in) {
  if (kind == "total") {
    emit(to_json(tensor_total_amalg(amalgsig_from_json(in.at("left")),
                                    amalgsig_from_json(in.at("right")))));
  } else if (kind == "single") {
    emit(to_json(tensor_single_amalg(amalgsig_from_json(in.at("left")),
                                     amalgsig_from_json(in.at("right")))));
  } else if (kind == "sym") {
    emit(to_json(tensor_sym(symsig_from_json(in.at("left")), symsig_from_json(in.at("right")))));
  } else if (kind == "tgraph") {
    emit(to_json(tensor_tgraph(tgraph_from_json(in.at("left")), tgraph_from_json(in.at("right")))));
  } else {
    throw structural_error("tensor: unknown kind '" + kind + "'");
  }
  return 0;
}

int run_free(const std::string& kind, int depth, int arity_bound, const json& in) {
  FreeChainTruncation chain;
  if (kind == "strict" || kind == "amalg") {
    chain = free_multicategory(amalgsig_from_json(in.at("generators")),
                               kind == "strict" ? FreeKind::Strict : FreeKind::Amalg, depth,
                               arity_bound);
  } else if (kind == "sym") {
    chain = free_multicategory_sym(symsig_from_json(in.at("generators")), depth, arity_bound);
  } else if (kind == "tgraph:list" || kind == "tgraph:id") {
    chain = free_multicategory(tgraph_from_json(in.at("generators")), depth, arity_bound);
  } else {
    throw structural_error("free: unknown kind '" + kind + "'");
  }
  json stages = json::array();
  for (const auto& counts : chain.stage_counts) {
    json stage = json::object();
    for (const auto& [arity, count] : counts) stage[std::to_string(arity)] = count;
    stages.push_back(stage);
  }
  json stabilized = json::object();
  for (const auto& [arity, at] : chain.stabilized_at) stabilized[std::to_string(arity)] = at;
  emit(json{{"stages", stages}, {"stabilized_at", stabilized}, {"growing", chain.growing}});
  return 0;
}

int run_check(const std::string& property, const json& in, int legs, int bound) {
  if (property == "monoid") {
    Report r = in.at("kind") == "tgraph" ? check_monoid(tgraph_monoid_from_json(in.at("monoid")))
                                         : check_monoid(amalg_monoid_from_json(in.at("monoid")));
    emit(to_json(r));
    return r.ok ? 0 : 1;
  }
  if (property == "opetopic-set") {
    OpetopicCheckReport r = opetopic_set_check(opetopic_set_from_json(in));
    emit(json{{"verdict", r.ok ? "ok" : "violation"}, {"counterexamples", r.violations}});
    return r.ok ? 0 : 1;
  }
  if (property == "weak-wide-pb") {
    FunctorHandle f;
    if (in.contains("signature")) {
      f = functor_of_analytic(symsig_from_json(in.at("signature")));
    } else {
      f = functor_of_poly(polydiag_from_json(in.at("diagram")));
    }
    CheckReport r = check_weak_wide_pullback_preservation(f, legs, bound);
    emit(to_json(r));
    return r.ok ? 0 : 1;
  }
  if (property == "weakly-cartesian" || property == "cartesian") {
    // a symmetric signature morphism over the identity, probed over the
    // canonical family
    SymSig dom = symsig_from_json(in.at("dom"));
    SymSig cod = symsig_from_json(in.at("cod"));
    std::map<int, std::map<std::string, std::string>> table;
    for (const auto& [k, grade] : in.at("f").items())
      for (const auto& [e, img] : grade.items()) table[std::stoi(k)][e] = img.get<std::string>();
    SymSigMor mor(dom, cod, FinMap::identity(dom.base()),
                  EquivMap(dom.carrier(), cod.carrier(), std::move(table)));
    NatTransData t = rep_on_morphism(mor, canonical_slices(dom.base(), bound));
    bool ok = property == "cartesian" ? is_cartesian(t) : is_weakly_cartesian(t);
    emit(json{{"verdict", ok ? "ok" : "violation"}});
    return ok ? 0 : 1;
  }
  throw structural_error("check: unknown property '" + property + "'");
}

int run_compare(const std::string& functor, const std::string& verify, const json& in, int bound) {
  if (!verify.empty()) {
    if (verify == "phi") {
      PhiComponent phi = phi_component(amalgsig_from_json(in.at("signature")));
      bool ok = true;
      for (const auto& [n, g] : phi.dom.carrier.grades()) {
        std::set<std::string> image;
        for (const auto& e : g.elems()) image.insert(phi.carrier_map.at(n).at(e));
        if (image.size() != g.size() ||
            (phi.cod.carrier.has_grade(n) && image.size() != phi.cod.carrier.grade(n).size()))
          ok = false;
      }
      emit(json{{"verdict", ok ? "ok" : "violation"}});
      return ok ? 0 : 1;
    }
    if (verify == "psi") {
      PolyDiag d = polydiag_from_json(in.at("diagram"));
      bool ok = true;
      for (const auto& x : canonical_slices(d.base, bound)) {
        PsiComponent psi = psi_component(d, x);
        std::set<std::string> image;
        for (const auto& [k, v] : psi.map) image.insert(v);
        if (image.size() != psi.dom.total.size() || image.size() != psi.cod.total.size())
          ok = false;
      }
      emit(json{{"verdict", ok ? "ok" : "violation"}});
      return ok ? 0 : 1;
    }
    if (verify == "emb-full") {
      PolyDiag d1 = polydiag_from_json(in.at("left"));
      PolyDiag d2 = polydiag_from_json(in.at("right"));
      EmbFullReport r = confirm_emb_full(d1, d2, canonical_slices(d1.base, bound));
      emit(json{{"verdict", r.ok ? "ok" : "violation"},
                {"transformations", r.transformations},
                {"weakly_cartesian", r.weakly_cartesian},
                {"violations", r.violations}});
      return r.ok ? 0 : 1;
    }
    throw structural_error("compare: unknown verification '" + verify + "'");
  }
  if (functor == "ksig") {
    emit(to_json(k_sig(amalgsig_from_json(in.at("signature")))));
  } else if (functor == "iota-a") {
    emit(to_json(iota_a(amalgsig_from_json(in.at("signature")))));
  } else if (functor == "iota-s") {
    SymSig a = symsig_from_json(in.at("signature"));
    AnDiag d = iota_s(a);
    json grades = json::object();
    for (const auto& [n, g] : d.carrier.grades()) grades[std::to_string(n)] = to_json(g);
    emit(json{{"base", to_json(d.base)}, {"carrier_grades", grades}});
  } else if (functor == "kdiag") {
    PolyDiag d = polydiag_from_json(in.at("diagram"));
    AnDiag ad = k_diag(d);
    json grades = json::object();
    for (const auto& [n, g] : ad.carrier.grades()) grades[std::to_string(n)] = to_json(g);
    emit(json{{"base", to_json(ad.base)}, {"carrier_grades", grades}});
  } else {
    throw structural_error("compare: unknown functor '" + functor + "'");
  }
  return 0;
}

int run_recover(const json& in, int bound) {
  SymSig a = symsig_from_json(in.at("signature"));
  TabulatedFunctor tab = tabulate(functor_of_analytic(a), bound);
  RecoverResult r = recover_signature(tab);
  json out;
  if (r.outcome == RecoverOutcome::Recovered) {
    out["verdict"] = "recovered";
    out["signature"] = to_json(r.signature);
  } else if (r.outcome == RecoverOutcome::Inconclusive) {
    out["verdict"] = "inconclusive";
    out["detail"] = r.detail;
  } else {
    out["verdict"] = "not-analytic";
    out["detail"] = r.detail;
  }
  emit(out);
  return r.outcome == RecoverOutcome::Recovered ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite signatures, polynomial and analytic functors, opetopes"};
  app.require_subcommand(1);
  unsigned seed = 0;
  app.add_option("--seed", seed, "seed for randomized property runs");

  auto* op = app.add_subcommand("opetopes", "enumerate terminal opetopes");
  int dim = 2, size = default_bound();
  std::string dot_path;
  op->add_option("--dim", dim, "dimension");
  op->add_option("--size", size, "size bound");
  op->add_option("--dot", dot_path, "also write DOT output");

  auto* ev = app.add_subcommand("eval", "evaluate a represented functor");
  std::string eval_kind = "poly", eval_input;
  ev->add_option("--kind", eval_kind, "poly|analytic|tgraph|amalg");
  ev->add_option("--input", eval_input, "input JSON")->required();

  auto* tn = app.add_subcommand("tensor", "tensor two objects over one base");
  std::string tensor_kind = "total", tensor_input;
  tn->add_option("--kind", tensor_kind, "total|single|sym|tgraph");
  tn->add_option("--input", tensor_input, "input JSON")->required();

  auto* fr = app.add_subcommand("free", "truncated free multicategory");
  std::string free_kind = "strict", free_input;
  int depth = 4, arity_bound = 5;
  fr->add_option("--kind", free_kind, "strict|amalg|sym|tgraph:list|tgraph:id");
  fr->add_option("--depth", depth, "chain depth");
  fr->add_option("--arity-bound", arity_bound, "arity bound");
  fr->add_option("--input", free_input, "generators JSON")->required();

  auto* ck = app.add_subcommand("check", "verify a property");
  std::string property, check_input;
  int legs = 2, bound = default_bound();
  ck->add_option("--property", property,
                 "weak-wide-pb|cartesian|weakly-cartesian|monoid|algebra|opetopic-set")
      ->required();
  ck->add_option("--input", check_input, "input JSON")->required();
  ck->add_option("--legs", legs, "wide pullback legs");
  ck->add_option("--bound", bound, "probe size bound");

  auto* cp = app.add_subcommand("compare", "comparison functors and their coherence");
  std::string functor, verify, compare_input;
  int cbound = 2;
  cp->add_option("--functor", functor, "ksig|kdiag|iota-a|iota-s");
  cp->add_option("--verify", verify, "phi|psi|emb-full");
  cp->add_option("--input", compare_input, "input JSON")->required();
  cp->add_option("--bound", cbound, "probe size bound");

  auto* rc = app.add_subcommand("recover", "tabulate and recover a signature");
  std::string recover_input;
  int rbound = default_bound();
  rc->add_option("--input", recover_input, "signature JSON")->required();
  rc->add_option("--bound", rbound, "tabulation bound");

  CLI11_PARSE(app, argc, argv);
  (void)seed;

  try {
    if (op->parsed()) return run_opetopes(dim, size, dot_path);
    if (ev->parsed()) return run_eval(eval_kind, read_input(eval_input));
    if (tn->parsed()) return run_tensor(tensor_kind, read_input(tensor_input));
    if (fr->parsed()) return run_free(free_kind, depth, arity_bound, read_input(free_input));
    if (ck->parsed()) return run_check(property, read_input(check_input), legs, bound);
    if (cp->parsed()) return run_compare(functor, verify, read_input(compare_input), cbound);
    if (rc->parsed()) return run_recover(read_input(recover_input), rbound);
  } catch (const structural_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
