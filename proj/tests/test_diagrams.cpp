#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polyan/diagrams.hpp"

using namespace polyan;

namespace {

FinSet one_sort() { return FinSet("O", {"o"}); }

AmalgSig binary_op() { return AmalgSig(one_sort(), {{"m", "o", {"o", "o"}}}); }

// The three-type seven-operation fixture: three units and four compound
// operations with the displayed typings.
AmalgSig seven_ops() {
  FinSet o("O", {"x0", "x1", "x2"});
  return AmalgSig(o, {{"u0", "x0", {"x0"}},
                      {"u1", "x1", {"x1"}},
                      {"u2", "x2", {"x2"}},
                      {"f0", "x0", {"x1", "x1"}},
                      {"f1", "x1", {"x2"}},
                      {"f2", "x0", {"x1", "x2"}},
                      {"f3", "x0", {"x2", "x2"}}});
}

SymSig free_binary() {
  FinSet o = one_sort();
  std::map<int, FinSet> grades;
  grades.emplace(2, FinSet("g", {"b+", "b-"}));
  SymSet carrier = SymSet::from_action(grades, [](int, const std::string& e, const Perm& s) {
    if (s == Perm::identity(2)) return e;
    return e == "b+" ? std::string("b-") : std::string("b+");
  });
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  profiles[2]["b+"] = {"o", "o", "o"};
  profiles[2]["b-"] = {"o", "o", "o"};
  return SymSig(o, carrier, profiles);
}

SymSig fixed_binary() {
  FinSet o = one_sort();
  std::map<int, FinSet> grades;
  grades.emplace(2, FinSet("g", {"c"}));
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  profiles[2]["c"] = {"o", "o", "o"};
  return SymSig(o, SymSet::trivial(grades), profiles);
}

TGraph list_fixture_52() {
  // A = {a}, delta(a) = 00, gamma(a) = 0, over [1] = {0, 1}
  MonadHandle list{MonadKind::FreeMonoid};
  FinSet base("O", {"0", "1"});
  FinSet carrier("A", {"a"});
  return make_tgraph(list, base, carrier, FinMap::constant(carrier, base, "0"),
                     {{"a", Word{"0", "0"}}});
}

}  // namespace

TEST_CASE("total tensor: unit, self-plug counts, the seven-op fixture") {
  AmalgSig a = binary_op();
  AmalgSig i = unit_amalg(a.base());
  AmalgSig ia = tensor_total_amalg(i, a);
  CHECK(ia.size() == a.size());
  // lambda is a strict isomorphism
  AmalgSigMor lam = lambda_amalg(a);
  CHECK(lam.is_strict());
  AmalgSig aa = tensor_total_amalg(a, a);
  CHECK(aa.size() == 1);
  CHECK(aa.ops()[0].arity() == 4);
  AmalgSig seven = seven_ops();
  CHECK(tensor_total_amalg(seven, unit_amalg(seven.base())).size() == 7);
}

TEST_CASE("single tensor: slot counts and the laxness witness") {
  FinSet o = one_sort();
  AmalgSig a = binary_op();
  AmalgSig unary(o, {{"e", "o", {"o"}}});
  CHECK(tensor_single_amalg(a, unary).size() == 2);  // one per slot
  // A (x)^s I has Sigma |a| operations; not bijective to A when |a| != 1
  AmalgSig rhs = tensor_single_amalg(a, unit_amalg(o));
  CHECK(rhs.size() == 2);
  CHECK(a.size() == 1);
  for (const auto& op : rhs.ops()) CHECK(op.arity() == 2);  // arities preserved
  AmalgSig empty(o, {});
  CHECK(tensor_single_amalg(a, empty).size() == 0);
}

TEST_CASE("symmetric tensor: unit, class counts against the orbit oracle") {
  SymSig a = free_binary();
  SymSig i = unit_sym(a.base());
  SymSig ia = tensor_sym(i, a);
  CHECK(ia.carrier().total_size() == a.carrier().total_size());
  // free binary self-tensor: raw triples / class size = 8 plugs * 24 / 8
  SymSig aa = tensor_sym(a, a);
  CHECK(aa.carrier().grade(4).size() == 24);
  // Burnside-style: classes of a free tensor are again free
  CHECK(fixpoints(aa.carrier()).size() == 0);
  // trivial-action binary self-tensor: cosets of S_2 wr S_2 in S_4
  SymSig c = fixed_binary();
  SymSig cc = tensor_sym(c, c);
  CHECK(cc.carrier().grade(4).size() == 3);  // |S_4| / |S_2 wr S_2| = 24/8
  // canonicalization is idempotent: re-tensoring gives the same labels
  SymSig cc2 = tensor_sym(c, c);
  CHECK(cc.carrier().grade(4).elems() == cc2.carrier().grade(4).elems());
}

TEST_CASE("symmetric tensor coherence: lambda and rho are isomorphisms") {
  for (const SymSig& a : {free_binary(), fixed_binary()}) {
    SymSigMor lam = lambda_sym(a);
    std::set<std::string> image;
    for (const auto& [n, g] : a.carrier().grades())
      for (const auto& e : g.elems()) image.insert(lam.f()(n, e));
    CHECK(image.size() == a.carrier().total_size());
    SymSigMor rho = rho_sym(a);
    std::set<std::string> rimage;
    for (const auto& [n, g] : rho.dom().carrier().grades())
      for (const auto& e : g.elems()) rimage.insert(rho.f()(n, e));
    CHECK(rimage.size() == a.carrier().total_size());
    CHECK(rho.dom().carrier().total_size() == a.carrier().total_size());
  }
}

TEST_CASE("T-graph tensor: identity monad composes spans, list monad unit") {
  MonadHandle id{MonadKind::Identity};
  FinSet o("O", {"p", "q"});
  FinSet e1("A", {"f"});
  TGraph g1 = make_tgraph(id, o, e1, FinMap::constant(e1, o, "q"), {{"f", Word{"p"}}});
  FinSet e2("B", {"g"});
  TGraph g2 = make_tgraph(id, o, e2, FinMap::constant(e2, o, "p"), {{"g", Word{"q"}}});
  // f : p -> q composed with g : q -> p (delta = source, gamma = target)
  TGraph comp = tensor_tgraph(g2, g1);  // pairs (g, [f]) with delta(g) = gamma(f)
  CHECK(comp.carrier.size() == 1);
  CHECK(comp.gamma(comp.carrier.at(0)) == "p");
  CHECK(comp.delta.at(comp.carrier.at(0)) == Word{"p"});

  TGraph a = list_fixture_52();
  TGraph i = unit_tgraph(a.monad, a.base);
  TGraph ai = tensor_tgraph(a, i);
  CHECK(ai.carrier.size() == a.carrier.size());  // right unit is an iso
  TGraphMor rho = rho_tgraph(a);
  CHECK(rho.dom.carrier.size() == a.carrier.size());
  // self-tensor of the fixture: delta(a) = 00 needs two cells with gamma 0
  TGraph aa = tensor_tgraph(a, a);
  CHECK(aa.carrier.size() == 1);  // only (a | a,a)
  CHECK(aa.delta.at(aa.carrier.at(0)) == Word{"0", "0", "0", "0"});
}

TEST_CASE("units: one operation per sort in every flavour") {
  FinSet o("O", {"a", "b", "c"});
  CHECK(unit_amalg(o).size() == o.size());
  CHECK(unit_sym(o).carrier().grade(1).size() == o.size());
  CHECK(unit_poly(o).B.size() == o.size());
  CHECK(unit_tgraph(MonadHandle{MonadKind::FreeMonoid}, o).carrier.size() == o.size());
  FinSet empty("O", {});
  CHECK(unit_amalg(empty).size() == 0);
}

TEST_CASE("amalgamated coherence: alpha/lambda/rho bijections and diagrams") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    FinSet sorts = oracles::random_sorts(rng, 2);
    AmalgSig a = oracles::random_amalg(rng, sorts, 3, 2);
    AmalgSig b = oracles::random_amalg(rng, sorts, 3, 2);
    AmalgSig c = oracles::random_amalg(rng, sorts, 3, 2);
    AmalgSigMor alpha = alpha_amalg(a, b, c);
    // alpha is a strict bijection
    std::set<std::string> image;
    for (const auto& op : alpha.dom().ops()) image.insert(alpha.f(op.name));
    CHECK(image.size() == alpha.dom().size());
    CHECK(image.size() == alpha.cod().size());
    CHECK(alpha.is_strict());
    // triangle: (rho (x) 1) o alpha o (1 (x) lambda) = id on A (x) B
    AmalgSig ab = tensor_total_amalg(a, b);
    AmalgSigMor tri = compose_amalg(
        tensor_total_mor(rho_amalg(a), AmalgSigMor::identity(b)),
        compose_amalg(alpha_amalg(a, unit_amalg(sorts), b),
                      tensor_total_mor(AmalgSigMor::identity(a), lambda_amalg(b))));
    for (const auto& op : ab.ops()) {
      CHECK(tri.f(op.name) == op.name);
      CHECK(tri.sigma(op.name) == Perm::identity(op.arity()));
    }
  }
}

TEST_CASE("amalgamated pentagon commutes elementwise") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 8; ++trial) {
    FinSet sorts = oracles::random_sorts(rng, 2);
    AmalgSig a = oracles::random_amalg(rng, sorts, 2, 2);
    AmalgSig b = oracles::random_amalg(rng, sorts, 2, 2);
    AmalgSig c = oracles::random_amalg(rng, sorts, 2, 2);
    AmalgSig d = oracles::random_amalg(rng, sorts, 2, 2);
    // top: alpha_{A,B,C(x)D} then alpha_{A(x)B,C,D}
    AmalgSigMor top = compose_amalg(alpha_amalg(tensor_total_amalg(a, b), c, d),
                                    alpha_amalg(a, b, tensor_total_amalg(c, d)));
    // bottom: (1 (x) alpha) then alpha then (alpha (x) 1)
    AmalgSigMor bottom = compose_amalg(
        tensor_total_mor(alpha_amalg(a, b, c), AmalgSigMor::identity(d)),
        compose_amalg(alpha_amalg(a, tensor_total_amalg(b, c), d),
                      tensor_total_mor(AmalgSigMor::identity(a), alpha_amalg(b, c, d))));
    for (const auto& op : top.dom().ops()) {
      CHECK(top.f(op.name) == bottom.f(op.name));
      CHECK(top.sigma(op.name) == bottom.sigma(op.name));
    }
  }
}

TEST_CASE("polynomial diagrams: linear/monomial predicates and morphism checks") {
  FinSet o("O", {"a", "b"});
  PolyDiag id = unit_poly(o);
  CHECK(is_linear(id));
  CHECK(is_monomial(id));
  // binary operation diagram: p has a 2-element fiber
  FinSet e("E", {"1", "2"});
  FinSet bb("B", {"m"});
  PolyDiag bin = make_poly(one_sort(), FinSet("E", {"1", "2"}), FinSet("B", {"m"}),
                           FinMap::constant(FinSet("E", {"1", "2"}), one_sort(), "o"),
                           FinMap::constant(FinSet("E", {"1", "2"}), FinSet("B", {"m"}), "m"),
                           FinMap::constant(FinSet("B", {"m"}), one_sort(), "o"));
  CHECK_FALSE(is_linear(bin));
  CHECK(is_monomial(bin));
  // random diagrams: predicates match direct bijectivity checks
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> size_d(1, 3), pick(0, 2);
    int ne = size_d(rng), nb = size_d(rng);
    std::vector<std::string> ee, be;
    for (int i = 0; i < ne; ++i) ee.push_back("e" + std::to_string(i));
    for (int i = 0; i < nb; ++i) be.push_back("b" + std::to_string(i));
    FinSet E("E", ee), B("B", be);
    std::map<std::string, std::string> sm, pm, tm;
    for (const auto& x : ee) sm[x] = o.at(pick(rng) % 2);
    for (const auto& x : ee) pm[x] = be[pick(rng) % nb];
    for (const auto& x : be) tm[x] = o.at(pick(rng) % 2);
    PolyDiag dg = make_poly(o, E, B, FinMap(E, o, sm), FinMap(E, B, pm), FinMap(B, o, tm));
    CHECK(is_linear(dg) == dg.p.is_bijective());
    CHECK(is_monomial(dg) == dg.t.is_bijective());
  }
  // non-pullback middle squares are rejected
  FinSet e2("E2", {"x", "y"});
  std::map<std::string, std::string> collapse{{"x", "1"}, {"y", "1"}};
  CHECK_THROWS_AS(make_poly_mor(bin, bin, FinMap::identity(one_sort()),
                                FinMap::identity(FinSet("B", {"m"})),
                                FinMap(FinSet("E", {"1", "2"}), FinSet("E", {"1", "2"}),
                                       std::map<std::string, std::string>{{"1", "1"}, {"2", "1"}})),
                  structural_error);
}

TEST_CASE("analytic diagrams reject non-equivariant source typings") {
  FinSet o("O", {"p", "q"});
  std::map<int, FinSet> grades;
  grades.emplace(2, FinSet("g", {"c"}));
  SymSet triv = SymSet::trivial(grades);
  std::map<int, std::map<std::string, std::vector<std::string>>> bad;
  bad[2]["c"] = {"p", "q"};  // c is fixed by the swap but the sources differ
  std::map<int, std::map<std::string, std::string>> t;
  t[2]["c"] = "p";
  CHECK_THROWS_AS(make_andiag(o, triv, bad, t), structural_error);
  std::map<int, std::map<std::string, std::vector<std::string>>> good;
  good[2]["c"] = {"p", "p"};
  CHECK_NOTHROW(make_andiag(o, triv, good, t));
}

TEST_CASE("gph_of_monad_morphism: identity, unit collapse, broken xi") {
  TGraph a = list_fixture_52();
  // the identity morphism gives back an isomorphic graph
  TGraph same = gph_of_monad_morphism(identity_monad_morphism(a.monad), a);
  CHECK(same.carrier.size() == a.carrier.size());
  // unit collapse picks out the unary cells: the fixture has none
  TGraph collapsed = gph_of_monad_morphism(unit_collapse(a.monad), a);
  CHECK(collapsed.carrier.size() == 0);
  // a graph with unary deltas keeps all its edges
  MonadHandle list{MonadKind::FreeMonoid};
  FinSet base("O", {"0", "1"});
  FinSet edges("E", {"e1", "e2"});
  TGraph unary = make_tgraph(list, base, edges, FinMap::constant(edges, base, "0"),
                             {{"e1", Word{"0"}}, {"e2", Word{"1"}}});
  CHECK(gph_of_monad_morphism(unit_collapse(list), unary).carrier.size() == 2);
  // a xi violating the unit square is reported
  MonadMorphism broken = unit_collapse(a.monad);
  broken.xi = [](const FinSet&, const Word& w) {
    Word copy = w;
    copy.push_back(copy.front());
    return copy;
  };
  CHECK_THROWS_AS(gph_of_monad_morphism(broken, unary), structural_error);
}

TEST_CASE("T-graph coherence: pentagon for the cartesian built-ins") {
  for (MonadKind kind : {MonadKind::Identity, MonadKind::FreeMonoid}) {
    MonadHandle monad{kind};
    FinSet o("O", {"0"});
    FinSet c("A", {"a"});
    Word w = kind == MonadKind::Identity ? Word{"0"} : Word{"0", "0"};
    TGraph a = make_tgraph(monad, o, c, FinMap::constant(c, o, "0"), {{"a", w}});
    // alpha_{A,B,C(x)D} ; alpha_{A(x)B,C,D}  ==
    // (1 (x) alpha) ; alpha_{A,B(x)C,D} ; (alpha (x) 1)
    TGraphMor top = compose_tgraph(alpha_tgraph(tensor_tgraph(a, a), a, a),
                                   alpha_tgraph(a, a, tensor_tgraph(a, a)));
    TGraphMor bottom = compose_tgraph(
        tensor_tgraph_mor(alpha_tgraph(a, a, a), identity_tgraph_mor(a)),
        compose_tgraph(alpha_tgraph(a, tensor_tgraph(a, a), a),
                       tensor_tgraph_mor(identity_tgraph_mor(a), alpha_tgraph(a, a, a))));
    CHECK(top.dom.carrier.size() > 0);
    for (const auto& x : top.dom.carrier.elems()) CHECK(top.f(x) == bottom.f(x));
  }
}
