#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "polyan/finset.hpp"

using namespace polyan;

namespace {

FinSet fs(const std::string& id, std::vector<std::string> e) { return FinSet(id, std::move(e)); }

}  // namespace

TEST_CASE("pullback: product over the terminal set has 6 pairs") {
  FinSet one = terminal_set();
  FinSet x = fs("X", {"x", "y"});
  FinSet y = fs("Y", {"1", "2", "3"});
  auto pb = pullback(FinMap::constant(x, one, "*"), FinMap::constant(y, one, "*"));
  CHECK(pb.object.size() == 6);
  for (const auto& p : pb.object.elems()) CHECK(pb.to_left(p) != pb.to_right(p));
}

TEST_CASE("pullback along the identity is the other leg") {
  FinSet o = fs("O", {"a", "b"});
  FinSet b = fs("B", {"p", "q", "r"});
  std::map<std::string, std::string> t{{"p", "a"}, {"q", "a"}, {"r", "b"}};
  FinMap g(b, o, t);
  auto pb = pullback(FinMap::identity(o), g);
  CHECK(pb.object.size() == b.size());
  for (const auto& e : pb.object.elems()) CHECK(pb.to_left(e) == g(pb.to_right(e)));
}

TEST_CASE("pullback count agrees with exhaustive pair enumeration") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    FinSet c = fs("C", {"a", "b"});
    FinSet x = fs("X", {"1", "2", "3"});
    FinSet y = fs("Y", {"u", "v"});
    std::uniform_int_distribution<int> coin(0, 1);
    std::map<std::string, std::string> tf, tg;
    for (const auto& e : x.elems()) tf[e] = c.at(coin(rng));
    for (const auto& e : y.elems()) tg[e] = c.at(coin(rng));
    FinMap f(x, c, tf), g(y, c, tg);
    std::size_t brute = 0;
    for (const auto& a : x.elems())
      for (const auto& b2 : y.elems())
        if (f(a) == g(b2)) ++brute;
    CHECK(pullback(f, g).object.size() == brute);
  }
}

TEST_CASE("pullback is a weak pullback and mediating maps are unique") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    FinSet c = fs("C", {"a", "b"});
    FinSet x = fs("X", {"1", "2"});
    FinSet y = fs("Y", {"u", "v", "w"});
    std::uniform_int_distribution<int> coin(0, 1);
    std::map<std::string, std::string> tf, tg;
    for (const auto& e : x.elems()) tf[e] = c.at(coin(rng));
    for (const auto& e : y.elems()) tg[e] = c.at(coin(rng));
    FinMap f(x, c, tf), g(y, c, tg);
    auto pb = pullback(f, g);
    CHECK(is_weak_pullback({pb.to_left, pb.to_right, f, g}));
    CHECK(is_strict_pullback({pb.to_left, pb.to_right, f, g}));
    // universal property: every cone factors through exactly one map
    for (const auto& z : {fs("Z", {}), fs("Z", {"z1"}), fs("Z", {"z1", "z2"})}) {
      for (const auto& z1 : all_maps(z, x)) {
        for (const auto& z2 : all_maps(z, y)) {
          bool commutes = true;
          for (const auto& e : z.elems())
            if (f(z1(e)) != g(z2(e))) commutes = false;
          if (!commutes) continue;
          int mediators = 0;
          for (const auto& u : all_maps(z, pb.object)) {
            if (compose(pb.to_left, u) == z1 && compose(pb.to_right, u) == z2) ++mediators;
          }
          CHECK(mediators == 1);
        }
      }
    }
  }
}

TEST_CASE("is_weak_pullback: weak but not strict corners, and missing pairs") {
  FinSet c = fs("C", {"*"});
  FinSet x = fs("X", {"x"});
  FinSet y = fs("Y", {"y"});
  FinMap f = FinMap::constant(x, c, "*");
  FinMap g = FinMap::constant(y, c, "*");
  // genuine pullback
  auto pb = pullback(f, g);
  CHECK(is_weak_pullback({pb.to_left, pb.to_right, f, g}));
  // redundant corner element: still weak, no longer strict
  FinSet corner2 = fs("P2", {"p", "q"});
  FinMap q1 = FinMap::constant(corner2, x, "x");
  FinMap q2 = FinMap::constant(corner2, y, "y");
  CHECK(is_weak_pullback({q1, q2, f, g}));
  CHECK_FALSE(is_strict_pullback({q1, q2, f, g}));
  // deleting the only filler breaks weakness
  FinSet corner0 = fs("P0", {});
  CHECK_FALSE(is_weak_pullback({FinMap(corner0, x, {}), FinMap(corner0, y, {}), f, g}));
  // non-commuting squares are rejected
  FinSet c2 = fs("C2", {"0", "1"});
  FinMap f2 = FinMap::constant(x, c2, "0");
  FinMap g2 = FinMap::constant(y, c2, "1");
  FinSet corner1 = fs("P1", {"p"});
  CHECK_THROWS_AS(
      is_weak_pullback({FinMap::constant(corner1, x, "x"), FinMap::constant(corner1, y, "y"), f2, g2}),
      structural_error);
}

TEST_CASE("coproduct: empty, small, and positional blocks") {
  CHECK(coproduct({}).object.size() == 0);
  FinSet a1 = fs("A", {"a"}), b2 = fs("B", {"b", "c"});
  auto cp = coproduct({a1, b2});
  CHECK(cp.object.size() == 3);
  std::set<std::string> images;
  for (const auto& e : a1.elems()) images.insert(cp.injections[0](e));
  for (const auto& e : b2.elems()) images.insert(cp.injections[1](e));
  CHECK(images.size() == 3);
  // sizes (2,1,3): injection images occupy the contiguous position blocks
  auto cp2 = coproduct({fs("A", {"a1", "a2"}), fs("B", {"b1"}), fs("C", {"c1", "c2", "c3"})});
  CHECK(cp2.object.size() == 6);
  CHECK(cp2.object.index_of(cp2.injections[0]("a1")) == 0);
  CHECK(cp2.object.index_of(cp2.injections[0]("a2")) == 1);
  CHECK(cp2.object.index_of(cp2.injections[1]("b1")) == 2);
  CHECK(cp2.object.index_of(cp2.injections[2]("c1")) == 3);
  CHECK(cp2.object.index_of(cp2.injections[2]("c3")) == 5);
}

TEST_CASE("quotient: trivial, collapsing, and union-find agreement") {
  FinSet s = fs("S", {"1", "2", "3", "4"});
  auto q0 = quotient(s, {});
  CHECK(q0.classes.size() == 4);
  CHECK(q0.projection.is_bijective());
  auto q1 = quotient(s, {{"1", "2"}, {"2", "3"}, {"3", "4"}});
  CHECK(q1.classes.size() == 1);
  auto q2 = quotient(s, {{"1", "2"}, {"3", "4"}});
  CHECK(q2.classes.size() == 2);
  CHECK(q2.projection("2") == "1");
  CHECK(q2.projection("4") == "3");
  // union-find oracle on random relations
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    std::uniform_int_distribution<int> d(0, 5), pairs(0, 6);
    std::vector<std::string> elems;
    for (int i = 0; i < 6; ++i) elems.push_back("e" + std::to_string(i));
    FinSet big("S", elems);
    oracles::UnionFind uf(6);
    std::vector<std::pair<std::string, std::string>> rel;
    int k = pairs(rng);
    for (int i = 0; i < k; ++i) {
      int a = d(rng), b = d(rng);
      rel.push_back({elems[a], elems[b]});
      uf.unite(a, b);
    }
    auto q = quotient(big, rel);
    CHECK(q.classes.size() == uf.classes());
    // projection is surjective and identifies exactly the generated relation
    CHECK(q.projection.is_surjective());
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        CHECK((q.projection(elems[a]) == q.projection(elems[b])) == (uf.find(a) == uf.find(b)));
  }
  CHECK_THROWS_AS(quotient(s, {{"1", "zzz"}}), structural_error);
}

TEST_CASE("operad_compose: units") {
  // id_k * (id_{n_1},...,id_{n_k}) = id
  for (int k = 1; k <= 3; ++k) {
    std::vector<Perm> ids;
    int total = 0;
    for (int i = 0; i < k; ++i) {
      ids.push_back(Perm::identity(i + 1));
      total += i + 1;
    }
    CHECK(operad_compose(Perm::identity(k), ids) == Perm::identity(total));
  }
  // k = 1: tau = id_1 acts trivially
  for (const auto& s : Perm::all(3)) CHECK(operad_compose(Perm::identity(1), {s}) == s);
  CHECK_THROWS_AS(operad_compose(Perm::identity(2), {Perm::identity(1)}), structural_error);
}

TEST_CASE("operad_compose: block-swap matches the independent oracle") {
  Perm tau = Perm::swap2();
  std::vector<Perm> sig{Perm::identity(2), Perm::identity(1)};
  Perm got = operad_compose(tau, sig);
  Perm want = oracles::block_perm_oracle(tau, sig);
  CHECK(got == want);
  // block of size 2 goes to the end: 1->2, 2->3, 3->1
  CHECK(got(1) == 2);
  CHECK(got(2) == 3);
  CHECK(got(3) == 1);
}

TEST_CASE("operad_compose agrees with the oracle on all small instances") {
  for (int k = 1; k <= 3; ++k) {
    for (const auto& tau : Perm::all(k)) {
      // arities in {1,2}
      std::vector<int> arity(k, 1);
      while (true) {
        std::vector<std::vector<Perm>> pools;
        for (int i = 0; i < k; ++i) pools.push_back(Perm::all(arity[i]));
        std::vector<std::size_t> idx(k, 0);
        while (true) {
          std::vector<Perm> sig;
          for (int i = 0; i < k; ++i) sig.push_back(pools[i][idx[i]]);
          CHECK(operad_compose(tau, sig) == oracles::block_perm_oracle(tau, sig));
          std::size_t i = 0;
          while (i < idx.size()) {
            if (++idx[i] < pools[i].size()) break;
            idx[i++] = 0;
          }
          if (i == idx.size()) break;
        }
        int j = 0;
        while (j < k && arity[j] == 2) arity[j++] = 1;
        if (j == k) break;
        arity[j] = 2;
      }
    }
  }
}

TEST_CASE("operad_compose matches the displayed index formula on equal arities") {
  // all inner arities equal n: position (m0, m1) |-> n (tau(m0)-1) + sigma_{m0}(m1)
  for (int k = 1; k <= 3; ++k) {
    for (int n = 1; n <= 2; ++n) {
      for (const auto& tau : Perm::all(k)) {
        std::vector<std::vector<Perm>> pools(k, Perm::all(n));
        std::vector<std::size_t> idx(k, 0);
        while (true) {
          std::vector<Perm> sig;
          for (int i = 0; i < k; ++i) sig.push_back(pools[i][idx[i]]);
          Perm got = operad_compose(tau, sig);
          for (int m0 = 1; m0 <= k; ++m0)
            for (int m1 = 1; m1 <= n; ++m1)
              CHECK(got(n * (m0 - 1) + m1) == n * (tau(m0) - 1) + sig[m0 - 1](m1));
          std::size_t i = 0;
          while (i < idx.size()) {
            if (++idx[i] < pools[i].size()) break;
            idx[i++] = 0;
          }
          if (i == idx.size()) break;
        }
      }
    }
  }
}

TEST_CASE("operad associativity law, exhaustively at desk scale") {
  // (tau * sigma) * rho = tau * (sigma_i * rho-block_i)
  for (int k = 1; k <= 2; ++k) {
    for (const auto& tau : Perm::all(k)) {
      std::vector<int> arity(k, 1);
      while (true) {
        std::vector<std::vector<Perm>> pools;
        for (int i = 0; i < k; ++i) pools.push_back(Perm::all(arity[i]));
        std::vector<std::size_t> idx(k, 0);
        while (true) {
          std::vector<Perm> sig;
          int total = 0;
          for (int i = 0; i < k; ++i) {
            sig.push_back(pools[i][idx[i]]);
            total += arity[i];
          }
          // inner-inner arities all 2 (forced reading is unambiguous)
          std::vector<Perm> rho(total, Perm::identity(2));
          rho[0] = Perm::swap2();
          Perm lhs = operad_compose(operad_compose(tau, sig), rho);
          std::vector<Perm> grouped;
          int off = 0;
          for (int i = 0; i < k; ++i) {
            std::vector<Perm> block(rho.begin() + off, rho.begin() + off + arity[i]);
            grouped.push_back(operad_compose(sig[i], block));
            off += arity[i];
          }
          Perm rhs = operad_compose(tau, grouped);
          CHECK(lhs == rhs);
          std::size_t i = 0;
          while (i < idx.size()) {
            if (++idx[i] < pools[i].size()) break;
            idx[i++] = 0;
          }
          if (i == idx.size()) break;
        }
        int j = 0;
        while (j < k && arity[j] == 2) arity[j++] = 1;
        if (j == k) break;
        arity[j] = 2;
      }
    }
  }
}

TEST_CASE("operad equivariance laws") {
  // (tau o pi) * (sig_{pi(1)},...,sig_{pi(k)}) = (tau * sig) o (pi * ids)
  for (const auto& tau : Perm::all(2)) {
    for (const auto& pi : Perm::all(2)) {
      std::vector<Perm> sig{Perm::swap2(), Perm::identity(1)};
      std::vector<Perm> permuted;
      std::vector<Perm> ids;
      for (int i = 1; i <= 2; ++i) {
        permuted.push_back(sig[pi(i) - 1]);
        ids.push_back(Perm::identity(sig[pi(i) - 1].n()));
      }
      Perm lhs = operad_compose(compose(tau, pi), permuted);
      Perm rhs = compose(operad_compose(tau, sig), operad_compose(pi, ids));
      CHECK(lhs == rhs);
    }
  }
  // tau * (sig_i o rho_i) = (tau * sig) o (id * rho)
  for (const auto& tau : Perm::all(2)) {
    std::vector<Perm> sig{Perm::swap2(), Perm::identity(2)};
    std::vector<Perm> rho{Perm::identity(2), Perm::swap2()};
    std::vector<Perm> composed;
    for (int i = 0; i < 2; ++i) composed.push_back(compose(sig[i], rho[i]));
    Perm lhs = operad_compose(tau, composed);
    Perm rhs = compose(operad_compose(tau, sig), operad_compose(Perm::identity(2), rho));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("FinSet and FinMap structural validation") {
  CHECK_THROWS_AS(FinSet("dup", {"a", "a"}), structural_error);
  FinSet a = fs("A", {"x"});
  FinSet b = fs("B", {"y"});
  CHECK_THROWS_AS(FinMap(a, b, {}), structural_error);                    // not total
  CHECK_THROWS_AS(FinMap(a, b, {{"x", "nope"}}), structural_error);       // image outside
  CHECK_THROWS_AS(pullback(FinMap::identity(a), FinMap::identity(b)), structural_error);
}
