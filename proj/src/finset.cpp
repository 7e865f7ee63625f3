#include "polyan/finset.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace polyan {

std::string escape_label(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == ',' || c == '(' || c == ')' || c == '|' || c == ';') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string pair_label(const std::string& a, const std::string& b) {
  return "(" + escape_label(a) + "," + escape_label(b) + ")";
}

std::string tuple_label(const std::vector<std::string>& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += escape_label(parts[i]);
  }
  out += ")";
  return out;
}

FinSet::FinSet(std::string id, std::vector<std::string> elems)
    : id_(std::move(id)), elems_(std::move(elems)) {
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (!index_.emplace(elems_[i], i).second)
      throw structural_error("FinSet '" + id_ + "': duplicate label '" + elems_[i] + "'");
  }
}

std::size_t FinSet::index_of(const std::string& e) const {
  auto it = index_.find(e);
  if (it == index_.end()) throw structural_error("FinSet '" + id_ + "': no element '" + e + "'");
  return it->second;
}

FinMap::FinMap(FinSet dom, FinSet cod, std::map<std::string, std::string> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  for (const auto& e : dom_.elems()) {
    auto it = table_.find(e);
    if (it == table_.end()) throw structural_error("FinMap: no image for '" + e + "'");
    if (!cod_.contains(it->second))
      throw structural_error("FinMap: image '" + it->second + "' of '" + e + "' not in codomain");
  }
  if (table_.size() != dom_.size()) {
    for (const auto& [k, v] : table_)
      if (!dom_.contains(k)) throw structural_error("FinMap: spurious table key '" + k + "'");
  }
}

FinMap FinMap::identity(const FinSet& s) {
  std::map<std::string, std::string> t;
  for (const auto& e : s.elems()) t[e] = e;
  return FinMap(s, s, std::move(t));
}

FinMap FinMap::constant(const FinSet& dom, const FinSet& cod, const std::string& value) {
  std::map<std::string, std::string> t;
  for (const auto& e : dom.elems()) t[e] = value;
  return FinMap(dom, cod, std::move(t));
}

const std::string& FinMap::operator()(const std::string& e) const {
  auto it = table_.find(e);
  if (it == table_.end()) throw structural_error("FinMap: '" + e + "' not in domain");
  return it->second;
}

bool FinMap::is_injective() const {
  std::set<std::string> seen;
  for (const auto& e : dom_.elems())
    if (!seen.insert((*this)(e)).second) return false;
  return true;
}

bool FinMap::is_surjective() const {
  std::set<std::string> seen;
  for (const auto& e : dom_.elems()) seen.insert((*this)(e));
  return seen.size() == cod_.size();
}

std::vector<std::string> FinMap::preimage(const std::string& c) const {
  std::vector<std::string> out;
  for (const auto& e : dom_.elems())
    if ((*this)(e) == c) out.push_back(e);
  return out;
}

FinMap compose(const FinMap& g, const FinMap& f) {
  if (f.cod() != g.dom()) throw structural_error("compose: cod(f) != dom(g)");
  std::map<std::string, std::string> t;
  for (const auto& e : f.dom().elems()) t[e] = g(f(e));
  return FinMap(f.dom(), g.cod(), std::move(t));
}

Perm::Perm(std::vector<int> images) : img_(std::move(images)) {
  std::vector<bool> seen(img_.size(), false);
  for (int v : img_) {
    if (v < 1 || v > static_cast<int>(img_.size()) || seen[v - 1])
      throw structural_error("Perm: images are not a bijection on {1..n}");
    seen[v - 1] = true;
  }
}

Perm Perm::identity(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  return Perm(std::move(img));
}

std::vector<Perm> Perm::all(int n) {
  std::vector<int> img(n);
  std::iota(img.begin(), img.end(), 1);
  std::vector<Perm> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

Perm Perm::swap2() { return Perm({2, 1}); }

int Perm::operator()(int i) const {
  if (i < 1 || i > n()) throw structural_error("Perm: argument out of range");
  return img_[i - 1];
}

Perm Perm::inverse() const {
  std::vector<int> inv(img_.size());
  for (int i = 1; i <= n(); ++i) inv[img_[i - 1] - 1] = i;
  return Perm(std::move(inv));
}

std::string Perm::to_string() const {
  std::string s = "[";
  for (int i = 0; i < n(); ++i) {
    if (i) s += ",";
    s += std::to_string(img_[i]);
  }
  return s + "]";
}

Perm compose(const Perm& sigma, const Perm& tau) {
  if (sigma.n() != tau.n()) throw structural_error("Perm compose: arity mismatch");
  std::vector<int> img(sigma.n());
  for (int i = 1; i <= sigma.n(); ++i) img[i - 1] = sigma(tau(i));
  return Perm(std::move(img));
}

Perm assemble_block_perm(const std::vector<int>& block_sizes, const std::vector<int>& assign,
                         const std::vector<Perm>& inner) {
  const int k = static_cast<int>(block_sizes.size());
  if (static_cast<int>(assign.size()) != k || static_cast<int>(inner.size()) != k)
    throw structural_error("assemble_block_perm: length mismatch");
  std::vector<int> in_offset(k + 1, 0);
  for (int i = 0; i < k; ++i) in_offset[i + 1] = in_offset[i] + block_sizes[i];
  const int total = in_offset[k];
  std::vector<int> img(total, 0);
  int out_pos = 0;
  for (int j = 0; j < k; ++j) {
    const int src = assign[j] - 1;
    if (src < 0 || src >= k) throw structural_error("assemble_block_perm: bad block index");
    if (inner[j].n() != block_sizes[src])
      throw structural_error("assemble_block_perm: inner arity mismatch");
    for (int m = 1; m <= block_sizes[src]; ++m) {
      img[out_pos + m - 1] = in_offset[src] + inner[j](m);
    }
    out_pos += block_sizes[src];
  }
  return Perm(std::move(img));
}

Perm operad_compose(const Perm& tau, const std::vector<Perm>& sigmas) {
  const int k = tau.n();
  if (static_cast<int>(sigmas.size()) != k)
    throw structural_error("operad_compose: need one inner permutation per block");
  // Input position (block m0, offset m1) goes to output block tau(m0),
  // offset sigma_{m0}(m1).  Built as a map on input positions.
  std::vector<int> sizes(k);
  for (int i = 0; i < k; ++i) sizes[i] = sigmas[i].n();
  std::vector<int> in_offset(k + 1, 0);
  for (int i = 0; i < k; ++i) in_offset[i + 1] = in_offset[i] + sizes[i];
  const Perm tinv = tau.inverse();
  // out_offset[r-1]: where the output block at rank r starts; that rank is
  // occupied by input block tau^{-1}(r).
  std::vector<int> out_offset(k + 1, 0);
  for (int r = 1; r <= k; ++r) out_offset[r] = out_offset[r - 1] + sizes[tinv(r) - 1];
  std::vector<int> img(in_offset[k], 0);
  for (int m0 = 1; m0 <= k; ++m0) {
    for (int m1 = 1; m1 <= sizes[m0 - 1]; ++m1) {
      img[in_offset[m0 - 1] + m1 - 1] = out_offset[tau(m0) - 1] + sigmas[m0 - 1](m1);
    }
  }
  return Perm(std::move(img));
}

PullbackResult pullback(const FinMap& f, const FinMap& g) {
  if (f.cod() != g.cod()) throw structural_error("pullback: codomain mismatch");
  std::vector<std::string> elems;
  std::map<std::string, std::string> left, right;
  for (const auto& a : f.dom().elems()) {
    for (const auto& b : g.dom().elems()) {
      if (f(a) == g(b)) {
        std::string l = pair_label(a, b);
        elems.push_back(l);
        left[l] = a;
        right[l] = b;
      }
    }
  }
  FinSet obj("pb", std::move(elems));
  return PullbackResult{obj, FinMap(obj, f.dom(), std::move(left)),
                        FinMap(obj, g.dom(), std::move(right))};
}

FinSet terminal_set() { return FinSet("1", {"*"}); }
FinSet initial_set() { return FinSet("0", {}); }

PullbackResult product(const FinSet& a, const FinSet& b) {
  FinSet one = terminal_set();
  return pullback(FinMap::constant(a, one, "*"), FinMap::constant(b, one, "*"));
}

CoproductResult coproduct(const std::vector<FinSet>& xs) {
  std::vector<std::string> elems;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (const auto& e : xs[i].elems()) elems.push_back(std::to_string(i) + ":" + e);
  FinSet obj("coprod", std::move(elems));
  std::vector<FinMap> injections;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::map<std::string, std::string> t;
    for (const auto& e : xs[i].elems()) t[e] = std::to_string(i) + ":" + e;
    injections.emplace_back(xs[i], obj, std::move(t));
  }
  return CoproductResult{obj, std::move(injections)};
}

QuotientResult quotient(const FinSet& s,
                        const std::vector<std::pair<std::string, std::string>>& rel) {
  for (const auto& [a, b] : rel)
    if (!s.contains(a) || !s.contains(b))
      throw structural_error("quotient: relation mentions labels outside the set");
  // Reachability closure over the undirected relation graph.
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : rel) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::map<std::string, std::string> rep;  // element -> minimal member of its class
  for (const auto& e : s.elems()) {
    if (rep.count(e)) continue;
    std::vector<std::string> stack{e}, members;
    std::set<std::string> seen{e};
    while (!stack.empty()) {
      std::string cur = stack.back();
      stack.pop_back();
      members.push_back(cur);
      for (const auto& nb : adj[cur])
        if (seen.insert(nb).second) stack.push_back(nb);
    }
    std::string least = members.front();
    for (const auto& m : members)
      if (s.index_of(m) < s.index_of(least)) least = m;
    for (const auto& m : members) rep[m] = least;
  }
  std::vector<std::string> classes;
  std::set<std::string> emitted;
  for (const auto& e : s.elems())
    if (emitted.insert(rep[e]).second) classes.push_back(rep[e]);
  FinSet obj("quot", std::move(classes));
  std::map<std::string, std::string> proj;
  for (const auto& e : s.elems()) proj[e] = rep[e];
  return QuotientResult{obj, FinMap(s, obj, std::move(proj))};
}

void validate_square(const SquareOfSets& sq) {
  if (sq.q1.dom() != sq.q2.dom()) throw structural_error("square: corner mismatch");
  if (sq.f.dom() != sq.q1.cod() || sq.g.dom() != sq.q2.cod() || sq.f.cod() != sq.g.cod())
    throw structural_error("square: sides do not match up");
  for (const auto& p : sq.q1.dom().elems())
    if (sq.f(sq.q1(p)) != sq.g(sq.q2(p))) throw structural_error("square does not commute");
}

static std::size_t filler_count(const SquareOfSets& sq, const std::string& x,
                                const std::string& y) {
  std::size_t n = 0;
  for (const auto& p : sq.q1.dom().elems())
    if (sq.q1(p) == x && sq.q2(p) == y) ++n;
  return n;
}

bool is_weak_pullback(const SquareOfSets& sq) {
  validate_square(sq);
  for (const auto& x : sq.f.dom().elems())
    for (const auto& y : sq.g.dom().elems())
      if (sq.f(x) == sq.g(y) && filler_count(sq, x, y) == 0) return false;
  return true;
}

bool is_strict_pullback(const SquareOfSets& sq) {
  validate_square(sq);
  for (const auto& x : sq.f.dom().elems())
    for (const auto& y : sq.g.dom().elems())
      if (sq.f(x) == sq.g(y) && filler_count(sq, x, y) != 1) return false;
  // No corner element may sit over a non-agreeing pair; commutation already
  // guarantees that, so strictness reduces to exactly-one fillers.
  return true;
}

std::vector<FinMap> all_maps(const FinSet& dom, const FinSet& cod) {
  std::vector<FinMap> out;
  if (dom.size() == 0) {
    out.push_back(FinMap(dom, cod, {}));
    return out;
  }
  if (cod.size() == 0) return out;  // no total map from nonempty to empty
  std::vector<std::size_t> choice(dom.size(), 0);
  while (true) {
    std::map<std::string, std::string> t;
    for (std::size_t i = 0; i < dom.size(); ++i) t[dom.at(i)] = cod.at(choice[i]);
    out.emplace_back(dom, cod, std::move(t));
    std::size_t i = 0;
    while (i < choice.size()) {
      if (++choice[i] < cod.size()) break;
      choice[i++] = 0;
    }
    if (i == choice.size()) break;
  }
  return out;
}

}  // namespace polyan
