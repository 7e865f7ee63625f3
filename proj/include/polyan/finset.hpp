#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace polyan {

// Raised when inputs violate a structural precondition (mismatched
// (co)domains, dangling labels, non-commuting squares, ...).
struct structural_error : std::runtime_error {
  explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// Escapes the separator characters used when composing labels, so that
// tuple labels built from arbitrary component labels stay injective.
std::string escape_label(const std::string& s);
std::string pair_label(const std::string& a, const std::string& b);
std::string tuple_label(const std::vector<std::string>& parts);

// A finite set: an ordered list of pairwise distinct labels.
// Element order is the construction order and is part of the value
// (golden tests rely on it); equality ignores `id`.
class FinSet {
 public:
  FinSet() = default;
  FinSet(std::string id, std::vector<std::string> elems);

  const std::string& id() const { return id_; }
  const std::vector<std::string>& elems() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(const std::string& e) const { return index_.count(e) != 0; }
  std::size_t index_of(const std::string& e) const;
  const std::string& at(std::size_t i) const { return elems_.at(i); }

  friend bool operator==(const FinSet& a, const FinSet& b) { return a.elems_ == b.elems_; }
  friend bool operator!=(const FinSet& a, const FinSet& b) { return !(a == b); }

 private:
  std::string id_;
  std::vector<std::string> elems_;
  std::unordered_map<std::string, std::size_t> index_;
};

// A total function between finite sets, given by its table.
class FinMap {
 public:
  FinMap() = default;
  FinMap(FinSet dom, FinSet cod, std::map<std::string, std::string> table);

  static FinMap identity(const FinSet& s);
  static FinMap constant(const FinSet& dom, const FinSet& cod, const std::string& value);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const std::map<std::string, std::string>& table() const { return table_; }
  const std::string& operator()(const std::string& e) const;

  bool is_injective() const;
  bool is_surjective() const;
  bool is_bijective() const { return is_injective() && is_surjective(); }
  std::vector<std::string> preimage(const std::string& c) const;

  friend bool operator==(const FinMap& a, const FinMap& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.table_ == b.table_;
  }
  friend bool operator!=(const FinMap& a, const FinMap& b) { return !(a == b); }

 private:
  FinSet dom_, cod_;
  std::map<std::string, std::string> table_;
};

// g after f.
FinMap compose(const FinMap& g, const FinMap& f);

// A permutation of (n] = {1,...,n}; images[i-1] is the image of i.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::vector<int> images);

  static Perm identity(int n);
  static std::vector<Perm> all(int n);
  static Perm swap2();  // the transposition in S_2

  int n() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const;
  Perm inverse() const;
  std::string to_string() const;

  friend bool operator==(const Perm& a, const Perm& b) { return a.img_ == b.img_; }
  friend bool operator!=(const Perm& a, const Perm& b) { return !(a == b); }
  friend bool operator<(const Perm& a, const Perm& b) { return a.img_ < b.img_; }

 private:
  std::vector<int> img_;
};

// Function composition: (sigma*tau)(i) = sigma(tau(i)).
Perm compose(const Perm& sigma, const Perm& tau);

// The block composite tau * (sigma_1,...,sigma_k) of the operad of
// symmetries: rearranges whole blocks by tau and permutes within block m
// by sigma_m.  Output slot r is occupied by input block tau^{-1}(r).
Perm operad_compose(const Perm& tau, const std::vector<Perm>& sigmas);

// Builds the permutation on sum(block_sizes) positions that sends
// output-block j (sizes in output order are block_sizes[assign[j]-1]) to
// input-block assign[j], applying inner[j] inside.  Shared low-level
// helper for operad_compose and the amalgamated tensor of morphisms.
Perm assemble_block_perm(const std::vector<int>& block_sizes, const std::vector<int>& assign,
                         const std::vector<Perm>& inner);

struct PullbackResult {
  FinSet object;
  FinMap to_left;   // projection to dom(f)
  FinMap to_right;  // projection to dom(g)
};

// Canonical pullback {(a,b) : f(a)=g(b)}, lexicographic in (left, right).
PullbackResult pullback(const FinMap& f, const FinMap& g);

// Binary product as the pullback over the terminal set.
PullbackResult product(const FinSet& a, const FinSet& b);

FinSet terminal_set();
FinSet initial_set();

struct CoproductResult {
  FinSet object;
  std::vector<FinMap> injections;
};

// Tagged disjoint union; blocks appear in argument order.
CoproductResult coproduct(const std::vector<FinSet>& xs);

struct QuotientResult {
  FinSet classes;   // one element per class, labelled by the minimal member
  FinMap projection;
};

// Quotient by the equivalence generated by `rel`; representatives are
// order-minimal members.
QuotientResult quotient(const FinSet& s, const std::vector<std::pair<std::string, std::string>>& rel);

// A commuting square
//        corner --q1--> x
//          |q2          |f
//          v            v
//          y   --g--->  c
struct SquareOfSets {
  FinMap q1;  // corner -> x
  FinMap q2;  // corner -> y
  FinMap f;   // x -> c
  FinMap g;   // y -> c
};

void validate_square(const SquareOfSets& sq);

// True iff every (x,y) agreeing under the cospan is hit by some corner
// element.  Throws on a non-commuting square.
bool is_weak_pullback(const SquareOfSets& sq);

// True iff additionally the corner element is unique for every (x,y).
bool is_strict_pullback(const SquareOfSets& sq);

// All functions dom -> cod (lexicographic order); exhaustive helper for
// universal-property tests and hom-set enumerations.
std::vector<FinMap> all_maps(const FinSet& dom, const FinSet& cod);

}  // namespace polyan
