#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "polyan/finset.hpp"

namespace polyan {

struct Opetope;
using OpPtr = std::shared_ptr<const Opetope>;

// A pasting diagram of n-cells.  A slot is the identity pasting on an
// (n-1)-cell; a node is an n-cell with one kid per cell of its source
// pasting (in canonical preorder).
struct Pasting {
  bool slot = true;
  OpPtr boundary;             // slot: the (n-1)-cell it sits on
  OpPtr cell;                 // node: the n-cell
  std::vector<Pasting> kids;  // node: continuations per source cell
};

// An opetope of dimension n: a target (n-1)-opetope together with a
// source pasting of (n-1)-opetopes whose global boundary matches.
struct Opetope {
  int dim = 0;
  OpPtr target;     // null at dimension 0
  Pasting source;   // meaningful for dim >= 1
  std::string key;  // canonical serialization
  int size = 0;     // enumeration weight (see terminal_cells)
};

std::string pasting_key(const Pasting& p);
bool same_pasting(const Pasting& a, const Pasting& b);

OpPtr point();
OpPtr arrow();

// Cells of a pasting in canonical preorder.
std::vector<OpPtr> cells_of(const Pasting& p);
int slot_count(const Pasting& p);

// Structure maps of the free monoid on cells: global target and global
// source of a pasting.
OpPtr pasting_target(const Pasting& p);    // gamma-bar
Pasting pasting_source(const Pasting& p);  // delta-bar, one level down
Pasting eta_pasting(const OpPtr& cell);    // single-cell pasting

// Builds the (validated) opetope with the given source pasting; the
// target is forced to be the cell (pasting_target, pasting_source).
OpPtr opetope_from_source(int dim, const Pasting& source);

// All opetopes of dimension `dim` whose weight is at most `size_bound`.
// The weight of a source pasting counts one per node plus the sizes of
// the node cells and of the slot boundary cells.
std::vector<OpPtr> terminal_cells(int dim, int size_bound);

int pasting_weight(const Pasting& p);

// ---------------------------------------------------- general opetopic sets

// A finite truncation of an opetopic set with named cells.  delta values
// are pastings over the names of the previous level.
struct GPasting {
  bool slot = true;
  std::string boundary;  // slot: name of an (n-1)-cell
  std::string cell;      // node: name of an n-cell
  std::vector<GPasting> kids;
};

struct OpetopicLevel {
  std::vector<std::string> cells;
  std::map<std::string, std::string> gamma;  // cell -> lower cell
  std::map<std::string, GPasting> delta;     // cell -> pasting over lower level
};

// Level 0 lists bare cell names; levels >= 1 carry gamma/delta.
struct OpetopicSetTruncation {
  std::vector<OpetopicLevel> levels;
};

struct OpetopicCheckReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Verifies the four compatibility equations on every cell and every
// materialized pasting of the truncation.
OpetopicCheckReport opetopic_set_check(const OpetopicSetTruncation& t);

// The terminal truncation as named cells (keys as names), for cross
// checks against the generic machinery.
OpetopicSetTruncation terminal_truncation(int dims, int size_bound);

// ------------------------------------------------------------------- tower

struct TowerLevel {
  int dim = 0;
  std::vector<OpPtr> cells;
};

// Generic construction: pastings are produced by the staged free-monoid
// chain A^0 = I, A^{i+1} = I + A (x) A^i (depth-limited), then paired
// with their forced targets.  Agrees with terminal_cells on every cell.
std::vector<TowerLevel> iterate_tower(int levels, int size_bound, int stage_depth);

// DOT rendering of a descriptor (target chain + source tree).
std::string opetope_to_dot(const OpPtr& cell);

}  // namespace polyan
