#include "polyan/opetopes.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace polyan {

std::string pasting_key(const Pasting& p) {
  if (p.slot) return "*" + p.boundary->key;
  std::string out = "(" + p.cell->key;
  for (const auto& k : p.kids) out += pasting_key(k);
  return out + ")";
}

bool same_pasting(const Pasting& a, const Pasting& b) { return pasting_key(a) == pasting_key(b); }

namespace {

// Opetopes are interned by key so that pointer identity is usable.
std::map<std::string, OpPtr>& registry() {
  static std::map<std::string, OpPtr> reg;
  return reg;
}

OpPtr intern(Opetope op) {
  auto& reg = registry();
  auto it = reg.find(op.key);
  if (it != reg.end()) return it->second;
  OpPtr ptr = std::make_shared<Opetope>(std::move(op));
  reg.emplace(ptr->key, ptr);
  return ptr;
}

}  // namespace

OpPtr point() {
  Opetope op;
  op.dim = 0;
  op.key = "pt";
  op.size = 0;
  return intern(std::move(op));
}

OpPtr arrow() {
  Opetope op;
  op.dim = 1;
  op.target = point();
  op.source = Pasting{false, nullptr, point(), {}};
  op.key = "ar";
  op.size = 0;
  return intern(std::move(op));
}

std::vector<OpPtr> cells_of(const Pasting& p) {
  std::vector<OpPtr> out;
  std::function<void(const Pasting&)> rec = [&](const Pasting& q) {
    if (q.slot) return;
    out.push_back(q.cell);
    for (const auto& k : q.kids) rec(k);
  };
  rec(p);
  return out;
}

int slot_count(const Pasting& p) {
  if (p.slot) return 1;
  int n = 0;
  for (const auto& k : p.kids) n += slot_count(k);
  return n;
}

OpPtr pasting_target(const Pasting& p) {
  if (p.slot) return p.boundary;
  return p.cell->target;
}

Pasting eta_pasting(const OpPtr& cell) {
  Pasting out;
  out.slot = false;
  out.cell = cell;
  if (cell->dim >= 1) {
    for (const auto& c : cells_of(cell->source)) out.kids.push_back(Pasting{true, c, nullptr, {}});
  }
  return out;
}

namespace {

// Replaces the slots of `r` (in preorder) by the continuations.
Pasting plug(const Pasting& r, const std::vector<Pasting>& conts, std::size_t& cursor) {
  if (r.slot) {
    if (cursor >= conts.size()) throw structural_error("plug: not enough continuations");
    return conts[cursor++];
  }
  Pasting out;
  out.slot = false;
  out.cell = r.cell;
  for (const auto& k : r.kids) out.kids.push_back(plug(k, conts, cursor));
  return out;
}

// shape: a pasting one level down; env: one replacement pasting per cell
// of the shape, in preorder.
Pasting substitute(const Pasting& shape, const std::vector<Pasting>& env, std::size_t& cursor) {
  if (shape.slot) return shape;
  if (cursor >= env.size()) throw structural_error("substitute: missing replacement");
  Pasting r = env[cursor++];
  std::vector<Pasting> conts;
  for (const auto& k : shape.kids) conts.push_back(substitute(k, env, cursor));
  std::size_t sc = 0;
  Pasting out = plug(r, conts, sc);
  if (sc != conts.size()) throw structural_error("substitute: slot/continuation mismatch");
  return out;
}

}  // namespace

Pasting pasting_source(const Pasting& p) {
  if (p.slot) {
    // delta-bar of the identity pasting is the single-cell pasting eta(c)
    return eta_pasting(p.boundary);
  }
  if (p.cell->dim == 0) throw structural_error("pasting_source: no source below dimension 1");
  std::vector<Pasting> env;
  for (const auto& k : p.kids) env.push_back(pasting_source(k));
  std::size_t cursor = 0;
  Pasting out = substitute(p.cell->source, env, cursor);
  if (cursor != env.size()) throw structural_error("pasting_source: replacement mismatch");
  return out;
}

int pasting_weight(const Pasting& p) {
  if (p.slot) return p.boundary->size;
  int w = 1 + p.cell->size;
  for (const auto& k : p.kids) w += pasting_weight(k);
  return w;
}

OpPtr opetope_from_source(int dim, const Pasting& source) {
  if (dim < 2) throw structural_error("opetope_from_source: dimensions 0 and 1 are fixed");
  // the target is forced: the (dim-1)-cell whose target is gamma-bar of
  // the source and whose source is delta-bar of the source
  OpPtr gto = pasting_target(source);
  Pasting gsrc = pasting_source(source);
  OpPtr target;
  if (dim == 2) {
    target = arrow();
  } else {
    target = opetope_from_source(dim - 1, gsrc);
    if (target->target->key != gto->key)
      throw structural_error("opetope_from_source: boundary equations fail");
  }
  Opetope op;
  op.dim = dim;
  op.target = target;
  op.source = source;
  // the weight dominates the sizes of the target and of every source
  // constituent, so bounded enumerations are closed under both
  op.size = std::max(pasting_weight(source), target->size);
  op.key = "[" + target->key + "<=" + pasting_key(source) + "]";
  return intern(std::move(op));
}

namespace {

// All pastings of `cells` (opetopes of one dimension) with global target
// `tgt` and weight <= budget.
std::vector<Pasting> enumerate_pastings(const std::vector<OpPtr>& cells, const OpPtr& tgt,
                                        int budget) {
  std::vector<Pasting> out;
  if (tgt->size <= budget) out.push_back(Pasting{true, tgt, nullptr, {}});
  for (const auto& x : cells) {
    if (x->target->key != tgt->key) continue;
    int base_cost = 1 + x->size;
    if (base_cost > budget) continue;
    std::vector<OpPtr> shape_cells =
        x->dim >= 1 ? cells_of(x->source) : std::vector<OpPtr>{};
    // kids: one pasting per shape cell, targeted at that cell
    std::vector<std::vector<Pasting>> cands;
    bool dead = false;
    for (const auto& y : shape_cells) {
      auto c = enumerate_pastings(cells, y, budget - base_cost);
      if (c.empty()) dead = true;
      cands.push_back(std::move(c));
    }
    if (dead) continue;
    std::vector<std::size_t> idx(shape_cells.size(), 0);
    while (true) {
      Pasting node{false, nullptr, x, {}};
      int w = base_cost;
      for (std::size_t i = 0; i < shape_cells.size(); ++i) {
        node.kids.push_back(cands[i][idx[i]]);
        w += pasting_weight(cands[i][idx[i]]);
      }
      if (w <= budget) out.push_back(node);
      if (shape_cells.empty()) break;
      std::size_t i = 0;
      while (i < idx.size()) {
        if (++idx[i] < cands[i].size()) break;
        idx[i++] = 0;
      }
      if (i == idx.size()) break;
    }
  }
  return out;
}

}  // namespace

std::vector<OpPtr> terminal_cells(int dim, int size_bound) {
  if (dim < 0) throw structural_error("terminal_cells: negative dimension");
  if (dim == 0) return {point()};
  if (dim == 1) return {arrow()};
  std::vector<OpPtr> lower = terminal_cells(dim - 1, size_bound);
  std::vector<OpPtr> lower2 = terminal_cells(dim - 2, size_bound);
  std::vector<OpPtr> out;
  std::set<std::string> seen;
  for (const auto& tgt : lower2) {
    for (const auto& p : enumerate_pastings(lower, tgt, size_bound)) {
      OpPtr op = opetope_from_source(dim, p);
      if (op->size <= size_bound && seen.insert(op->key).second) out.push_back(op);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const OpPtr& a, const OpPtr& b) {
              return a->size != b->size ? a->size < b->size : a->key < b->key;
            });
  return out;
}

// ---------------------------------------------------- general opetopic sets

namespace {

std::vector<std::string> gcells_of(const GPasting& p) {
  std::vector<std::string> out;
  std::function<void(const GPasting&)> rec = [&](const GPasting& q) {
    if (q.slot) return;
    out.push_back(q.cell);
    for (const auto& k : q.kids) rec(k);
  };
  rec(p);
  return out;
}

std::string gkey(const GPasting& p) {
  if (p.slot) return "*" + p.boundary;
  std::string out = "(" + p.cell;
  for (const auto& k : p.kids) out += gkey(k);
  return out + ")";
}

GPasting gplug(const GPasting& r, const std::vector<GPasting>& conts, std::size_t& cursor) {
  if (r.slot) {
    if (cursor >= conts.size()) throw structural_error("gplug: not enough continuations");
    return conts[cursor++];
  }
  GPasting out;
  out.slot = false;
  out.cell = r.cell;
  for (const auto& k : r.kids) out.kids.push_back(gplug(k, conts, cursor));
  return out;
}

GPasting gsubstitute(const GPasting& shape, const std::vector<GPasting>& env,
                     std::size_t& cursor) {
  if (shape.slot) return shape;
  if (cursor >= env.size()) throw structural_error("gsubstitute: missing replacement");
  GPasting r = env[cursor++];
  std::vector<GPasting> conts;
  for (const auto& k : shape.kids) conts.push_back(gsubstitute(k, env, cursor));
  std::size_t sc = 0;
  GPasting out = gplug(r, conts, sc);
  if (sc != conts.size()) throw structural_error("gsubstitute: slot mismatch");
  return out;
}

struct GenericMaps {
  const OpetopicSetTruncation* t;
  // gamma-bar at level n (pastings of level-n cells -> level n-1 cell)
  std::string gtarget(int n, const GPasting& p) const {
    if (p.slot) return p.boundary;
    return t->levels[n].gamma.at(p.cell);
  }
  GPasting geta(int n, const std::string& cell) const {
    // single-cell pasting of a level-n cell, with a slot per source cell
    GPasting out;
    out.slot = false;
    out.cell = cell;
    if (n >= 1) {
      for (const auto& c : gcells_of(t->levels[n].delta.at(cell)))
        out.kids.push_back(GPasting{true, c, "", {}});
    }
    return out;
  }
  GPasting gsource(int n, const GPasting& p) const {
    if (p.slot) return geta(n - 1, p.boundary);
    std::vector<GPasting> env;
    for (const auto& k : p.kids) env.push_back(gsource(n, k));
    std::size_t cursor = 0;
    return gsubstitute(t->levels[n].delta.at(p.cell), env, cursor);
  }
};

}  // namespace

OpetopicCheckReport opetopic_set_check(const OpetopicSetTruncation& t) {
  OpetopicCheckReport report;
  GenericMaps maps{&t};
  for (std::size_t n = 2; n < t.levels.size(); ++n) {
    const OpetopicLevel& lvl = t.levels[n];
    for (const auto& x : lvl.cells) {
      auto gi = lvl.gamma.find(x);
      auto di = lvl.delta.find(x);
      if (gi == lvl.gamma.end() || di == lvl.delta.end()) {
        report.ok = false;
        report.violations.push_back("missing structure maps at " + x);
        continue;
      }
      const std::string& gx = gi->second;
      const GPasting& dx = di->second;
      // gamma o gamma = gamma-bar o delta
      std::string lhs1 = t.levels[n - 1].gamma.at(gx);
      std::string rhs1 = maps.gtarget(static_cast<int>(n) - 1, dx);
      if (lhs1 != rhs1) {
        report.ok = false;
        report.violations.push_back("gamma.gamma != gammabar.delta at " + x);
      }
      // delta o gamma = delta-bar o delta
      if (n >= 2) {
        GPasting lhs2 = t.levels[n - 1].delta.at(gx);
        GPasting rhs2 = maps.gsource(static_cast<int>(n) - 1, dx);
        if (gkey(lhs2) != gkey(rhs2)) {
          report.ok = false;
          report.violations.push_back("delta.gamma != deltabar.delta at " + x);
        }
      }
    }
    // the pasting-level equations on materialized pastings: eta's of this
    // level's cells plus the delta values (and subtrees) from one level up
    std::vector<GPasting> pool;
    for (const auto& x : lvl.cells) pool.push_back(maps.geta(static_cast<int>(n), x));
    if (n + 1 < t.levels.size()) {
      std::function<void(const GPasting&)> collect = [&](const GPasting& p) {
        pool.push_back(p);
        if (!p.slot)
          for (const auto& k : p.kids) collect(k);
      };
      for (const auto& [cell, dp] : t.levels[n + 1].delta) collect(dp);
    }
    for (const auto& p : pool) {
      // gamma o gammabar = gammabar o deltabar and the delta version
      std::string gp = maps.gtarget(static_cast<int>(n), p);
      GPasting dp = maps.gsource(static_cast<int>(n), p);
      std::string lhs = t.levels[n - 1].gamma.at(gp);
      std::string rhs = maps.gtarget(static_cast<int>(n) - 1, dp);
      if (lhs != rhs) {
        report.ok = false;
        report.violations.push_back("pasting gamma equation fails at " + gkey(p));
      }
      if (n >= 2) {
        GPasting l2 = t.levels[n - 1].delta.at(gp);
        GPasting r2 = maps.gsource(static_cast<int>(n) - 1, dp);
        if (gkey(l2) != gkey(r2)) {
          report.ok = false;
          report.violations.push_back("pasting delta equation fails at " + gkey(p));
        }
      }
    }
  }
  return report;
}

namespace {

GPasting to_gpasting(const Pasting& p) {
  GPasting out;
  out.slot = p.slot;
  if (p.slot) {
    out.boundary = p.boundary->key;
  } else {
    out.cell = p.cell->key;
    for (const auto& k : p.kids) out.kids.push_back(to_gpasting(k));
  }
  return out;
}

}  // namespace

OpetopicSetTruncation terminal_truncation(int dims, int size_bound) {
  OpetopicSetTruncation t;
  for (int n = 0; n <= dims; ++n) {
    OpetopicLevel lvl;
    for (const auto& c : terminal_cells(n, size_bound)) {
      lvl.cells.push_back(c->key);
      if (n >= 1) {
        lvl.gamma[c->key] = c->target->key;
        lvl.delta[c->key] = to_gpasting(c->source);
      }
    }
    t.levels.push_back(std::move(lvl));
  }
  return t;
}

std::vector<TowerLevel> iterate_tower(int levels, int size_bound, int stage_depth) {
  if (levels < 1) throw structural_error("iterate_tower: need at least one level");
  std::vector<TowerLevel> out;
  out.push_back(TowerLevel{0, {point()}});
  if (levels >= 1) out.push_back(TowerLevel{1, {arrow()}});
  for (int n = 2; n <= levels; ++n) {
    const auto& cells = out[n - 1].cells;
    const auto& lower = out[n - 2].cells;
    // free-monoid chain: stage 0 holds the identities, stage i+1 adds one
    // more layer of cells grafted onto stage-i pastings
    std::map<std::string, Pasting> stage;
    for (const auto& c : lower) {
      Pasting id{true, c, nullptr, {}};
      stage.emplace(pasting_key(id), id);
    }
    for (int d = 0; d < stage_depth; ++d) {
      std::map<std::string, Pasting> next = stage;
      for (const auto& x : cells) {
        int base_cost = 1 + x->size;
        if (base_cost > size_bound) continue;
        std::vector<OpPtr> shape_cells =
            x->dim >= 1 ? cells_of(x->source) : std::vector<OpPtr>{};
        std::vector<std::vector<const Pasting*>> cands;
        bool dead = false;
        for (const auto& y : shape_cells) {
          std::vector<const Pasting*> c;
          for (const auto& [k, p] : stage)
            if (pasting_target(p)->key == y->key) c.push_back(&p);
          if (c.empty()) dead = true;
          cands.push_back(std::move(c));
        }
        if (dead) continue;
        // budget-pruned kid assembly
        std::vector<const Pasting*> chosen(shape_cells.size(), nullptr);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int budget) {
          if (budget < 0) return;
          if (i == shape_cells.size()) {
            Pasting node{false, nullptr, x, {}};
            for (const auto* p : chosen) node.kids.push_back(*p);
            next.emplace(pasting_key(node), node);
            return;
          }
          for (const auto* p : cands[i]) {
            int w = pasting_weight(*p);
            if (w > budget) continue;
            chosen[i] = p;
            rec(i + 1, budget - w);
          }
        };
        rec(0, size_bound - base_cost);
      }
      if (next.size() == stage.size()) {
        stage = std::move(next);
        break;  // stabilized within the weight bound
      }
      stage = std::move(next);
    }
    TowerLevel lvl{n, {}};
    std::set<std::string> seen;
    for (const auto& [k, p] : stage) {
      OpPtr op = opetope_from_source(n, p);
      if (op->size <= size_bound && seen.insert(op->key).second) lvl.cells.push_back(op);
    }
    std::sort(lvl.cells.begin(), lvl.cells.end(), [](const OpPtr& a, const OpPtr& b) {
      return a->size != b->size ? a->size < b->size : a->key < b->key;
    });
    out.push_back(std::move(lvl));
  }
  return out;
}

std::string opetope_to_dot(const OpPtr& cell) {
  std::ostringstream os;
  os << "digraph opetope {\n  node [shape=box];\n";
  int counter = 0;
  std::function<int(const OpPtr&)> emit_cell = [&](const OpPtr& c) -> int {
    int id = counter++;
    os << "  n" << id << " [label=\"dim " << c->dim << "\"];\n";
    if (c->dim >= 1) {
      int t = emit_cell(c->target);
      os << "  n" << id << " -> n" << t << " [label=\"target\"];\n";
      std::function<int(const Pasting&)> emit_pasting = [&](const Pasting& p) -> int {
        int pid = counter++;
        if (p.slot) {
          os << "  n" << pid << " [label=\"slot\",shape=ellipse];\n";
        } else {
          os << "  n" << pid << " [label=\"cell dim " << p.cell->dim << "\"];\n";
          for (const auto& k : p.kids) {
            int kid = emit_pasting(k);
            os << "  n" << pid << " -> n" << kid << ";\n";
          }
        }
        return pid;
      };
      int s = emit_pasting(c->source);
      os << "  n" << id << " -> n" << s << " [label=\"source\"];\n";
    }
    return id;
  };
  emit_cell(cell);
  os << "}\n";
  return os.str();
}

}  // namespace polyan
