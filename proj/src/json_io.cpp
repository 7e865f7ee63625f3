#include "polyan/json_io.hpp"

namespace polyan {

json to_json(const FinSet& s) {
  json j;
  j["id"] = s.id();
  j["elems"] = s.elems();
  return j;
}

FinSet finset_from_json(const json& j) {
  return FinSet(j.value("id", "set"), j.at("elems").get<std::vector<std::string>>());
}

json to_json(const FinMap& m) {
  json j;
  j["dom"] = to_json(m.dom());
  j["cod"] = to_json(m.cod());
  j["table"] = m.table();
  return j;
}

FinMap finmap_from_json(const json& j) {
  return FinMap(finset_from_json(j.at("dom")), finset_from_json(j.at("cod")),
                j.at("table").get<std::map<std::string, std::string>>());
}

json to_json(const Perm& p) {
  std::vector<int> img;
  for (int i = 1; i <= p.n(); ++i) img.push_back(p(i));
  return json(img);
}

Perm perm_from_json(const json& j) { return Perm(j.get<std::vector<int>>()); }

json to_json(const SymSet& s) {
  json grades = json::object(), action = json::object();
  for (const auto& [n, g] : s.grades()) {
    grades[std::to_string(n)] = to_json(g);
    json acts = json::object();
    for (const auto& e : g.elems())
      for (const auto& p : Perm::all(n))
        acts[e + "," + p.to_string()] = s.act(n, e, p);
    action[std::to_string(n)] = acts;
  }
  return json{{"grades", grades}, {"action", action}};
}

SymSet symset_from_json(const json& j) {
  std::map<int, FinSet> grades;
  for (const auto& [k, v] : j.at("grades").items()) grades.emplace(std::stoi(k), finset_from_json(v));
  std::map<int, std::map<std::string, std::map<std::string, std::string>>> action;
  if (j.contains("action")) {
    for (const auto& [k, v] : j.at("action").items()) {
      int n = std::stoi(k);
      for (const auto& [key, img] : v.items()) {
        auto comma = key.rfind(",[");
        if (comma == std::string::npos) throw structural_error("symset JSON: bad action key");
        action[n][key.substr(0, comma)][key.substr(comma + 1)] = img.get<std::string>();
      }
    }
  } else {
    for (const auto& [n, g] : grades)
      for (const auto& e : g.elems())
        for (const auto& p : Perm::all(n)) action[n][e][p.to_string()] = e;
  }
  return SymSet(std::move(grades), std::move(action));
}

json to_json(const AmalgSig& a) {
  json ops = json::array();
  for (const auto& op : a.ops()) ops.push_back({{"name", op.name}, {"out", op.out}, {"ins", op.ins}});
  return json{{"base", to_json(a.base())}, {"ops", ops}};
}

AmalgSig amalgsig_from_json(const json& j) {
  std::vector<AmalgOp> ops;
  for (const auto& o : j.at("ops"))
    ops.push_back({o.at("name").get<std::string>(), o.at("out").get<std::string>(),
                   o.at("ins").get<std::vector<std::string>>()});
  return AmalgSig(finset_from_json(j.at("base")), std::move(ops));
}

json to_json(const SymSig& a) {
  json profiles = json::object();
  for (const auto& [n, g] : a.carrier().grades()) {
    json grade = json::object();
    for (const auto& e : g.elems()) grade[e] = a.profile(n, e);
    profiles[std::to_string(n)] = grade;
  }
  return json{{"base", to_json(a.base())}, {"carrier", to_json(a.carrier())},
              {"profiles", profiles}};
}

SymSig symsig_from_json(const json& j) {
  SymSet carrier = symset_from_json(j.at("carrier"));
  std::map<int, std::map<std::string, std::vector<std::string>>> profiles;
  for (const auto& [k, grade] : j.at("profiles").items())
    for (const auto& [e, prof] : grade.items())
      profiles[std::stoi(k)][e] = prof.get<std::vector<std::string>>();
  return SymSig(finset_from_json(j.at("base")), std::move(carrier), std::move(profiles));
}

json to_json(const PolyDiag& d) {
  return json{{"base", to_json(d.base)}, {"E", to_json(d.E)},      {"B", to_json(d.B)},
              {"s", d.s.table()},        {"p", d.p.table()},       {"t", d.t.table()}};
}

PolyDiag polydiag_from_json(const json& j) {
  FinSet base = finset_from_json(j.at("base"));
  FinSet e = finset_from_json(j.at("E"));
  FinSet b = finset_from_json(j.at("B"));
  return make_poly(base, e, b,
                   FinMap(e, base, j.at("s").get<std::map<std::string, std::string>>()),
                   FinMap(e, b, j.at("p").get<std::map<std::string, std::string>>()),
                   FinMap(b, base, j.at("t").get<std::map<std::string, std::string>>()));
}

json to_json(const TGraph& g) {
  json delta = json::object();
  for (const auto& [a, w] : g.delta) delta[a] = w;
  return json{{"monad", g.monad.kind == MonadKind::Identity ? "identity" : "list"},
              {"base", to_json(g.base)},
              {"carrier", to_json(g.carrier)},
              {"gamma", g.gamma.table()},
              {"delta", delta}};
}

TGraph tgraph_from_json(const json& j) {
  MonadHandle monad{j.at("monad").get<std::string>() == "identity" ? MonadKind::Identity
                                                                   : MonadKind::FreeMonoid};
  FinSet base = finset_from_json(j.at("base"));
  FinSet carrier = finset_from_json(j.at("carrier"));
  std::map<std::string, Word> delta;
  for (const auto& [a, w] : j.at("delta").items()) delta[a] = w.get<Word>();
  return make_tgraph(monad, base, carrier,
                     FinMap(carrier, base, j.at("gamma").get<std::map<std::string, std::string>>()),
                     std::move(delta));
}

json to_json(const SliceObj& x) {
  return json{{"total", to_json(x.total)}, {"d", x.d.table()}};
}

SliceObj slice_from_json(const json& j, const FinSet& base) {
  FinSet total = finset_from_json(j.at("total"));
  return make_slice(total, FinMap(total, base, j.at("d").get<std::map<std::string, std::string>>()));
}

json to_json(const Pasting& p) {
  if (p.slot) return json{{"slot", true}, {"boundary", p.boundary->key}};
  json kids = json::array();
  for (const auto& k : p.kids) kids.push_back(to_json(k));
  return json{{"slot", false}, {"cell", p.cell->key}, {"kids", kids}};
}

json to_json(const OpPtr& cell) {
  json j;
  j["dim"] = cell->dim;
  j["size"] = cell->size;
  j["key"] = cell->key;
  if (cell->dim >= 1) {
    j["target"] = cell->target->key;
    j["source"] = to_json(cell->source);
  }
  return j;
}

GPasting gpasting_from_json(const json& j) {
  GPasting p;
  if (j.value("slot", false)) {
    p.slot = true;
    p.boundary = j.at("boundary").get<std::string>();
    return p;
  }
  p.slot = false;
  p.cell = j.at("cell").get<std::string>();
  if (j.contains("kids"))
    for (const auto& k : j.at("kids")) p.kids.push_back(gpasting_from_json(k));
  return p;
}

OpetopicSetTruncation opetopic_set_from_json(const json& j) {
  OpetopicSetTruncation t;
  for (const auto& lvl : j.at("levels")) {
    OpetopicLevel level;
    level.cells = lvl.at("cells").get<std::vector<std::string>>();
    if (lvl.contains("gamma"))
      level.gamma = lvl.at("gamma").get<std::map<std::string, std::string>>();
    if (lvl.contains("delta"))
      for (const auto& [c, p] : lvl.at("delta").items()) level.delta[c] = gpasting_from_json(p);
    t.levels.push_back(std::move(level));
  }
  return t;
}

json to_json(const Report& r) {
  return json{{"verdict", r.ok ? "ok" : "violation"}, {"failures", r.failures}};
}

json to_json(const CheckReport& r) {
  return json{{"verdict", r.ok ? "ok" : "violation"}, {"counterexamples", r.counterexamples}};
}

TGraphMonoid tgraph_monoid_from_json(const json& j) {
  TGraphMonoid m;
  m.M = tgraph_from_json(j.at("graph"));
  m.mult = j.at("mult").get<std::map<std::string, std::string>>();
  m.unit = j.at("unit").get<std::map<std::string, std::string>>();
  return m;
}

AmalgMonoid amalg_monoid_from_json(const json& j) {
  AmalgMonoid m;
  m.M = amalgsig_from_json(j.at("signature"));
  m.mult_f = j.at("mult_f").get<std::map<std::string, std::string>>();
  for (const auto& [k, v] : j.at("mult_sigma").items()) m.mult_sigma[k] = perm_from_json(v);
  m.unit_f = j.at("unit_f").get<std::map<std::string, std::string>>();
  return m;
}

}  // namespace polyan
