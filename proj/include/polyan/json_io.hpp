#pragma once

#include <string>

#include <json.hpp>

#include "polyan/diagrams.hpp"
#include "polyan/evaluation.hpp"
#include "polyan/monoids.hpp"
#include "polyan/opetopes.hpp"
#include "polyan/signatures.hpp"

namespace polyan {

using nlohmann::json;

json to_json(const FinSet& s);
FinSet finset_from_json(const json& j);

json to_json(const FinMap& m);
FinMap finmap_from_json(const json& j);

json to_json(const Perm& p);
Perm perm_from_json(const json& j);

json to_json(const SymSet& s);
SymSet symset_from_json(const json& j);

json to_json(const AmalgSig& a);
AmalgSig amalgsig_from_json(const json& j);

json to_json(const SymSig& a);
SymSig symsig_from_json(const json& j);

json to_json(const PolyDiag& d);
PolyDiag polydiag_from_json(const json& j);

json to_json(const TGraph& g);
TGraph tgraph_from_json(const json& j);

json to_json(const SliceObj& x);
SliceObj slice_from_json(const json& j, const FinSet& base);

json to_json(const Pasting& p);
json to_json(const OpPtr& cell);

GPasting gpasting_from_json(const json& j);
OpetopicSetTruncation opetopic_set_from_json(const json& j);

json to_json(const Report& r);
json to_json(const CheckReport& r);

TGraphMonoid tgraph_monoid_from_json(const json& j);
AmalgMonoid amalg_monoid_from_json(const json& j);

}  // namespace polyan
