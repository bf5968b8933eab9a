#pragma once

#include "supernorm/online.hpp"
#include "supernorm/probing.hpp"

namespace supernorm {

// Instances are type-tagged JSON documents:
//   {"type": "loadbalance"|"cover"|"pack"|"probe"|"olo",
//    "objective": <norm JSON>, "data": {...}}
// The probing loader also accepts the bare schema
//   {"items": [...], "feasible": {...}, "objective": <norm JSON>}.

LoadBalanceInstance load_loadbalance(const nlohmann::json& j);
// applies the variable-duplication reduction when restriction sets overlap
CoveringInstance load_cover(const nlohmann::json& j);
PackingInstance load_pack(const nlohmann::json& j);
ProbingInstance load_probing(const nlohmann::json& j);

struct OloInstance {
    Norm dual;
    std::vector<Vec> gains;
    double p = 2.0;
    double eps = 0.5;
};
OloInstance load_olo(const nlohmann::json& j);

nlohmann::json loadbalance_to_json(const LoadBalanceInstance& inst);
nlohmann::json cover_to_json(const CoveringInstance& inst);
nlohmann::json pack_to_json(const PackingInstance& inst);
nlohmann::json probing_to_json(const ProbingInstance& inst);
nlohmann::json olo_to_json(const OloInstance& inst);

// Reproducible random instance generators; `params` keys are per kind
// (loadbalance: T,n,p; cover: n,m; facility-location-cover: m,q;
//  pack: T,n; probe: n,card; olo-experts: d,T,p,eps).
nlohmann::json generate_instance(const std::string& kind, const nlohmann::json& params,
                                 std::uint64_t seed);

} // namespace supernorm
