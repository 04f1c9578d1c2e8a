#pragma once

#include <json.hpp>

#include "elemrank/group_expr.hpp"
#include "elemrank/ordinal.hpp"
#include "elemrank/rank.hpp"
#include "elemrank/tree.hpp"
#include "elemrank/witness.hpp"

namespace elemrank {

using Json = nlohmann::json;

/// {"kind":"exact","value":<ordinal>} or {"kind":"interval","lo":..,"hi":..},
/// plus the derivation trace. Ordinal strings use the ordinal grammar.
inline Json rank_result_to_json(const RankResult& r) {
    Json j;
    if (r.exact()) {
        j["kind"] = "exact";
        j["value"] = to_string(r.value());
    } else {
        j["kind"] = "interval";
        j["lo"] = to_string(r.lo());
        j["hi"] = to_string(r.hi());
    }
    Json trace = Json::array();
    for (const auto& s : r.trace())
        trace.push_back(Json{{"rule", s.rule}, {"cite", s.law}, {"value", s.value}});
    j["trace"] = trace;
    return j;
}

inline Json chain_to_json(const WitnessChain& c) {
    Json entries = Json::array();
    for (const auto& e : c.entries())
        entries.push_back(Json{{"height", to_string(e.height)},
                               {"group", print_group_expr(e.group)},
                               {"description", e.description}});
    return Json{{"target", print_group_expr(c.target())},
                {"order_type", to_string(c.order_type())},
                {"entries", entries}};
}

inline Json vertices_to_json(const std::set<TreeVertex>& vs) {
    Json out = Json::array();
    for (const auto& v : vs) out.push_back(print_vertex(v));
    return out;
}

} // namespace elemrank
