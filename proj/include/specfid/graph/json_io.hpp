#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "specfid/graph/acfg.hpp"
#include "specfid/graph/dfg.hpp"
#include "specfid/graph/sdg.hpp"

namespace specfid::graph {

// Canonical serializations: node order entry/statements/exit, edge lists
// pre-sorted by the builders, so identical source gives byte-identical
// dumps.
nlohmann::json to_json(const Acfg& g);
nlohmann::json to_json(const Dfg& g);
nlohmann::json to_json(const Sdg& g);

// DOT renderings: decisions are hexagons, actions boxes, terminators double
// octagons; reads/writes appear as R:/W: label suffixes.
std::string emit_dot(const Acfg& g);
std::string emit_dot(const Dfg& g);
std::string emit_dot(const Sdg& g);

}  // namespace specfid::graph
