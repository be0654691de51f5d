#pragma once

#include <string>
#include <vector>

#include "specfid/graph/acfg.hpp"
#include "specfid/graph/dfg.hpp"

namespace specfid::graph {

enum class SdgEdgeKind { control_dep, data_dep, call, transfer };
const char* to_string(SdgEdgeKind k);

struct SdgEdge {
    std::string src;  // node id, or paragraph name on call/transfer edges
    std::string dst;  // node id, or external program id on call/transfer edges
    SdgEdgeKind kind = SdgEdgeKind::data_dep;
    std::vector<std::string> payload;  // carried variables
};

struct Sdg {
    std::string program_id;
    std::vector<SdgEdge> edges;
    // Post-dominance is computed against the single synthetic exit; flagged
    // when several nodes feed it (GOBACK in branches, transfers).
    bool unified_exit = false;
};

// Control dependence from post-dominance on the ACFG, call/transfer edges at
// paragraph granularity with USING payloads, data dependences lifted from
// the DFG. Dead nodes take no part in control dependence, and neither do
// perform_return edges: they are static artifacts, so range-end decisions
// must not surface as guards of the calling paragraph.
Sdg build_sdg(const cobol::Program& program, const Acfg& acfg, const Dfg& dfg);

}  // namespace specfid::graph
