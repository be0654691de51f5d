#pragma once

#include <string>
#include <vector>

#include "specfid/graph/acfg.hpp"

namespace specfid::graph {

struct DfgEdge {
    std::string def_node;
    std::string use_node;
    std::string variable;
};

struct Dfg {
    std::string program_id;
    std::vector<DfgEdge> edges;  // sorted (def, use, variable)
};

// Reaching-definitions def-use pairs over the ACFG. The entry node defines
// the USING parameters; CALL/XCTL arguments count as both read and written
// (BY REFERENCE default).
Dfg build_dfg(const cobol::Program& program, const Acfg& acfg);

}  // namespace specfid::graph
