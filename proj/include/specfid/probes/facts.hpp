#pragma once

#include <string>
#include <vector>

#include "specfid/cobol/ast.hpp"
#include "specfid/core/types.hpp"
#include "specfid/graph/acfg.hpp"
#include "specfid/graph/dfg.hpp"
#include "specfid/graph/sdg.hpp"

namespace specfid::probes {

enum class FactKind { guard_effect, def_use_transform, event_successor };
const char* to_string(FactKind k);

// A single behavioural fact read off one of the graphs. The truth text is
// rendered mechanically from graph constants; no model is involved.
struct GraphFact {
    std::string id;  // "<channel>:<structural key>", stable across runs
    Channel channel = Channel::cfg;
    FactKind fact_kind = FactKind::guard_effect;
    Category category = Category::guard;
    std::string program;
    std::string node;       // decision / def / source node id
    std::string peer;       // arm target / use node / callee
    std::string condition;  // branch condition text (cfg, control deps)
    std::string variable;   // carried variable (dfg, call payloads)
    std::string truth;
};

// Human-readable effect of a statement node, rendered from its canonical
// label ("MOVE 20 TO WS-BASE-PCT" -> "sets WS-BASE-PCT to 20").
std::string describe_effect(const graph::AcfgNode& node);

// Channel-specific enumeration; deterministic, sorted by fact id.
// cfg: one fact per (decision, arm) whose arm leads to an observable action;
//      the truth describes the immediate arm target.
// dfg: one fact per def-use edge whose use is observable.
// sdg: one fact per call/transfer/control-dep edge with observable target.
// Observable = DISPLAY / STRING / CALL / XCTL / linkage write, directly or
// through the DFG (the write feeds an observable consumer).
std::vector<GraphFact> enumerate_facts(const cobol::Program& program, const graph::Acfg& acfg,
                                       const graph::Dfg& dfg, const graph::Sdg& sdg,
                                       Channel channel);

}  // namespace specfid::probes
