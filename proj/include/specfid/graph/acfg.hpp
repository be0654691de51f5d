#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "specfid/cobol/ast.hpp"

namespace specfid::graph {

enum class NodeKind { entry, exit, action, decision, terminator };
const char* to_string(NodeKind k);

enum class EdgeKind {
    sequential,
    true_branch,
    false_branch,
    when_arm,
    other_arm,
    fallthrough,
    perform_call,
    perform_return,
    goto_edge,
};
const char* to_string(EdgeKind k);

struct AcfgNode {
    std::string id;  // "entry", "exit", or P<paragraph>.S<statement>
    NodeKind kind = NodeKind::action;
    std::string stmt;  // originating statement kind name ("" on entry/exit)
    std::string label;
    std::set<std::string> reads;
    std::set<std::string> writes;
    int line_begin = 0;
    int line_end = 0;
    bool dead = false;        // unreachable from entry; kept, never dropped
    std::string paragraph;    // owning paragraph ("" for entry/exit)
};

struct AcfgEdge {
    std::string src, dst;
    EdgeKind kind = EdgeKind::sequential;
    int when_index = -1;         // dense from 0 on when_arm edges
    std::string label;           // branch condition text on true/when arms
    bool unsound_return = false; // perform_return emitted past a GO TO out of range
};

struct Acfg {
    std::string program_id;
    std::vector<AcfgNode> nodes;  // entry first, statements in line order, exit last
    std::vector<AcfgEdge> edges;  // sorted (src, dst, kind, when_index)
    std::string entry_id = "entry";
    std::string exit_id = "exit";

    const AcfgNode* find(const std::string& id) const;
    std::vector<const AcfgEdge*> out_edges(const std::string& id) const;
    std::vector<std::string> successors(const std::string& id) const;
    std::vector<std::string> predecessors(const std::string& id) const;
};

// Lays out one entry and one exit, statement nodes with R/W annotations,
// branch fans for IF/EVALUATE (an other_arm edge is always present, implicit
// OTHER falls through), PERFORM call/return edge pairs, paragraph
// fall-through, and GO TO edges. PERFORM/GO TO targets must resolve
// (paragraph or section name) or ValidationError is raised. Unreachable
// nodes are flagged dead.
Acfg build_acfg(const cobol::Program& program);

}  // namespace specfid::graph
