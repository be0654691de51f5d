#include "specfid/graph/dfg.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace specfid::graph {

// Classic iterative reaching definitions. A definition is (node, variable);
// a node writing a variable kills every other definition of it.
Dfg build_dfg(const cobol::Program& program, const Acfg& acfg) {
    (void)program;  // R/W sets already live on the ACFG nodes
    Dfg out;
    out.program_id = acfg.program_id;

    const size_t n = acfg.nodes.size();
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < n; ++i) index[acfg.nodes[i].id] = i;

    using Def = std::pair<size_t, std::string>;  // (node index, variable)
    std::vector<std::set<Def>> in(n), outset(n);
    std::vector<std::vector<size_t>> preds(n);
    for (const auto& e : acfg.edges) preds[index.at(e.dst)].push_back(index.at(e.src));

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < n; ++i) {
            std::set<Def> reach;
            for (size_t p : preds[i]) reach.insert(outset[p].begin(), outset[p].end());
            if (reach != in[i]) {
                in[i] = reach;
                changed = true;
            }
            std::set<Def> next;
            const auto& writes = acfg.nodes[i].writes;
            for (const auto& d : in[i])
                if (!writes.count(d.second)) next.insert(d);
            for (const auto& w : writes) next.insert({i, w});
            if (next != outset[i]) {
                outset[i] = std::move(next);
                changed = true;
            }
        }
    }

    for (size_t i = 0; i < n; ++i) {
        for (const auto& v : acfg.nodes[i].reads)
            for (const auto& d : in[i])
                if (d.second == v)
                    out.edges.push_back({acfg.nodes[d.first].id, acfg.nodes[i].id, v});
    }
    std::sort(out.edges.begin(), out.edges.end(), [](const DfgEdge& a, const DfgEdge& b) {
        return std::tie(a.def_node, a.use_node, a.variable) <
               std::tie(b.def_node, b.use_node, b.variable);
    });
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end(),
                                [](const DfgEdge& a, const DfgEdge& b) {
                                    return a.def_node == b.def_node &&
                                           a.use_node == b.use_node && a.variable == b.variable;
                                }),
                    out.edges.end());
    return out;
}

}  // namespace specfid::graph
