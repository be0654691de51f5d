#include "specfid/graph/sdg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "specfid/core/errors.hpp"

namespace specfid::graph {

const char* to_string(SdgEdgeKind k) {
    switch (k) {
        case SdgEdgeKind::control_dep: return "control_dep";
        case SdgEdgeKind::data_dep: return "data_dep";
        case SdgEdgeKind::call: return "call";
        case SdgEdgeKind::transfer: return "transfer";
    }
    return "data_dep";
}

namespace {

using cobol::Statement;
using cobol::StatementKind;

// Set-based post-dominator solve on the live subgraph:
// pdom(exit) = {exit}; pdom(n) = {n} ∪ ∩ pdom(succ).
std::vector<std::set<size_t>> post_dominators(const std::vector<std::vector<size_t>>& succs,
                                              size_t exit_index) {
    const size_t n = succs.size();
    std::set<size_t> all;
    for (size_t i = 0; i < n; ++i) all.insert(i);
    std::vector<std::set<size_t>> pdom(n, all);
    pdom[exit_index] = {exit_index};
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < n; ++i) {
            if (i == exit_index) continue;
            std::set<size_t> meet = all;
            bool first = true;
            for (size_t s : succs[i]) {
                if (first) {
                    meet = pdom[s];
                    first = false;
                } else {
                    std::set<size_t> tmp;
                    std::set_intersection(meet.begin(), meet.end(), pdom[s].begin(),
                                          pdom[s].end(), std::inserter(tmp, tmp.begin()));
                    meet = std::move(tmp);
                }
            }
            if (first) meet.clear();  // no successors: only itself below
            meet.insert(i);
            if (meet != pdom[i]) {
                pdom[i] = std::move(meet);
                changed = true;
            }
        }
    }
    return pdom;
}

}  // namespace

Sdg build_sdg(const cobol::Program& program, const Acfg& acfg, const Dfg& dfg) {
    Sdg out;
    out.program_id = acfg.program_id;

    // live-node index space for post-dominance
    std::map<std::string, size_t> index;
    std::vector<const AcfgNode*> live;
    for (const auto& n : acfg.nodes) {
        if (n.dead) continue;
        index[n.id] = live.size();
        live.push_back(&n);
    }
    // Post-dominance runs on structural flow only: perform_return edges are
    // static artifacts (one range, many callers) and would make range-end
    // decisions look like guards of the calling paragraph. Interprocedural
    // control lives on the call edges instead.
    std::vector<std::vector<size_t>> succs(live.size());
    size_t exit_preds = 0;
    for (const auto& e : acfg.edges) {
        auto s = index.find(e.src);
        auto d = index.find(e.dst);
        if (s == index.end() || d == index.end()) continue;
        if (e.dst == acfg.exit_id) ++exit_preds;
        if (e.kind == EdgeKind::perform_return) continue;
        succs[s->second].push_back(d->second);
    }
    out.unified_exit = exit_preds > 1;

    const size_t exit_index = index.at(acfg.exit_id);
    auto pdom = post_dominators(succs, exit_index);

    // nearest post-dominator: the strict one whose own set misses only n
    auto ipdom = [&](size_t v) -> long {
        long best = -1;
        size_t best_size = 0;
        for (size_t c : pdom[v]) {
            if (c == v) continue;
            if (best < 0 || pdom[c].size() > best_size) {
                best = static_cast<long>(c);
                best_size = pdom[c].size();
            }
        }
        return best;
    };

    // Ferrante-Ottenstein-Warren: for edge a->b, everything from b up the
    // post-dominator chain short of ipdom(a) is control dependent on a.
    // Call/return fan-out is a static artifact, so only decisions count.
    std::set<std::pair<size_t, size_t>> cdep;
    for (const auto& e : acfg.edges) {
        if (e.kind == EdgeKind::perform_return) continue;
        auto s = index.find(e.src);
        auto d = index.find(e.dst);
        if (s == index.end() || d == index.end()) continue;
        size_t a = s->second;
        if (live[a]->kind != NodeKind::decision) continue;
        long stop = ipdom(a);
        long runner = static_cast<long>(d->second);
        std::set<long> seen;
        while (runner >= 0 && runner != stop && runner != static_cast<long>(a) &&
               seen.insert(runner).second) {
            cdep.insert({a, static_cast<size_t>(runner)});
            runner = ipdom(static_cast<size_t>(runner));
        }
    }
    for (const auto& [a, b] : cdep)
        out.edges.push_back({live[a]->id, live[b]->id, SdgEdgeKind::control_dep, {}});

    for (const auto& e : dfg.edges)
        out.edges.push_back({e.def_node, e.use_node, SdgEdgeKind::data_dep, {e.variable}});

    // call/transfer edges at paragraph granularity, payload = USING list
    std::function<void(const Statement&, const std::string&)> scan =
        [&](const Statement& s, const std::string& para) {
            if (s.kind == StatementKind::call || s.kind == StatementKind::xctl) {
                std::vector<std::string> payload;
                for (const auto& a : s.using_args) payload.push_back(a.text);
                out.edges.push_back({para, s.callee.text,
                                     s.transfer ? SdgEdgeKind::transfer : SdgEdgeKind::call,
                                     payload});
            }
            for (const auto& c : s.then_block) scan(c, para);
            for (const auto& c : s.else_block) scan(c, para);
            for (const auto& arm : s.arms)
                for (const auto& c : arm.block) scan(c, para);
            for (const auto& c : s.other_block) scan(c, para);
        };
    for (const auto& p : program.paragraphs)
        for (const auto& s : p.statements) scan(s, p.name);

    std::sort(out.edges.begin(), out.edges.end(), [](const SdgEdge& a, const SdgEdge& b) {
        return std::tie(a.kind, a.src, a.dst, a.payload) <
               std::tie(b.kind, b.src, b.dst, b.payload);
    });
    return out;
}

}  // namespace specfid::graph
