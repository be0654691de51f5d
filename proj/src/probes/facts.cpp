#include "specfid/probes/facts.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "specfid/core/text.hpp"

namespace specfid::probes {

const char* to_string(FactKind k) {
    switch (k) {
        case FactKind::guard_effect: return "guard_effect";
        case FactKind::def_use_transform: return "def_use_transform";
        case FactKind::event_successor: return "event_successor";
    }
    return "guard_effect";
}

namespace {

std::string strip_quotes(const std::string& s) {
    if (s.size() >= 2 && s.front() == '\'' && s.back() == '\'')
        return s.substr(1, s.size() - 2);
    return s;
}

// splits "HEAD <a> SEP <b>" around the last occurrence of SEP
bool split_around(const std::string& label, const std::string& sep, std::string& left,
                  std::string& right) {
    auto pos = label.rfind(sep);
    if (pos == std::string::npos) return false;
    left = label.substr(0, pos);
    right = label.substr(pos + sep.size());
    return true;
}

}  // namespace

std::string describe_effect(const graph::AcfgNode& node) {
    const std::string& l = node.label;
    std::string left, right;
    if (node.stmt == "move") {
        if (split_around(l, " TO ", left, right))
            return "sets " + right + " to " + strip_quotes(left.substr(5));
    } else if (node.stmt == "add") {
        if (split_around(l, " GIVING ", left, right))
            return "computes " + right + " as the sum of " + left.substr(4);
        if (split_around(l, " TO ", left, right))
            return "adds " + left.substr(4) + " to " + right;
    } else if (node.stmt == "display") {
        return "displays " + l.substr(8);
    } else if (node.stmt == "call") {
        std::string rest = l.substr(5);
        if (split_around(rest, " USING ", left, right))
            return "calls " + strip_quotes(left) + " passing " + right;
        return "calls " + strip_quotes(rest);
    } else if (node.stmt == "xctl") {
        std::string rest = l.substr(5);
        if (split_around(rest, " USING ", left, right))
            return "transfers control to " + strip_quotes(left) + " carrying " + right;
        return "transfers control to " + strip_quotes(rest);
    } else if (node.stmt == "string") {
        if (split_around(l, " INTO ", left, right))
            return "composes " + right + " from its fragments";
    } else if (node.stmt == "set") {
        if (split_around(l, " TO ", left, right))
            return "sets " + left.substr(4) + " to " + strip_quotes(right);
    } else if (node.stmt == "goback") {
        return "returns control to the caller";
    } else if (node.stmt == "continue") {
        return "takes no action";
    }
    return l;
}

namespace {

using graph::AcfgNode;

bool direct_sink(const cobol::Program& program, const AcfgNode& n) {
    if (n.stmt == "display" || n.stmt == "string" || n.stmt == "call" || n.stmt == "xctl")
        return true;
    for (const auto& w : n.writes)
        if (program.is_linkage(w)) return true;
    return false;
}

// observable = direct sink, or the node's write feeds one through the DFG
std::set<std::string> observable_set(const cobol::Program& program, const graph::Acfg& acfg,
                                     const graph::Dfg& dfg) {
    std::set<std::string> obs;
    for (const auto& n : acfg.nodes)
        if (direct_sink(program, n)) obs.insert(n.id);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& e : dfg.edges)
            if (obs.count(e.use_node) && obs.insert(e.def_node).second) changed = true;
    }
    return obs;
}

std::string arm_tag(const graph::AcfgEdge& e) {
    switch (e.kind) {
        case graph::EdgeKind::true_branch: return "true";
        case graph::EdgeKind::false_branch: return "false";
        case graph::EdgeKind::when_arm: return "when" + std::to_string(e.when_index);
        default: return "other";
    }
}

}  // namespace

std::vector<GraphFact> enumerate_facts(const cobol::Program& program, const graph::Acfg& acfg,
                                       const graph::Dfg& dfg, const graph::Sdg& sdg,
                                       Channel channel) {
    std::map<std::string, const AcfgNode*> by_id;
    for (const auto& n : acfg.nodes) by_id[n.id] = &n;
    const auto obs = observable_set(program, acfg, dfg);
    auto usable = [&](const std::string& id) {
        auto it = by_id.find(id);
        return it != by_id.end() && !it->second->dead && obs.count(id) != 0;
    };

    // nodes from which some observable node is reachable (reverse BFS);
    // an arm "leads to an observable action" through these
    std::set<std::string> reaches_obs = obs;
    {
        std::map<std::string, std::vector<std::string>> preds;
        for (const auto& e : acfg.edges) preds[e.dst].push_back(e.src);
        std::vector<std::string> queue(obs.begin(), obs.end());
        while (!queue.empty()) {
            std::string cur = queue.back();
            queue.pop_back();
            for (const auto& p : preds[cur])
                if (reaches_obs.insert(p).second) queue.push_back(p);
        }
    }

    std::map<std::string, GraphFact> facts;  // keyed by id: dedup + determinism
    auto emit = [&](GraphFact f) {
        f.program = acfg.program_id;
        facts.emplace(f.id, std::move(f));
    };

    if (channel == Channel::cfg) {
        for (const auto& e : acfg.edges) {
            const auto* src = by_id.at(e.src);
            if (src->kind != graph::NodeKind::decision || src->dead) continue;
            if (e.kind != graph::EdgeKind::true_branch &&
                e.kind != graph::EdgeKind::false_branch &&
                e.kind != graph::EdgeKind::when_arm && e.kind != graph::EdgeKind::other_arm)
                continue;
            // the arm must lead to an observable action, not necessarily start
            // with one; the truth still describes the immediate arm target
            if (e.label.empty() && e.kind != graph::EdgeKind::other_arm) continue;
            auto dst_it = by_id.find(e.dst);
            if (dst_it == by_id.end() || dst_it->second->dead) continue;
            if (reaches_obs.count(e.dst) == 0) continue;
            GraphFact f;
            f.id = "cfg:" + e.src + ":" + arm_tag(e);
            f.channel = Channel::cfg;
            f.fact_kind = FactKind::guard_effect;
            f.category = Category::guard;
            f.node = e.src;
            f.peer = e.dst;
            f.condition =
                e.label == "OTHER" ? "none of the preceding conditions holds" : e.label;
            f.truth = "the program " + describe_effect(*by_id.at(e.dst));
            emit(std::move(f));
        }
    } else if (channel == Channel::dfg) {
        for (const auto& e : dfg.edges) {
            if (by_id.at(e.def_node)->dead || !usable(e.use_node)) continue;
            const auto* def = by_id.at(e.def_node);
            const auto* use = by_id.at(e.use_node);
            GraphFact f;
            f.id = "dfg:" + e.def_node + ":" + e.use_node + ":" + e.variable;
            f.channel = Channel::dfg;
            f.fact_kind = FactKind::def_use_transform;
            f.category = (def->stmt == "add" || def->stmt == "string" || use->stmt == "add" ||
                          use->stmt == "string")
                             ? Category::computation
                             : Category::data;
            f.node = e.def_node;
            f.peer = e.use_node;
            f.variable = e.variable;
            std::string source =
                e.def_node == acfg.entry_id
                    ? e.variable + " is supplied by the caller or the initial value"
                    : e.variable + " holds what the program " + describe_effect(*def);
            f.truth = "the program " + describe_effect(*use) + ", where " + source;
            emit(std::move(f));
        }
    } else if (channel == Channel::sdg) {
        for (const auto& e : sdg.edges) {
            if (e.kind == graph::SdgEdgeKind::call || e.kind == graph::SdgEdgeKind::transfer) {
                GraphFact f;
                std::string payload = text::join(e.payload, ", ");
                bool transfer = e.kind == graph::SdgEdgeKind::transfer;
                f.id = std::string("sdg:") + (transfer ? "transfer:" : "call:") + e.src + ":" +
                       e.dst + (payload.empty() ? "" : ":" + payload);
                f.channel = Channel::sdg;
                f.fact_kind = FactKind::event_successor;
                f.category = transfer ? Category::flow : Category::dependency;
                f.node = e.src;
                f.peer = e.dst;
                f.variable = payload;
                if (transfer)
                    f.truth = "control transfers to " + e.dst +
                              (payload.empty() ? "" : ", carrying " + payload);
                else
                    f.truth = payload.empty()
                                  ? "the program calls " + e.dst
                                  : payload + (e.payload.size() == 1 ? " is" : " are") +
                                        " forwarded to " + e.dst;
                emit(std::move(f));
            } else if (e.kind == graph::SdgEdgeKind::control_dep) {
                if (!usable(e.dst)) continue;
                const auto* a = by_id.at(e.src);
                GraphFact f;
                f.id = "sdg:cdep:" + e.src + ":" + e.dst;
                f.channel = Channel::sdg;
                f.fact_kind = FactKind::event_successor;
                f.category = Category::dependency;
                f.node = e.src;
                f.peer = e.dst;
                f.condition = a->label;
                f.truth = "whether the program " + describe_effect(*by_id.at(e.dst)) +
                          " is decided by: " + a->label;
                emit(std::move(f));
            }
        }
    }

    std::vector<GraphFact> out;
    out.reserve(facts.size());
    for (auto& [id, f] : facts) out.push_back(std::move(f));
    return out;
}

}  // namespace specfid::probes
