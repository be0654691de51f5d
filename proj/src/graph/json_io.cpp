#include "specfid/graph/json_io.hpp"

#include <set>
#include <sstream>

#include "specfid/core/text.hpp"

namespace specfid::graph {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string rw_suffix(const AcfgNode& n) {
    std::string out;
    if (!n.reads.empty())
        out += "\\nR: " + text::join(std::vector<std::string>(n.reads.begin(), n.reads.end()), ", ");
    if (!n.writes.empty())
        out += "\\nW: " + text::join(std::vector<std::string>(n.writes.begin(), n.writes.end()), ", ");
    return out;
}

const char* shape_for(NodeKind k) {
    switch (k) {
        case NodeKind::entry:
        case NodeKind::exit: return "oval";
        case NodeKind::decision: return "hexagon";
        case NodeKind::terminator: return "doubleoctagon";
        case NodeKind::action: return "box";
    }
    return "box";
}

}  // namespace

nlohmann::json to_json(const Acfg& g) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["graph"] = "acfg";
    j["program_id"] = g.program_id;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : g.nodes) {
        nlohmann::json jn;
        jn["id"] = n.id;
        jn["kind"] = to_string(n.kind);
        if (!n.stmt.empty()) jn["stmt"] = n.stmt;
        jn["label"] = n.label;
        jn["reads"] = n.reads;
        jn["writes"] = n.writes;
        jn["line_begin"] = n.line_begin;
        jn["line_end"] = n.line_end;
        jn["dead"] = n.dead;
        if (!n.paragraph.empty()) jn["paragraph"] = n.paragraph;
        j["nodes"].push_back(jn);
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges) {
        nlohmann::json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["kind"] = to_string(e.kind);
        if (e.kind == EdgeKind::when_arm) je["when_index"] = e.when_index;
        if (!e.label.empty()) je["label"] = e.label;
        if (e.unsound_return) je["unsound_return"] = true;
        j["edges"].push_back(je);
    }
    return j;
}

nlohmann::json to_json(const Dfg& g) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["graph"] = "dfg";
    j["program_id"] = g.program_id;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back(
            {{"def_node", e.def_node}, {"use_node", e.use_node}, {"variable", e.variable}});
    return j;
}

nlohmann::json to_json(const Sdg& g) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["graph"] = "sdg";
    j["program_id"] = g.program_id;
    j["unified_exit"] = g.unified_exit;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges) {
        nlohmann::json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["kind"] = to_string(e.kind);
        je["payload"] = e.payload;
        j["edges"].push_back(je);
    }
    return j;
}

std::string emit_dot(const Acfg& g) {
    std::ostringstream os;
    os << "digraph acfg_" << g.program_id << " {\n";
    os << "  node [fontname=\"monospace\"];\n";
    for (const auto& n : g.nodes) {
        os << "  \"" << n.id << "\" [shape=" << shape_for(n.kind) << ", label=\""
           << dot_escape(n.label) << rw_suffix(n) << "\"";
        if (n.dead) os << ", style=dotted";
        os << "];\n";
    }
    for (const auto& e : g.edges) {
        std::string label = to_string(e.kind);
        if (e.kind == EdgeKind::when_arm) label += "[" + std::to_string(e.when_index) + "]";
        if (e.unsound_return) label += " (unsound)";
        os << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << label << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

std::string emit_dot(const Dfg& g) {
    std::ostringstream os;
    os << "digraph dfg_" << g.program_id << " {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    std::set<std::string> ids;
    for (const auto& e : g.edges) {
        ids.insert(e.def_node);
        ids.insert(e.use_node);
    }
    for (const auto& id : ids) os << "  \"" << id << "\";\n";
    for (const auto& e : g.edges)
        os << "  \"" << e.def_node << "\" -> \"" << e.use_node << "\" [label=\""
           << dot_escape(e.variable) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string emit_dot(const Sdg& g) {
    std::ostringstream os;
    os << "digraph sdg_" << g.program_id << " {\n";
    os << "  node [shape=box, fontname=\"monospace\"];\n";
    std::set<std::string> ids;
    for (const auto& e : g.edges) {
        ids.insert(e.src);
        ids.insert(e.dst);
    }
    for (const auto& id : ids) os << "  \"" << id << "\";\n";
    for (const auto& e : g.edges) {
        std::string label = to_string(e.kind);
        if (!e.payload.empty()) label += ": " + text::join(e.payload, ", ");
        os << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << dot_escape(label)
           << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace specfid::graph
