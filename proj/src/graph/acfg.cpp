#include "specfid/graph/acfg.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "specfid/core/errors.hpp"
#include "specfid/core/text.hpp"

namespace specfid::graph {

const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::entry: return "entry";
        case NodeKind::exit: return "exit";
        case NodeKind::action: return "action";
        case NodeKind::decision: return "decision";
        case NodeKind::terminator: return "terminator";
    }
    return "action";
}

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::sequential: return "sequential";
        case EdgeKind::true_branch: return "true_branch";
        case EdgeKind::false_branch: return "false_branch";
        case EdgeKind::when_arm: return "when_arm";
        case EdgeKind::other_arm: return "other_arm";
        case EdgeKind::fallthrough: return "fallthrough";
        case EdgeKind::perform_call: return "perform_call";
        case EdgeKind::perform_return: return "perform_return";
        case EdgeKind::goto_edge: return "goto";
    }
    return "sequential";
}

const AcfgNode* Acfg::find(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

std::vector<const AcfgEdge*> Acfg::out_edges(const std::string& id) const {
    std::vector<const AcfgEdge*> out;
    for (const auto& e : edges)
        if (e.src == id) out.push_back(&e);
    return out;
}

std::vector<std::string> Acfg::successors(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& e : edges)
        if (e.src == id) out.push_back(e.dst);
    return out;
}

std::vector<std::string> Acfg::predecessors(const std::string& id) const {
    std::vector<std::string> out;
    for (const auto& e : edges)
        if (e.dst == id) out.push_back(e.src);
    return out;
}

namespace {

using cobol::Operand;
using cobol::Program;
using cobol::Statement;
using cobol::StatementKind;

// Variable identity for R/W sets: subscripts stripped, qualification kept.
std::string base_name(const std::string& text) {
    auto pos = text.find('(');
    return pos == std::string::npos ? text : specfid::text::trim(text.substr(0, pos));
}

void add_identifiers(const std::vector<Operand>& ops, std::set<std::string>& out) {
    for (const auto& o : ops)
        if (o.is_identifier()) out.insert(base_name(o.text));
}

void statement_rw(const Program& prog, const Statement& s, std::set<std::string>& reads,
                  std::set<std::string>& writes) {
    switch (s.kind) {
        case StatementKind::move:
        case StatementKind::add:
            add_identifiers(s.srcs, reads);
            add_identifiers(s.dsts, writes);
            break;
        case StatementKind::if_stmt: {
            std::vector<std::string> r;
            s.cond.collect_reads(r);
            for (const auto& v : r) reads.insert(base_name(v));
            break;
        }
        case StatementKind::evaluate: {
            std::vector<std::string> r;
            if (!s.subject_is_true && s.subject_operand.is_identifier())
                r.push_back(s.subject_operand.text);
            for (const auto& arm : s.arms) arm.cond.collect_reads(r);
            for (const auto& v : r) reads.insert(base_name(v));
            break;
        }
        case StatementKind::call:
        case StatementKind::xctl:
            if (s.callee.is_identifier()) reads.insert(base_name(s.callee.text));
            add_identifiers(s.using_args, reads);   // BY REFERENCE: callee sees
            add_identifiers(s.using_args, writes);  // and may update arguments
            break;
        case StatementKind::string_stmt:
            add_identifiers(s.srcs, reads);
            add_identifiers(s.delimiters, reads);
            add_identifiers(s.dsts, writes);
            break;
        case StatementKind::set_stmt:
            if (s.set_to_true) {
                for (const auto& d : s.dsts) {
                    const auto* item = prog.find_item(d.text);
                    writes.insert(item && item->level == 88 && !item->parent.empty()
                                      ? item->parent
                                      : base_name(d.text));
                }
            } else {
                add_identifiers(s.srcs, reads);
                add_identifiers(s.dsts, writes);
            }
            break;
        case StatementKind::display:
            add_identifiers(s.srcs, reads);
            break;
        default:
            break;  // perform/goto/goback/continue/opaque carry no R/W
    }
}

struct Dangle {
    std::string node;
    EdgeKind kind = EdgeKind::sequential;
    int when_index = -1;
    std::string label;
    int pending_perform = -1;  // connecting this dangle names a return target
};

struct PerformRec {
    std::string node_id;
    std::string target, thru;
    int line = 0;
    std::set<std::string> return_targets;
};

class Builder {
  public:
    explicit Builder(const Program& p) : prog_(p) {}

    Acfg run() {
        g_.program_id = prog_.program_id;
        AcfgNode entry;
        entry.id = g_.entry_id;
        entry.kind = NodeKind::entry;
        entry.label = "ENTRY " + prog_.program_id;
        for (const auto& u : prog_.using_params) entry.writes.insert(u);
        // VALUE-initialized working storage is defined at program start
        for (const auto& item : prog_.data_items)
            if (item.storage == cobol::DataItem::Storage::working && item.level != 88 &&
                !item.values.empty())
                entry.writes.insert(item.name);
        g_.nodes.push_back(entry);

        const size_t np = prog_.paragraphs.size();
        para_entry_.resize(np);
        para_dangles_.resize(np);
        para_gotos_.resize(np);
        for (size_t i = 0; i < np; ++i) {
            cur_para_ = static_cast<int>(i);
            stmt_counter_ = 0;
            auto [first, dangles] = lay_list(prog_.paragraphs[i].statements);
            if (first.empty()) {
                // empty paragraph: synthetic no-op keeps the graph connected
                AcfgNode n;
                n.id = new_id();
                n.kind = NodeKind::action;
                n.stmt = "continue";
                n.label = "CONTINUE";
                n.line_begin = n.line_end = prog_.paragraphs[i].line_begin;
                n.paragraph = prog_.paragraphs[i].name;
                g_.nodes.push_back(n);
                first = n.id;
                dangles = {{n.id, EdgeKind::sequential, -1, "", -1}};
            }
            para_entry_[i] = first;
            para_dangles_[i] = dangles;
        }

        if (np == 0) {
            add_edge(g_.entry_id, g_.exit_id, EdgeKind::sequential);
        } else {
            add_edge(g_.entry_id, para_entry_[0], EdgeKind::sequential);
            for (size_t i = 0; i < np; ++i) {
                const std::string target =
                    i + 1 < np ? para_entry_[i + 1] : g_.exit_id;
                for (const auto& d : para_dangles_[i]) {
                    if (d.pending_perform >= 0) {
                        performs_[d.pending_perform].return_targets.insert(target);
                        continue;
                    }
                    EdgeKind k =
                        d.kind == EdgeKind::sequential ? EdgeKind::fallthrough : d.kind;
                    add_edge(d.node, target, k, d.when_index, d.label);
                }
            }
        }

        resolve_performs();
        resolve_gotos();

        AcfgNode exit_node;
        exit_node.id = g_.exit_id;
        exit_node.kind = NodeKind::exit;
        exit_node.label = "EXIT";
        g_.nodes.push_back(exit_node);

        mark_dead();
        std::sort(g_.edges.begin(), g_.edges.end(), [](const AcfgEdge& a, const AcfgEdge& b) {
            return std::tie(a.src, a.dst, a.kind, a.when_index) <
                   std::tie(b.src, b.dst, b.kind, b.when_index);
        });
        g_.edges.erase(std::unique(g_.edges.begin(), g_.edges.end(),
                                   [](const AcfgEdge& a, const AcfgEdge& b) {
                                       return a.src == b.src && a.dst == b.dst &&
                                              a.kind == b.kind && a.when_index == b.when_index;
                                   }),
                       g_.edges.end());
        return std::move(g_);
    }

  private:
    const Program& prog_;
    Acfg g_;
    std::vector<PerformRec> performs_;
    std::vector<std::string> para_entry_;
    std::vector<std::vector<Dangle>> para_dangles_;
    std::vector<std::vector<std::pair<std::string, std::string>>> para_gotos_;
    int cur_para_ = 0;
    int stmt_counter_ = 0;

    std::string new_id() {
        return "P" + std::to_string(cur_para_) + ".S" + std::to_string(stmt_counter_++);
    }

    void add_edge(const std::string& src, const std::string& dst, EdgeKind k,
                  int when_index = -1, const std::string& label = "",
                  bool unsound = false) {
        AcfgEdge e;
        e.src = src;
        e.dst = dst;
        e.kind = k;
        e.when_index = when_index;
        e.label = label;
        e.unsound_return = unsound;
        g_.edges.push_back(e);
    }

    AcfgNode& make_node(const Statement& s, NodeKind kind) {
        AcfgNode n;
        n.id = new_id();
        n.kind = kind;
        n.stmt = cobol::to_string(s.kind);
        n.label = s.display();
        n.line_begin = s.line_begin;
        n.line_end = s.line_end;
        n.paragraph = prog_.paragraphs[cur_para_].name;
        statement_rw(prog_, s, n.reads, n.writes);
        g_.nodes.push_back(std::move(n));
        return g_.nodes.back();
    }

    void connect(const std::vector<Dangle>& dangles, const std::string& target) {
        for (const auto& d : dangles) {
            if (d.pending_perform >= 0) {
                performs_[d.pending_perform].return_targets.insert(target);
                continue;
            }
            add_edge(d.node, target, d.kind, d.when_index, d.label);
        }
    }

    std::pair<std::string, std::vector<Dangle>> lay_list(const std::vector<Statement>& stmts) {
        std::string first;
        std::vector<Dangle> prev;
        for (const auto& s : stmts) {
            auto [sid, dangles] = lay_statement(s);
            if (first.empty())
                first = sid;
            else
                connect(prev, sid);
            prev = std::move(dangles);
        }
        return {first, prev};
    }

    std::pair<std::string, std::vector<Dangle>> lay_statement(const Statement& s) {
        switch (s.kind) {
            case StatementKind::if_stmt: {
                std::string id = make_node(s, NodeKind::decision).id;
                std::vector<Dangle> out;
                auto [te, td] = lay_list(s.then_block);
                if (te.empty())
                    out.push_back({id, EdgeKind::true_branch, -1, s.cond.display(), -1});
                else {
                    add_edge(id, te, EdgeKind::true_branch, -1, s.cond.display());
                    for (auto& d : td) out.push_back(d);
                }
                auto [fe, fd] = lay_list(s.else_block);
                if (fe.empty())
                    out.push_back({id, EdgeKind::false_branch, -1, "", -1});
                else {
                    add_edge(id, fe, EdgeKind::false_branch, -1,
                             "NOT (" + s.cond.display() + ")");
                    for (auto& d : fd) out.push_back(d);
                }
                return {id, out};
            }
            case StatementKind::evaluate: {
                std::string id = make_node(s, NodeKind::decision).id;
                std::vector<Dangle> out;
                for (size_t k = 0; k < s.arms.size(); ++k) {
                    auto [ae, ad] = lay_list(s.arms[k].block);
                    std::string lbl = s.arms[k].cond.display();
                    if (ae.empty())
                        out.push_back({id, EdgeKind::when_arm, static_cast<int>(k), lbl, -1});
                    else {
                        add_edge(id, ae, EdgeKind::when_arm, static_cast<int>(k), lbl);
                        for (auto& d : ad) out.push_back(d);
                    }
                }
                // the other arm always exists; an implicit one falls through
                if (s.has_other) {
                    auto [oe, od] = lay_list(s.other_block);
                    if (oe.empty())
                        out.push_back({id, EdgeKind::other_arm, -1, "OTHER", -1});
                    else {
                        add_edge(id, oe, EdgeKind::other_arm, -1, "OTHER");
                        for (auto& d : od) out.push_back(d);
                    }
                } else {
                    out.push_back({id, EdgeKind::other_arm, -1, "OTHER", -1});
                }
                return {id, out};
            }
            case StatementKind::perform:
            case StatementKind::perform_thru: {
                std::string id = make_node(s, NodeKind::action).id;
                PerformRec rec;
                rec.node_id = id;
                rec.target = s.target;
                rec.thru = s.kind == StatementKind::perform_thru ? s.target_thru : s.target;
                rec.line = s.line_begin;
                performs_.push_back(rec);
                int pi = static_cast<int>(performs_.size()) - 1;
                return {id, {{id, EdgeKind::sequential, -1, "", pi}}};
            }
            case StatementKind::go_to: {
                std::string id = make_node(s, NodeKind::action).id;
                para_gotos_[cur_para_].push_back({id, s.target});
                return {id, {}};
            }
            case StatementKind::goback: {
                std::string id = make_node(s, NodeKind::terminator).id;
                add_edge(id, g_.exit_id, EdgeKind::sequential);
                return {id, {}};
            }
            case StatementKind::xctl: {
                std::string id = make_node(s, NodeKind::terminator).id;
                add_edge(id, g_.exit_id, EdgeKind::sequential);
                return {id, {}};
            }
            default: {
                std::string id = make_node(s, NodeKind::action).id;
                return {id, {{id, EdgeKind::sequential, -1, "", -1}}};
            }
        }
    }

    // Resolves a PERFORM/GO TO name to an inclusive paragraph index range.
    std::pair<int, int> resolve_range(const std::string& name, int line) const {
        int idx = prog_.paragraph_index(name);
        if (idx >= 0) return {idx, idx};
        for (const auto& sec : prog_.sections) {
            if (specfid::text::upper(sec.name) == specfid::text::upper(name)) {
                if (sec.last_paragraph < sec.first_paragraph)
                    throw ValidationError("PERFORM of empty section " + name + " (line " +
                                          std::to_string(line) + ")");
                return {sec.first_paragraph, sec.last_paragraph};
            }
        }
        throw ValidationError("unresolved control-transfer target '" + name + "' (line " +
                              std::to_string(line) + ")");
    }

    void resolve_performs() {
        // ranges first, so return-target propagation can see them
        std::vector<std::pair<int, int>> ranges;
        for (const auto& rec : performs_) {
            auto [lo, l1] = resolve_range(rec.target, rec.line);
            auto [l2, hi] = resolve_range(rec.thru, rec.line);
            (void)l1;
            (void)l2;
            if (hi < lo)
                throw ValidationError("PERFORM range ends before it starts: " + rec.target +
                                      " THRU " + rec.thru);
            ranges.push_back({lo, hi});
        }
        // a PERFORM sitting at a range end hands its caller's return targets
        // to the inner call; iterate to a fixed point
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < performs_.size(); ++i) {
                for (const auto& d : para_dangles_[ranges[i].second]) {
                    if (d.pending_perform < 0) continue;
                    auto& inner = performs_[d.pending_perform].return_targets;
                    for (const auto& t : performs_[i].return_targets)
                        if (inner.insert(t).second) changed = true;
                }
            }
        }
        for (size_t i = 0; i < performs_.size(); ++i) {
            const auto& rec = performs_[i];
            const auto [lo, hi] = ranges[i];
            add_edge(rec.node_id, para_entry_[lo], EdgeKind::perform_call);
            for (const auto& d : para_dangles_[hi]) {
                if (d.pending_perform >= 0) continue;
                for (const auto& t : rec.return_targets)
                    add_edge(d.node, t, EdgeKind::perform_return);
            }
            // a GO TO leaving the range still returns, flagged unsound
            for (int p = lo; p <= hi; ++p) {
                for (const auto& [gnode, gtarget] : para_gotos_[p]) {
                    int tlo = resolve_range(gtarget, rec.line).first;
                    if (tlo < lo || tlo > hi)
                        for (const auto& t : rec.return_targets)
                            add_edge(gnode, t, EdgeKind::perform_return, -1, "", true);
                }
            }
        }
    }

    void resolve_gotos() {
        for (const auto& para : para_gotos_)
            for (const auto& [node, target] : para) {
                int lo = resolve_range(target, 0).first;
                add_edge(node, para_entry_[lo], EdgeKind::goto_edge);
            }
    }

    void mark_dead() {
        std::set<std::string> seen;
        std::deque<std::string> queue{g_.entry_id};
        seen.insert(g_.entry_id);
        while (!queue.empty()) {
            std::string cur = queue.front();
            queue.pop_front();
            for (const auto& e : g_.edges)
                if (e.src == cur && seen.insert(e.dst).second) queue.push_back(e.dst);
        }
        for (auto& n : g_.nodes) n.dead = !seen.count(n.id);
    }
};

}  // namespace

Acfg build_acfg(const Program& program) { return Builder(program).run(); }

}  // namespace specfid::graph
