#include "specfid/cobol/ast.hpp"

#include "specfid/core/errors.hpp"
#include "specfid/core/text.hpp"

namespace specfid::cobol {

const char* to_string(StatementKind k) {
    switch (k) {
        case StatementKind::move: return "move";
        case StatementKind::add: return "add";
        case StatementKind::if_stmt: return "if";
        case StatementKind::evaluate: return "evaluate";
        case StatementKind::perform: return "perform";
        case StatementKind::perform_thru: return "perform_thru";
        case StatementKind::go_to: return "go_to";
        case StatementKind::call: return "call";
        case StatementKind::goback: return "goback";
        case StatementKind::string_stmt: return "string";
        case StatementKind::set_stmt: return "set";
        case StatementKind::continue_stmt: return "continue";
        case StatementKind::xctl: return "xctl";
        case StatementKind::display: return "display";
        case StatementKind::opaque: return "opaque";
    }
    return "opaque";
}

std::string Operand::display() const {
    if (kind == Kind::string_lit) return "'" + text + "'";
    return text;
}

std::string Condition::display() const {
    switch (kind) {
        case Kind::relation:
            return lhs.display() + " " + op + " " + rhs.display();
        case Kind::cond_name:
            return name;
        case Kind::logical_not:
            return "NOT (" + children[0].display() + ")";
        case Kind::logical_and:
        case Kind::logical_or: {
            std::string sep = kind == Kind::logical_and ? " AND " : " OR ";
            std::string out;
            for (size_t i = 0; i < children.size(); ++i) {
                if (i) out += sep;
                bool paren = children[i].kind == Kind::logical_and ||
                             children[i].kind == Kind::logical_or;
                out += paren ? "(" + children[i].display() + ")" : children[i].display();
            }
            return out;
        }
    }
    return "";
}

void Condition::collect_reads(std::vector<std::string>& out) const {
    switch (kind) {
        case Kind::relation:
            if (lhs.is_identifier()) out.push_back(lhs.text);
            if (rhs.is_identifier()) out.push_back(rhs.text);
            break;
        case Kind::cond_name:
            if (!parent.empty()) out.push_back(parent);
            break;
        default:
            for (const auto& c : children) c.collect_reads(out);
    }
}

namespace {

std::string join_display(const std::vector<Operand>& ops, const std::string& sep = " ") {
    std::string out;
    for (size_t i = 0; i < ops.size(); ++i) {
        if (i) out += sep;
        out += ops[i].display();
    }
    return out;
}

}  // namespace

std::string Statement::display() const {
    switch (kind) {
        case StatementKind::move:
            return "MOVE " + join_display(srcs) + " TO " + join_display(dsts);
        case StatementKind::add: {
            if (giving) return "ADD " + join_display(srcs) + " GIVING " + join_display(dsts);
            // in the TO form the targets are also reads and sit at the tail of srcs
            size_t addends = srcs.size() >= dsts.size() ? srcs.size() - dsts.size() : srcs.size();
            std::vector<Operand> head(srcs.begin(), srcs.begin() + addends);
            return "ADD " + join_display(head) + " TO " + join_display(dsts);
        }
        case StatementKind::if_stmt:
            return "IF " + cond.display();
        case StatementKind::evaluate:
            return "EVALUATE " + subject;
        case StatementKind::perform:
            return "PERFORM " + target;
        case StatementKind::perform_thru:
            return "PERFORM " + target + " THRU " + target_thru;
        case StatementKind::go_to:
            return "GO TO " + target;
        case StatementKind::call:
            return "CALL " + callee.display() +
                   (using_args.empty() ? "" : " USING " + join_display(using_args));
        case StatementKind::xctl:
            return "XCTL " + callee.display() +
                   (using_args.empty() ? "" : " USING " + join_display(using_args));
        case StatementKind::goback:
            return "GOBACK";
        case StatementKind::string_stmt:
            return "STRING ... INTO " + join_display(dsts);
        case StatementKind::set_stmt:
            return set_to_true ? "SET " + join_display(dsts) + " TO TRUE"
                               : "SET " + join_display(dsts) + " TO " + join_display(srcs);
        case StatementKind::continue_stmt:
            return "CONTINUE";
        case StatementKind::display:
            return "DISPLAY " + join_display(srcs);
        case StatementKind::opaque:
            return text;
    }
    return text;
}

const DataItem* Program::find_item(const std::string& name) const {
    for (const auto& d : data_items)
        if (text::upper(d.name) == text::upper(name)) return &d;
    return nullptr;
}

bool Program::is_linkage(const std::string& name) const {
    const DataItem* d = find_item(name);
    return d && d->storage == DataItem::Storage::linkage;
}

int Program::paragraph_index(const std::string& name) const {
    for (size_t i = 0; i < paragraphs.size(); ++i)
        if (text::upper(paragraphs[i].name) == text::upper(name)) return static_cast<int>(i);
    return -1;
}

namespace {

using nlohmann::json;

json operand_json(const Operand& o) {
    const char* k = "identifier";
    switch (o.kind) {
        case Operand::Kind::identifier: k = "identifier"; break;
        case Operand::Kind::string_lit: k = "string"; break;
        case Operand::Kind::number_lit: k = "number"; break;
        case Operand::Kind::figurative: k = "figurative"; break;
    }
    return json{{"kind", k}, {"text", o.text}};
}

json operands_json(const std::vector<Operand>& v) {
    json a = json::array();
    for (const auto& o : v) a.push_back(operand_json(o));
    return a;
}

json condition_json(const Condition& c) {
    json j;
    switch (c.kind) {
        case Condition::Kind::relation:
            j["kind"] = "relation";
            j["lhs"] = operand_json(c.lhs);
            j["op"] = c.op;
            j["rhs"] = operand_json(c.rhs);
            break;
        case Condition::Kind::cond_name:
            j["kind"] = "cond_name";
            j["name"] = c.name;
            j["parent"] = c.parent;
            j["values"] = operands_json(c.values);
            break;
        case Condition::Kind::logical_not:
            j["kind"] = "not";
            break;
        case Condition::Kind::logical_and:
            j["kind"] = "and";
            break;
        case Condition::Kind::logical_or:
            j["kind"] = "or";
            break;
    }
    if (!c.children.empty()) {
        json kids = json::array();
        for (const auto& ch : c.children) kids.push_back(condition_json(ch));
        j["children"] = kids;
    }
    return j;
}

json statements_json(const std::vector<Statement>& v);

json statement_json(const Statement& s) {
    json j;
    j["kind"] = to_string(s.kind);
    j["line_begin"] = s.line_begin;
    j["line_end"] = s.line_end;
    switch (s.kind) {
        case StatementKind::add:
            j["giving"] = s.giving;
            [[fallthrough]];
        case StatementKind::move:
            j["srcs"] = operands_json(s.srcs);
            j["dsts"] = operands_json(s.dsts);
            break;
        case StatementKind::if_stmt:
            j["cond"] = condition_json(s.cond);
            j["then"] = statements_json(s.then_block);
            if (!s.else_block.empty()) j["else"] = statements_json(s.else_block);
            break;
        case StatementKind::evaluate: {
            j["subject"] = s.subject;
            json arms = json::array();
            for (const auto& a : s.arms)
                arms.push_back(json{{"cond", condition_json(a.cond)},
                                    {"block", statements_json(a.block)}});
            j["arms"] = arms;
            j["has_other"] = s.has_other;
            j["other"] = statements_json(s.other_block);
            break;
        }
        case StatementKind::perform:
            j["target"] = s.target;
            break;
        case StatementKind::perform_thru:
            j["target"] = s.target;
            j["target_thru"] = s.target_thru;
            break;
        case StatementKind::go_to:
            j["target"] = s.target;
            break;
        case StatementKind::call:
        case StatementKind::xctl:
            j["callee"] = operand_json(s.callee);
            j["transfer"] = s.transfer;
            j["using"] = operands_json(s.using_args);
            break;
        case StatementKind::string_stmt:
            j["srcs"] = operands_json(s.srcs);
            j["delimiters"] = operands_json(s.delimiters);
            j["dsts"] = operands_json(s.dsts);
            break;
        case StatementKind::set_stmt:
            j["dsts"] = operands_json(s.dsts);
            j["to_true"] = s.set_to_true;
            if (!s.set_to_true) j["srcs"] = operands_json(s.srcs);
            break;
        case StatementKind::display:
            j["srcs"] = operands_json(s.srcs);
            break;
        case StatementKind::opaque:
            j["text"] = s.text;
            break;
        default:
            break;
    }
    return j;
}

json statements_json(const std::vector<Statement>& v) {
    json a = json::array();
    for (const auto& s : v) a.push_back(statement_json(s));
    return a;
}

}  // namespace

json ast_to_json(const Program& p) {
    json items = json::array();
    for (const auto& d : p.data_items) {
        json it{{"level", d.level},
                {"name", d.name},
                {"storage", d.storage == DataItem::Storage::linkage ? "linkage" : "working"},
                {"line", d.line}};
        if (!d.picture.empty()) it["picture"] = d.picture;
        if (!d.values.empty()) it["values"] = operands_json(d.values);
        if (!d.parent.empty()) it["parent"] = d.parent;
        items.push_back(it);
    }
    json paras = json::array();
    for (const auto& pa : p.paragraphs) {
        json pj{{"name", pa.name},
                {"line_begin", pa.line_begin},
                {"line_end", pa.line_end},
                {"statements", statements_json(pa.statements)}};
        if (!pa.section.empty()) pj["section"] = pa.section;
        paras.push_back(pj);
    }
    json secs = json::array();
    for (const auto& s : p.sections)
        secs.push_back(json{{"name", s.name},
                            {"first_paragraph", s.first_paragraph},
                            {"last_paragraph", s.last_paragraph}});
    return json{{"schema_version", 1},
                {"program_id", p.program_id},
                {"using_params", p.using_params},
                {"data_items", items},
                {"sections", secs},
                {"paragraphs", paras},
                {"opaque_count", p.opaque_count}};
}

}  // namespace specfid::cobol
