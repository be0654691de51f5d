#include "specfid/cobol/printer.hpp"

#include <sstream>

namespace specfid::cobol {

namespace {

std::string pad(int depth) { return std::string(4 * depth, ' '); }

std::string join(const std::vector<Operand>& ops) {
    std::string out;
    for (size_t i = 0; i < ops.size(); ++i) {
        if (i) out += " ";
        out += ops[i].display();
    }
    return out;
}

// WHEN texts for a value-subject arm condition; ranges print as THRU pairs,
// ORed equalities as stacked WHENs.
void when_values(const Condition& c, std::vector<std::string>& out) {
    if (c.kind == Condition::Kind::relation) {
        out.push_back(c.rhs.display());
        return;
    }
    if (c.kind == Condition::Kind::logical_and && c.children.size() == 2 &&
        c.children[0].op == ">=" && c.children[1].op == "<=") {
        out.push_back(c.children[0].rhs.display() + " THRU " + c.children[1].rhs.display());
        return;
    }
    for (const auto& ch : c.children) when_values(ch, out);
}

void print_statements(std::ostringstream& os, const std::vector<Statement>& v, int depth);

void print_statement(std::ostringstream& os, const Statement& s, int depth) {
    const std::string in = pad(depth);
    switch (s.kind) {
        case StatementKind::if_stmt:
            os << in << "IF " << s.cond.display() << "\n";
            print_statements(os, s.then_block, depth + 1);
            if (!s.else_block.empty()) {
                os << in << "ELSE\n";
                print_statements(os, s.else_block, depth + 1);
            }
            os << in << "END-IF\n";
            break;
        case StatementKind::evaluate: {
            os << in << "EVALUATE " << s.subject << "\n";
            for (const auto& arm : s.arms) {
                if (s.subject_is_true) {
                    os << in << "WHEN " << arm.cond.display() << "\n";
                } else {
                    std::vector<std::string> vals;
                    when_values(arm.cond, vals);
                    for (const auto& v : vals) os << in << "WHEN " << v << "\n";
                }
                print_statements(os, arm.block, depth + 1);
            }
            if (s.has_other) {
                os << in << "WHEN OTHER\n";
                print_statements(os, s.other_block, depth + 1);
            }
            os << in << "END-EVALUATE\n";
            break;
        }
        case StatementKind::string_stmt: {
            os << in << "STRING";
            std::string pointer;
            for (size_t i = 0; i < s.srcs.size(); ++i) {
                if (s.delimiters[i].text == "POINTER" &&
                    s.delimiters[i].kind == Operand::Kind::figurative) {
                    pointer = s.srcs[i].display();
                    continue;
                }
                os << " " << s.srcs[i].display() << " DELIMITED BY "
                   << s.delimiters[i].display();
            }
            os << " INTO " << s.dsts[0].display();
            if (!pointer.empty()) os << " WITH POINTER " << pointer;
            os << " END-STRING\n";
            break;
        }
        default:
            os << in << s.display() << "\n";
            break;
    }
}

void print_statements(std::ostringstream& os, const std::vector<Statement>& v, int depth) {
    for (const auto& s : v) print_statement(os, s, depth);
}

void print_items(std::ostringstream& os, const Program& p, DataItem::Storage st) {
    for (const auto& d : p.data_items) {
        if (d.storage != st) continue;
        os << (d.level < 10 ? "0" : "") << d.level << " " << d.name;
        if (!d.picture.empty()) os << " PIC " << d.picture;
        if (!d.values.empty()) os << " VALUE " << join(d.values);
        os << ".\n";
    }
}

bool has_items(const Program& p, DataItem::Storage st) {
    for (const auto& d : p.data_items)
        if (d.storage == st) return true;
    return false;
}

}  // namespace

std::string pretty_print(const Program& p) {
    std::ostringstream os;
    os << "IDENTIFICATION DIVISION.\n";
    os << "PROGRAM-ID. " << p.program_id << ".\n";
    const bool ws = has_items(p, DataItem::Storage::working);
    const bool ls = has_items(p, DataItem::Storage::linkage);
    if (ws || ls) {
        os << "DATA DIVISION.\n";
        if (ws) {
            os << "WORKING-STORAGE SECTION.\n";
            print_items(os, p, DataItem::Storage::working);
        }
        if (ls) {
            os << "LINKAGE SECTION.\n";
            print_items(os, p, DataItem::Storage::linkage);
        }
    }
    os << "PROCEDURE DIVISION";
    if (!p.using_params.empty()) {
        os << " USING";
        for (const auto& u : p.using_params) os << " " << u;
    }
    os << ".\n";
    std::string current_section;
    for (const auto& para : p.paragraphs) {
        os << "\n";
        if (para.section != current_section && !para.section.empty())
            os << para.section << " SECTION.\n";
        current_section = para.section;
        os << para.name << ".\n";
        if (para.statements.empty()) continue;
        std::ostringstream body;
        print_statements(body, para.statements, 1);
        std::string text = body.str();
        // terminate the paragraph's single canonical sentence
        if (!text.empty() && text.back() == '\n') text.pop_back();
        os << text << ".\n";
    }
    return os.str();
}

}  // namespace specfid::cobol
