#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace specfid::cobol {

// Supported statement subset. Anything else parses to `opaque`, carrying its
// source text; opaque nodes are counted, never dropped.
enum class StatementKind {
    move,
    add,
    if_stmt,
    evaluate,
    perform,
    perform_thru,
    go_to,
    call,
    goback,
    string_stmt,
    set_stmt,
    continue_stmt,
    xctl,
    display,
    opaque,
};

const char* to_string(StatementKind k);

struct Operand {
    enum class Kind { identifier, string_lit, number_lit, figurative };
    Kind kind = Kind::identifier;
    std::string text;  // name, literal body (unquoted), or figurative word

    bool is_identifier() const { return kind == Kind::identifier; }
    std::string display() const;
};

// Boolean condition tree. Level-88 condition names are resolved at parse
// time: a cond_name node keeps the original name plus the parent item and
// value list it stands for.
struct Condition {
    enum class Kind { relation, cond_name, logical_not, logical_and, logical_or };
    Kind kind = Kind::relation;

    // relation
    Operand lhs, rhs;
    std::string op;  // "=", "<>", ">", "<", ">=", "<="

    // cond_name
    std::string name;
    std::string parent;
    std::vector<Operand> values;

    std::vector<Condition> children;  // not: 1 child; and/or: >=2

    std::string display() const;
    // Identifiers this condition reads (parent item for cond_name nodes).
    void collect_reads(std::vector<std::string>& out) const;
};

struct Statement {
    StatementKind kind = StatementKind::opaque;
    int line_begin = 0;
    int line_end = 0;

    std::vector<Operand> srcs;  // operands read
    std::vector<Operand> dsts;  // identifiers written
    bool giving = false;        // ADD ... GIVING form (dsts not read)

    // if_stmt
    Condition cond;
    std::vector<Statement> then_block;
    std::vector<Statement> else_block;

    // evaluate
    std::string subject;  // "TRUE" or the subject operand's display text
    Operand subject_operand;
    bool subject_is_true = false;
    struct WhenArm {
        Condition cond;  // resolved arm condition (subject folded in)
        std::vector<Statement> block;
    };
    std::vector<WhenArm> arms;
    std::vector<Statement> other_block;
    bool has_other = false;

    // perform / perform_thru / go_to
    std::string target;
    std::string target_thru;

    // call / xctl
    Operand callee;
    bool transfer = false;
    std::vector<Operand> using_args;

    // string_stmt: srcs are fragments, delimiters parallel to srcs
    std::vector<Operand> delimiters;

    // set_stmt
    bool set_to_true = false;

    // opaque
    std::string text;

    std::string display() const;  // one-line label form
};

struct DataItem {
    int level = 1;
    std::string name;
    std::string picture;
    enum class Storage { working, linkage };
    Storage storage = Storage::working;
    std::vector<Operand> values;  // VALUE clause (88: the predicate values)
    std::string parent;           // for 88 items: the conditioned item
    int line = 0;
};

struct Paragraph {
    std::string name;
    std::string section;  // empty when outside any section
    std::vector<Statement> statements;
    int line_begin = 0;
    int line_end = 0;
};

struct Section {
    std::string name;
    int first_paragraph = 0;  // indexes into Program::paragraphs
    int last_paragraph = -1;  // inclusive; -1 = empty section
};

struct Program {
    std::string program_id;
    std::vector<DataItem> data_items;
    std::vector<Paragraph> paragraphs;
    std::vector<Section> sections;
    std::vector<std::string> using_params;  // PROCEDURE DIVISION USING order
    int opaque_count = 0;

    const DataItem* find_item(const std::string& name) const;
    bool is_linkage(const std::string& name) const;
    int paragraph_index(const std::string& name) const;  // -1 if absent
};

// Versioned AST serialization (one-way; the printer is the inverse path).
nlohmann::json ast_to_json(const Program& p);

}  // namespace specfid::cobol
