#include "specfid/cobol/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "specfid/cobol/source.hpp"
#include "specfid/core/errors.hpp"
#include "specfid/core/text.hpp"

namespace specfid::cobol {

namespace {

struct Token {
    enum class Kind { word, str, num, punct, eof };
    Kind kind = Kind::eof;
    std::string text;  // words uppercased; literals unquoted
    int line = 0;
};

const std::set<std::string> kVerbs = {
    "MOVE", "ADD", "IF", "EVALUATE", "PERFORM", "GO", "CALL", "XCTL", "GOBACK",
    "STRING", "SET", "CONTINUE", "DISPLAY", "EXEC", "COMPUTE", "SUBTRACT",
    "MULTIPLY", "DIVIDE", "READ", "WRITE", "OPEN", "CLOSE", "ACCEPT",
    "INITIALIZE", "INSPECT", "UNSTRING", "SEARCH", "STOP", "EXIT", "MERGE",
    "SORT", "RELEASE", "RETURN", "REWRITE", "DELETE", "START", "CANCEL",
    "ALTER", "NEXT", "INVOKE",
};

const std::set<std::string> kClauseWords = {
    "ELSE", "END-IF", "WHEN", "END-EVALUATE", "END-PERFORM", "END-STRING",
    "END-CALL", "END-ADD", "END-COMPUTE", "END-EXEC", "THRU", "THROUGH",
    "GIVING", "TO", "INTO", "DELIMITED", "USING", "UNTIL", "VARYING", "TIMES",
    "DEPENDING", "UPON", "SECTION", "DIVISION", "OVERFLOW", "EXCEPTION",
};

const std::set<std::string> kFiguratives = {
    "SPACE", "SPACES", "ZERO", "ZEROS", "ZEROES", "LOW-VALUE", "LOW-VALUES",
    "HIGH-VALUE", "HIGH-VALUES", "QUOTE", "QUOTES", "NULL", "NULLS",
};

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<Token> tokenize(const std::vector<SourceLine>& lines) {
    std::vector<Token> out;
    for (const auto& ln : lines) {
        const std::string& s = ln.text;
        size_t i = 0;
        while (i < s.size()) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == ';') {
                ++i;
                continue;
            }
            if (c == '\'' || c == '"') {
                char q = c;
                std::string body;
                size_t j = i + 1;
                bool closed = false;
                while (j < s.size()) {
                    if (s[j] == q) {
                        if (j + 1 < s.size() && s[j + 1] == q) {
                            body += q;
                            j += 2;
                            continue;
                        }
                        closed = true;
                        ++j;
                        break;
                    }
                    body += s[j++];
                }
                if (!closed) throw ParseError("unterminated literal", ln.line);
                out.push_back({Token::Kind::str, body, ln.line});
                i = j;
                continue;
            }
            if (std::isalnum(static_cast<unsigned char>(c))) {
                size_t j = i;
                while (j < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '-'))
                    ++j;
                std::string w = s.substr(i, j - i);
                if (all_digits(w) && j + 1 < s.size() && s[j] == '.' &&
                    std::isdigit(static_cast<unsigned char>(s[j + 1]))) {
                    size_t k = j + 1;
                    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                    w = s.substr(i, k - i);
                    j = k;
                }
                bool numeric = w.find_first_not_of("0123456789.") == std::string::npos;
                out.push_back({numeric ? Token::Kind::num : Token::Kind::word,
                               numeric ? w : text::upper(w), ln.line});
                i = j;
                continue;
            }
            if (c == '<' || c == '>') {
                if (i + 1 < s.size() && (s[i + 1] == '=' || (c == '<' && s[i + 1] == '>'))) {
                    out.push_back({Token::Kind::punct, s.substr(i, 2), ln.line});
                    i += 2;
                } else {
                    out.push_back({Token::Kind::punct, std::string(1, c), ln.line});
                    ++i;
                }
                continue;
            }
            out.push_back({Token::Kind::punct, std::string(1, c), ln.line});
            ++i;
        }
    }
    int last = lines.empty() ? 1 : lines.back().line;
    out.push_back({Token::Kind::eof, "", last});
    return out;
}

struct CondName {
    std::string parent;
    std::vector<Operand> values;
};

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    Program run() {
        parse_identification();
        if (seek_division("DATA")) parse_data_division();
        if (!seek_division("PROCEDURE"))
            throw ParseError("missing PROCEDURE DIVISION", cur().line);
        parse_procedure_division();
        prog_.opaque_count = 0;
        for (const auto& p : prog_.paragraphs) count_opaque(p.statements);
        return std::move(prog_);
    }

  private:
    std::vector<Token> t_;
    size_t i_ = 0;
    Program prog_;
    std::map<std::string, CondName> cond_names_;

    const Token& cur() const { return t_[std::min(i_, t_.size() - 1)]; }
    const Token& peek(size_t n = 0) const { return t_[std::min(i_ + n, t_.size() - 1)]; }
    bool eof() const { return cur().kind == Token::Kind::eof; }
    void advance() {
        if (!eof()) ++i_;
    }
    bool is_word(const std::string& w, size_t n = 0) const {
        return peek(n).kind == Token::Kind::word && peek(n).text == w;
    }
    bool is_punct(const std::string& p, size_t n = 0) const {
        return peek(n).kind == Token::Kind::punct && peek(n).text == p;
    }
    Token expect_word(const char* what) {
        if (cur().kind != Token::Kind::word)
            throw ParseError(std::string("expected ") + what + ", found '" + cur().text + "'",
                                   cur().line);
        Token t = cur();
        advance();
        return t;
    }
    void expect_punct(const std::string& p) {
        if (!is_punct(p))
            throw ParseError("expected '" + p + "', found '" + cur().text + "'", cur().line);
        advance();
    }

    // --- division scaffolding -------------------------------------------

    void parse_identification() {
        while (!eof()) {
            if (is_word("COPY"))
                throw ParseError("unexpanded COPY directive; expand copybooks first",
                                       cur().line);
            if (is_word("PROGRAM-ID")) {
                advance();
                if (is_punct(".")) advance();
                prog_.program_id = expect_word("program name").text;
                if (is_punct(".")) advance();
                return;
            }
            if (is_word("DIVISION", 1) && (is_word("DATA") || is_word("PROCEDURE"))) break;
            advance();
        }
        throw ParseError("missing PROGRAM-ID", t_.empty() ? 1 : t_[0].line);
    }

    bool seek_division(const std::string& name) {
        size_t save = i_;
        while (!eof()) {
            if (is_word(name) && is_word("DIVISION", 1)) {
                advance();
                advance();
                if (is_punct(".")) {
                    // PROCEDURE DIVISION USING handled by caller
                }
                return true;
            }
            if (is_word("PROCEDURE") && is_word("DIVISION", 1) && name != "PROCEDURE") {
                i_ = save;
                return false;
            }
            advance();
        }
        i_ = save;
        return false;
    }

    void parse_data_division() {
        auto storage = DataItem::Storage::working;
        std::string last_non88;
        while (!eof()) {
            if (is_word("PROCEDURE") && is_word("DIVISION", 1)) return;
            if (is_word("COPY"))
                throw ParseError("unexpanded COPY directive; expand copybooks first",
                                       cur().line);
            if (peek(0).kind == Token::Kind::word && is_word("SECTION", 1)) {
                std::string sec = cur().text;
                advance();
                advance();
                if (is_punct(".")) advance();
                storage = sec == "LINKAGE" ? DataItem::Storage::linkage
                                           : DataItem::Storage::working;
                continue;
            }
            // one entry: tokens up to '.'
            std::vector<Token> entry;
            while (!eof() && !is_punct(".")) {
                if (is_word("PROCEDURE") && is_word("DIVISION", 1)) break;
                entry.push_back(cur());
                advance();
            }
            if (is_punct(".")) advance();
            if (entry.empty()) continue;
            if (entry[0].kind != Token::Kind::num) continue;  // FD/SELECT etc: ignored
            parse_data_entry(entry, storage, last_non88);
        }
    }

    void parse_data_entry(const std::vector<Token>& e, DataItem::Storage storage,
                          std::string& last_non88) {
        DataItem d;
        d.storage = storage;
        d.line = e[0].line;
        int level = 0;
        try {
            level = std::stoi(e[0].text);
        } catch (...) {
            throw ParseError("bad level number '" + e[0].text + "'", e[0].line);
        }
        if (!((level >= 1 && level <= 49) || level == 77 || level == 88))
            throw ParseError("unsupported level number " + std::to_string(level),
                                   e[0].line);
        d.level = level;
        size_t j = 1;
        if (j < e.size() && e[j].kind == Token::Kind::word && e[j].text != "PIC" &&
            e[j].text != "PICTURE" && e[j].text != "VALUE" && e[j].text != "VALUES") {
            d.name = e[j].text;
            ++j;
        } else {
            d.name = "FILLER";
        }
        while (j < e.size()) {
            const std::string& w = e[j].text;
            if (e[j].kind == Token::Kind::word && (w == "PIC" || w == "PICTURE")) {
                ++j;
                if (j < e.size() && e[j].text == "IS") ++j;
                std::string pic;
                while (j < e.size()) {
                    const Token& tk = e[j];
                    if (tk.kind == Token::Kind::word &&
                        (tk.text == "VALUE" || tk.text == "VALUES" || tk.text == "OCCURS" ||
                         tk.text == "USAGE" || tk.text == "COMP" || tk.text == "COMP-3" ||
                         tk.text == "BINARY" || tk.text == "PACKED-DECIMAL" ||
                         tk.text == "REDEFINES" || tk.text == "SIGN" || tk.text == "JUSTIFIED" ||
                         tk.text == "JUST" || tk.text == "BLANK"))
                        break;
                    pic += tk.text;
                    ++j;
                }
                d.picture = pic;
                continue;
            }
            if (e[j].kind == Token::Kind::word && (w == "VALUE" || w == "VALUES")) {
                ++j;
                if (j < e.size() && e[j].text == "IS") ++j;
                if (j < e.size() && e[j].text == "ARE") ++j;
                while (j < e.size()) {
                    const Token& tk = e[j];
                    if (tk.kind == Token::Kind::word &&
                        (tk.text == "THRU" || tk.text == "THROUGH")) {
                        d.values.push_back({Operand::Kind::figurative, "THRU"});
                        ++j;
                        continue;
                    }
                    if (tk.kind == Token::Kind::str) {
                        d.values.push_back({Operand::Kind::string_lit, tk.text});
                        ++j;
                        continue;
                    }
                    if (tk.kind == Token::Kind::num) {
                        d.values.push_back({Operand::Kind::number_lit, tk.text});
                        ++j;
                        continue;
                    }
                    if (tk.kind == Token::Kind::word && kFiguratives.count(tk.text)) {
                        d.values.push_back({Operand::Kind::figurative, tk.text});
                        ++j;
                        continue;
                    }
                    break;
                }
                continue;
            }
            ++j;  // OCCURS n TIMES, USAGE clauses, REDEFINES x: skipped
        }
        if (d.level == 88) {
            if (last_non88.empty())
                throw ParseError("level 88 item '" + d.name + "' has no parent", d.line);
            d.parent = last_non88;
            cond_names_[d.name] = {d.parent, d.values};
        } else {
            last_non88 = d.name;
        }
        prog_.data_items.push_back(std::move(d));
    }

    // --- procedure division ---------------------------------------------

    bool at_paragraph_header() const {
        if (peek(0).kind != Token::Kind::word) return false;
        if (kVerbs.count(peek(0).text)) return false;
        if (is_word("SECTION", 1)) return true;
        return is_punct(".", 1);
    }

    bool at_end_program() const {
        return is_word("END") && is_word("PROGRAM", 1);
    }

    void parse_procedure_division() {
        if (is_word("USING")) {
            advance();
            while (peek(0).kind == Token::Kind::word && !is_punct("."))
                prog_.using_params.push_back(expect_word("parameter").text);
        }
        if (is_punct(".")) advance();

        std::string current_section;
        while (!eof() && !at_end_program()) {
            if (is_word("COPY"))
                throw ParseError("unexpanded COPY directive; expand copybooks first",
                                       cur().line);
            if (at_paragraph_header()) {
                Token name = cur();
                advance();
                if (is_word("SECTION")) {
                    advance();
                    expect_punct(".");
                    current_section = name.text;
                    prog_.sections.push_back(
                        {name.text, static_cast<int>(prog_.paragraphs.size()), -1});
                    continue;
                }
                expect_punct(".");
                Paragraph p;
                p.name = name.text;
                p.section = current_section;
                p.line_begin = name.line;
                p.line_end = name.line;
                prog_.paragraphs.push_back(std::move(p));
                if (!prog_.sections.empty() && !current_section.empty())
                    prog_.sections.back().last_paragraph =
                        static_cast<int>(prog_.paragraphs.size()) - 1;
                continue;
            }
            if (prog_.paragraphs.empty()) {
                Paragraph p;
                p.name = "ENTRY";
                p.line_begin = cur().line;
                p.line_end = cur().line;
                prog_.paragraphs.push_back(std::move(p));
            }
            Paragraph& para = prog_.paragraphs.back();
            auto stmts = parse_statement_list({});
            for (auto& s : stmts) {
                para.line_end = std::max(para.line_end, s.line_end);
                para.statements.push_back(std::move(s));
            }
            if (is_punct(".")) {
                para.line_end = std::max(para.line_end, cur().line);
                advance();
            } else if (!eof() && !at_end_program() && !at_paragraph_header()) {
                throw ParseError("expected '.', found '" + cur().text + "'", cur().line);
            }
        }
    }

    static bool in(const std::vector<std::string>& v, const std::string& w) {
        return std::find(v.begin(), v.end(), w) != v.end();
    }

    std::vector<Statement> parse_statement_list(const std::vector<std::string>& stops) {
        std::vector<Statement> out;
        while (!eof() && !is_punct(".")) {
            if (peek(0).kind == Token::Kind::word && in(stops, peek(0).text)) break;
            if (at_end_program()) break;
            out.push_back(parse_statement(stops));
        }
        return out;
    }

    [[noreturn]] void stray(const char* what) {
        throw ParseError(std::string(what) + " without matching opener", cur().line);
    }

    Statement parse_statement(const std::vector<std::string>& stops) {
        const Token& t = cur();
        if (t.kind != Token::Kind::word)
            return parse_opaque(stops, "");
        const std::string& v = t.text;
        if (v == "END-IF" || v == "ELSE") stray(v.c_str());
        if (v == "END-EVALUATE" || v == "WHEN") stray(v.c_str());
        if (v == "MOVE") return parse_move(stops);
        if (v == "ADD") return parse_add(stops);
        if (v == "IF") return parse_if(stops);
        if (v == "EVALUATE") return parse_evaluate(stops);
        if (v == "PERFORM") return parse_perform(stops);
        if (v == "GO") return parse_goto(stops);
        if (v == "CALL") return parse_call(stops);
        if (v == "XCTL") return parse_xctl();
        if (v == "GOBACK") return parse_simple(StatementKind::goback);
        if (v == "STOP") return parse_stop(stops);
        if (v == "EXIT") return parse_exit(stops);
        if (v == "STRING") return parse_string(stops);
        if (v == "SET") return parse_set(stops);
        if (v == "CONTINUE") return parse_simple(StatementKind::continue_stmt);
        if (v == "DISPLAY") return parse_display();
        if (v == "EXEC") return parse_exec();
        return parse_opaque(stops, "");
    }

    Statement parse_simple(StatementKind k) {
        Statement s;
        s.kind = k;
        s.line_begin = s.line_end = cur().line;
        advance();
        return s;
    }

    bool at_operand() const {
        const Token& t = peek(0);
        if (t.kind == Token::Kind::str || t.kind == Token::Kind::num) return true;
        if (t.kind == Token::Kind::punct && (t.text == "+" || t.text == "-") &&
            peek(1).kind == Token::Kind::num)
            return true;
        if (t.kind != Token::Kind::word) return false;
        if (kVerbs.count(t.text) || kClauseWords.count(t.text)) return kFiguratives.count(t.text) > 0;
        return true;
    }

    Operand parse_operand() {
        const Token& t = cur();
        if (t.kind == Token::Kind::str) {
            advance();
            return {Operand::Kind::string_lit, t.text};
        }
        if (t.kind == Token::Kind::num) {
            advance();
            return {Operand::Kind::number_lit, t.text};
        }
        if (t.kind == Token::Kind::punct && (t.text == "+" || t.text == "-") &&
            peek(1).kind == Token::Kind::num) {
            std::string sign = t.text == "-" ? "-" : "";
            advance();
            Operand o{Operand::Kind::number_lit, sign + cur().text};
            advance();
            return o;
        }
        if (t.kind != Token::Kind::word)
            throw ParseError("expected operand, found '" + t.text + "'", t.line);
        if (kFiguratives.count(t.text)) {
            advance();
            return {Operand::Kind::figurative, t.text};
        }
        if (t.text == "ALL") {
            advance();
            Operand lit = parse_operand();
            return {Operand::Kind::figurative, "ALL " + lit.display()};
        }
        std::string name = t.text;
        advance();
        if (t.text == "FUNCTION") {
            // intrinsic call folded into one non-identifier operand
            name += " " + expect_word("function name").text;
            if (is_punct("(")) name += absorb_parens();
            return {Operand::Kind::figurative, name};
        }
        while ((is_word("OF") || is_word("IN")) && peek(1).kind == Token::Kind::word) {
            advance();
            name += " OF " + expect_word("qualifier").text;
        }
        if (is_punct("(")) name += absorb_parens();
        return {Operand::Kind::identifier, name};
    }

    std::string absorb_parens() {
        std::string out = "(";
        expect_punct("(");
        int depth = 1;
        while (!eof() && depth > 0) {
            if (is_punct("(")) ++depth;
            if (is_punct(")")) {
                --depth;
                if (depth == 0) break;
            }
            if (!out.empty() && out.back() != '(') out += " ";
            out += cur().kind == Token::Kind::str ? "'" + cur().text + "'" : cur().text;
            advance();
        }
        expect_punct(")");
        return out + ")";
    }

    std::vector<Operand> parse_identifier_list() {
        std::vector<Operand> out;
        while (at_operand() && peek(0).kind == Token::Kind::word &&
               !kFiguratives.count(peek(0).text))
            out.push_back(parse_operand());
        return out;
    }

    Statement parse_move(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::move;
        s.line_begin = cur().line;
        advance();
        if (is_word("CORRESPONDING") || is_word("CORR")) return rewind_opaque(start, stops, "");
        s.srcs.push_back(parse_operand());
        if (!is_word("TO")) return rewind_opaque(start, stops, "");
        advance();
        s.dsts = parse_identifier_list();
        if (s.dsts.empty())
            throw ParseError("MOVE without target", cur().line);
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_add(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::add;
        s.line_begin = cur().line;
        advance();
        while (at_operand() && !is_word("TO") && !is_word("GIVING")) s.srcs.push_back(parse_operand());
        std::vector<Operand> pending;
        if (is_word("TO")) {
            advance();
            pending = parse_identifier_list();
        }
        if (is_word("GIVING")) {
            advance();
            s.giving = true;
            for (auto& p : pending) s.srcs.push_back(p);
            s.dsts = parse_identifier_list();
        } else {
            for (auto& p : pending) s.srcs.push_back(p);
            s.dsts = pending;
        }
        if (is_word("ON") || is_word("SIZE")) return rewind_opaque(start, stops, "END-ADD");
        if (is_word("END-ADD")) advance();
        if (s.dsts.empty()) return rewind_opaque(start, stops, "END-ADD");
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_if(const std::vector<std::string>& stops) {
        Statement s;
        s.kind = StatementKind::if_stmt;
        s.line_begin = cur().line;
        advance();
        s.cond = parse_condition();
        if (is_word("THEN")) advance();
        std::vector<std::string> inner = stops;
        inner.push_back("ELSE");
        inner.push_back("END-IF");
        s.then_block = parse_statement_list(inner);
        if (is_word("ELSE")) {
            advance();
            std::vector<std::string> els = stops;
            els.push_back("END-IF");
            s.else_block = parse_statement_list(els);
        }
        if (is_word("END-IF")) {
            s.line_end = cur().line;
            advance();
        } else {
            s.line_end = t_[i_ - 1].line;
        }
        return s;
    }

    Statement parse_evaluate(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::evaluate;
        s.line_begin = cur().line;
        advance();
        if (is_word("TRUE")) {
            s.subject_is_true = true;
            s.subject = "TRUE";
            advance();
        } else {
            s.subject_operand = parse_operand();
            s.subject = s.subject_operand.display();
        }
        if (is_word("ALSO")) return rewind_opaque(start, stops, "END-EVALUATE");

        std::vector<std::string> arm_stops = stops;
        arm_stops.push_back("WHEN");
        arm_stops.push_back("END-EVALUATE");
        while (is_word("WHEN")) {
            advance();
            if (is_word("OTHER")) {
                advance();
                s.has_other = true;
                std::vector<std::string> os = stops;
                os.push_back("END-EVALUATE");
                os.push_back("WHEN");
                s.other_block = parse_statement_list(os);
                if (is_word("WHEN"))
                    throw ParseError("WHEN after WHEN OTHER", cur().line);
                break;
            }
            Condition c = parse_when_condition(s);
            while (is_word("WHEN") && !is_word("OTHER", 1)) {
                // stacked WHENs share the following block
                advance();
                Condition c2 = parse_when_condition(s);
                Condition both;
                both.kind = Condition::Kind::logical_or;
                both.children.push_back(std::move(c));
                both.children.push_back(std::move(c2));
                c = std::move(both);
            }
            Statement::WhenArm arm;
            arm.cond = std::move(c);
            arm.block = parse_statement_list(arm_stops);
            s.arms.push_back(std::move(arm));
        }
        if (s.arms.empty() && !s.has_other)
            throw ParseError("EVALUATE with no WHEN arm", s.line_begin);
        if (is_word("END-EVALUATE")) {
            s.line_end = cur().line;
            advance();
        } else if (is_punct(".") || (peek(0).kind == Token::Kind::word && in(stops, peek(0).text))) {
            s.line_end = t_[i_ - 1].line;
        } else {
            throw ParseError("unterminated EVALUATE (expected END-EVALUATE)", cur().line);
        }
        return s;
    }

    Condition parse_when_condition(const Statement& ev) {
        if (ev.subject_is_true) return parse_condition();
        Operand lo = parse_operand();
        if (is_word("THRU") || is_word("THROUGH")) {
            advance();
            Operand hi = parse_operand();
            Condition range;
            range.kind = Condition::Kind::logical_and;
            Condition a;
            a.kind = Condition::Kind::relation;
            a.lhs = ev.subject_operand;
            a.op = ">=";
            a.rhs = lo;
            Condition b;
            b.kind = Condition::Kind::relation;
            b.lhs = ev.subject_operand;
            b.op = "<=";
            b.rhs = hi;
            range.children.push_back(std::move(a));
            range.children.push_back(std::move(b));
            return range;
        }
        Condition c;
        c.kind = Condition::Kind::relation;
        c.lhs = ev.subject_operand;
        c.op = "=";
        c.rhs = lo;
        return c;
    }

    Statement parse_perform(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::perform;
        s.line_begin = cur().line;
        advance();
        if (peek(0).kind != Token::Kind::word || kVerbs.count(peek(0).text) ||
            is_word("UNTIL") || is_word("VARYING") || peek(0).kind == Token::Kind::num)
            return rewind_opaque(start, stops, "END-PERFORM");
        s.target = expect_word("paragraph name").text;
        if (is_word("THRU") || is_word("THROUGH")) {
            advance();
            s.kind = StatementKind::perform_thru;
            s.target_thru = expect_word("paragraph name").text;
        }
        if (is_word("UNTIL") || is_word("VARYING") || is_word("TIMES") ||
            peek(0).kind == Token::Kind::num)
            return rewind_opaque(start, stops, "END-PERFORM");
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_goto(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::go_to;
        s.line_begin = cur().line;
        advance();
        if (is_word("TO")) advance();
        s.target = expect_word("paragraph name").text;
        if (is_word("DEPENDING") || (peek(0).kind == Token::Kind::word &&
                                     !kVerbs.count(peek(0).text) &&
                                     !kClauseWords.count(peek(0).text) && !at_boundary(stops)))
            return rewind_opaque(start, stops, "");
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    bool at_boundary(const std::vector<std::string>& stops) const {
        if (eof() || is_punct(".")) return true;
        return peek(0).kind == Token::Kind::word && in(stops, peek(0).text);
    }

    Statement parse_call(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::call;
        s.line_begin = cur().line;
        advance();
        s.callee = parse_operand();
        if (is_word("USING")) {
            advance();
            while (is_word("BY") || is_word("REFERENCE") || is_word("CONTENT") || is_word("VALUE"))
                advance();
            while (at_operand()) {
                s.using_args.push_back(parse_operand());
                while (is_word("BY") || is_word("REFERENCE") || is_word("CONTENT") ||
                       is_word("VALUE"))
                    advance();
            }
        }
        if (is_word("ON") || is_word("EXCEPTION") || is_word("OVERFLOW"))
            return rewind_opaque(start, stops, "END-CALL");
        if (is_word("END-CALL")) advance();
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_xctl() {
        Statement s;
        s.kind = StatementKind::xctl;
        s.transfer = true;
        s.line_begin = cur().line;
        advance();
        s.callee = parse_operand();
        if (is_word("USING")) {
            advance();
            while (at_operand()) s.using_args.push_back(parse_operand());
        }
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_stop(const std::vector<std::string>& stops) {
        // STOP RUN behaves as a program exit in this subset
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::goback;
        s.line_begin = cur().line;
        advance();
        if (!is_word("RUN")) return rewind_opaque(start, stops, "");
        s.line_end = cur().line;
        advance();
        return s;
    }

    Statement parse_exit(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.line_begin = cur().line;
        advance();
        if (is_word("PROGRAM")) {
            s.kind = StatementKind::goback;
            s.line_end = cur().line;
            advance();
            return s;
        }
        if (at_boundary(stops) || at_paragraph_header()) {
            s.kind = StatementKind::continue_stmt;  // EXIT paragraph filler
            s.line_end = s.line_begin;
            return s;
        }
        return rewind_opaque(start, stops, "");
    }

    Statement parse_string(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::string_stmt;
        s.line_begin = cur().line;
        advance();
        while (!is_word("INTO")) {
            std::vector<Operand> frags;
            while (at_operand() && !is_word("DELIMITED") && !is_word("INTO"))
                frags.push_back(parse_operand());
            if (frags.empty()) return rewind_opaque(start, stops, "END-STRING");
            Operand delim{Operand::Kind::figurative, "SIZE"};
            if (is_word("DELIMITED")) {
                advance();
                if (is_word("BY")) advance();
                if (is_word("SIZE")) {
                    advance();
                    delim = {Operand::Kind::figurative, "SIZE"};
                } else {
                    delim = parse_operand();
                }
            }
            for (auto& f : frags) {
                s.srcs.push_back(f);
                s.delimiters.push_back(delim);
            }
            if (!is_word("DELIMITED") && !is_word("INTO") && !at_operand())
                return rewind_opaque(start, stops, "END-STRING");
        }
        advance();  // INTO
        Operand dst = parse_operand();
        if (!dst.is_identifier())
            throw ParseError("STRING target must be an identifier", cur().line);
        s.dsts.push_back(dst);
        if (is_word("WITH")) advance();
        if (is_word("POINTER")) {
            advance();
            Operand p = parse_operand();
            s.srcs.push_back(p);
            s.delimiters.push_back({Operand::Kind::figurative, "POINTER"});
            s.dsts.push_back(p);
        }
        if (is_word("ON") || is_word("OVERFLOW") || is_word("NOT"))
            return rewind_opaque(start, stops, "END-STRING");
        if (is_word("END-STRING")) advance();
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_set(const std::vector<std::string>& stops) {
        size_t start = i_;
        Statement s;
        s.kind = StatementKind::set_stmt;
        s.line_begin = cur().line;
        advance();
        s.dsts = parse_identifier_list();
        if (s.dsts.empty() || !is_word("TO")) return rewind_opaque(start, stops, "");
        advance();
        if (is_word("TRUE")) {
            advance();
            s.set_to_true = true;
        } else {
            if (is_word("UP") || is_word("DOWN")) return rewind_opaque(start, stops, "");
            s.srcs.push_back(parse_operand());
        }
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_display() {
        Statement s;
        s.kind = StatementKind::display;
        s.line_begin = cur().line;
        advance();
        while (at_operand()) s.srcs.push_back(parse_operand());
        if (is_word("UPON")) {
            advance();
            if (peek(0).kind == Token::Kind::word) advance();
        }
        if (is_word("WITH")) {
            advance();
            while (is_word("NO") || is_word("ADVANCING")) advance();
        }
        s.line_end = t_[i_ - 1].line;
        return s;
    }

    Statement parse_exec() {
        Statement s;
        s.line_begin = cur().line;
        std::vector<Token> body;
        body.push_back(cur());
        advance();
        while (!eof() && !is_word("END-EXEC")) {
            body.push_back(cur());
            advance();
        }
        if (!is_word("END-EXEC"))
            throw ParseError("EXEC without END-EXEC", s.line_begin);
        body.push_back(cur());
        s.line_end = cur().line;
        advance();

        // EXEC CICS XCTL/LINK PROGRAM(x) [COMMAREA(y)] maps onto the call subset
        if (body.size() >= 3 && body[1].text == "CICS" &&
            (body[2].text == "XCTL" || body[2].text == "LINK")) {
            Statement c;
            c.line_begin = s.line_begin;
            c.line_end = s.line_end;
            c.kind = body[2].text == "XCTL" ? StatementKind::xctl : StatementKind::call;
            c.transfer = body[2].text == "XCTL";
            for (size_t k = 3; k + 2 < body.size(); ++k) {
                if (body[k].kind != Token::Kind::word) continue;
                if ((body[k].text == "PROGRAM" || body[k].text == "COMMAREA") &&
                    body[k + 1].text == "(") {
                    const Token& arg = body[k + 2];
                    Operand o;
                    o.text = arg.text;
                    o.kind = arg.kind == Token::Kind::str  ? Operand::Kind::string_lit
                             : arg.kind == Token::Kind::num ? Operand::Kind::number_lit
                                                            : Operand::Kind::identifier;
                    if (body[k].text == "PROGRAM")
                        c.callee = o;
                    else
                        c.using_args.push_back(o);
                }
            }
            if (!c.callee.text.empty()) return c;
        }
        s.kind = StatementKind::opaque;
        std::string text;
        for (const auto& tk : body) {
            if (!text.empty()) text += " ";
            text += tk.kind == Token::Kind::str ? "'" + tk.text + "'" : tk.text;
        }
        s.text = text;
        return s;
    }

    Statement rewind_opaque(size_t start, const std::vector<std::string>& stops,
                            const std::string& ender) {
        i_ = start;
        return parse_opaque(stops, ender);
    }

    Statement parse_opaque(const std::vector<std::string>& stops, const std::string& ender) {
        Statement s;
        s.kind = StatementKind::opaque;
        s.line_begin = cur().line;
        std::string text;
        while (!eof() && !is_punct(".")) {
            if (peek(0).kind == Token::Kind::word) {
                const std::string& w = peek(0).text;
                if (!ender.empty() && w == ender) {
                    if (!text.empty()) text += " ";
                    text += w;
                    s.line_end = cur().line;
                    advance();
                    s.text = text;
                    return s;
                }
                if (in(stops, w) || w == "ELSE" || w == "END-IF" || w == "WHEN" ||
                    w == "END-EVALUATE")
                    break;
                // without a dedicated scope ender, the next verb starts the
                // next statement; with one (inline PERFORM etc) verbs belong
                // to the absorbed block
                if (ender.empty() && !text.empty() && kVerbs.count(w)) break;
            }
            if (!text.empty()) text += " ";
            text += cur().kind == Token::Kind::str ? "'" + cur().text + "'" : cur().text;
            s.line_end = cur().line;
            advance();
        }
        if (text.empty())
            throw ParseError("unparsable statement at '" + cur().text + "'", cur().line);
        s.text = text;
        return s;
    }

    // --- conditions -------------------------------------------------------

    Condition parse_condition() { return parse_or(); }

    Condition parse_or() {
        Condition left = parse_and();
        while (is_word("OR")) {
            advance();
            Condition right = parse_and();
            Condition top;
            top.kind = Condition::Kind::logical_or;
            top.children.push_back(std::move(left));
            top.children.push_back(std::move(right));
            left = std::move(top);
        }
        return left;
    }

    Condition parse_and() {
        Condition left = parse_unary();
        while (is_word("AND")) {
            advance();
            Condition right = parse_unary();
            Condition top;
            top.kind = Condition::Kind::logical_and;
            top.children.push_back(std::move(left));
            top.children.push_back(std::move(right));
            left = std::move(top);
        }
        return left;
    }

    Condition parse_unary() {
        if (is_word("NOT")) {
            advance();
            Condition n;
            n.kind = Condition::Kind::logical_not;
            n.children.push_back(parse_unary());
            return n;
        }
        if (is_punct("(")) {
            advance();
            Condition c = parse_condition();
            expect_punct(")");
            return c;
        }
        return parse_relation_or_name();
    }

    static std::string negate_op(const std::string& op) {
        if (op == "=") return "<>";
        if (op == "<>") return "=";
        if (op == ">") return "<=";
        if (op == "<") return ">=";
        if (op == ">=") return "<";
        if (op == "<=") return ">";
        return op;
    }

    // Returns empty string when no relational operator is present.
    std::string try_relop() {
        if (peek(0).kind == Token::Kind::punct) {
            const std::string& p = peek(0).text;
            if (p == "=" || p == "<" || p == ">" || p == "<=" || p == ">=" || p == "<>") {
                advance();
                return p;
            }
            return "";
        }
        if (peek(0).kind != Token::Kind::word) return "";
        const std::string& w = peek(0).text;
        auto eat_to_than = [&] {
            if (is_word("TO") || is_word("THAN")) advance();
        };
        if (w == "EQUAL" || w == "EQUALS") {
            advance();
            eat_to_than();
            return std::string("=");
        }
        if (w == "GREATER") {
            advance();
            eat_to_than();
            if (is_word("OR") && is_word("EQUAL", 1)) {
                advance();
                advance();
                eat_to_than();
                return std::string(">=");
            }
            return std::string(">");
        }
        if (w == "LESS") {
            advance();
            eat_to_than();
            if (is_word("OR") && is_word("EQUAL", 1)) {
                advance();
                advance();
                eat_to_than();
                return std::string("<=");
            }
            return std::string("<");
        }
        return "";
    }

    bool abbrev_value_next() {
        // "X = A OR B": continuation value with no operator of its own
        if (!(is_word("OR") || is_word("AND"))) return false;
        const Token& v = peek(1);
        bool valueish = v.kind == Token::Kind::str || v.kind == Token::Kind::num ||
                        (v.kind == Token::Kind::word && kFiguratives.count(v.text));
        if (!valueish) return false;
        const Token& after = peek(2);
        if (after.kind == Token::Kind::punct &&
            (after.text == "=" || after.text == "<" || after.text == ">" || after.text == "<=" ||
             after.text == ">=" || after.text == "<>"))
            return false;
        return true;
    }

    Condition parse_relation_or_name() {
        Operand lhs = parse_operand();
        if (is_word("IS")) advance();
        bool neg = false;
        if (is_word("NOT")) {
            neg = true;
            advance();
        }
        std::string op = try_relop();
        Condition node;
        if (op.empty()) {
            if (is_word("NUMERIC") || is_word("ALPHABETIC") || is_word("ALPHANUMERIC")) {
                node.kind = Condition::Kind::relation;
                node.lhs = lhs;
                node.op = "IS";
                node.rhs = {Operand::Kind::figurative, cur().text};
                advance();
                if (neg) {
                    Condition n;
                    n.kind = Condition::Kind::logical_not;
                    n.children.push_back(std::move(node));
                    return n;
                }
            } else if (neg) {
                throw ParseError("expected relational operator after NOT", cur().line);
            } else {
                if (!lhs.is_identifier())
                    throw ParseError("expected condition, found '" + lhs.display() + "'",
                                           cur().line);
                auto it = cond_names_.find(lhs.text);
                if (it == cond_names_.end())
                    throw ParseError("unknown condition name '" + lhs.text + "'",
                                           t_[i_ - 1].line);
                node.kind = Condition::Kind::cond_name;
                node.name = lhs.text;
                node.parent = it->second.parent;
                node.values = it->second.values;
            }
        } else {
            node.kind = Condition::Kind::relation;
            node.lhs = lhs;
            node.op = neg ? negate_op(op) : op;
            node.rhs = parse_operand();
        }
        // abbreviated combined relation: lhs op a OR b [OR c ...]
        while (node.kind == Condition::Kind::relation && abbrev_value_next()) {
            bool is_or = is_word("OR");
            advance();
            Operand v = parse_operand();
            Condition extra;
            extra.kind = Condition::Kind::relation;
            extra.lhs = node.lhs;
            extra.op = node.op;
            extra.rhs = v;
            Condition comb;
            comb.kind = is_or ? Condition::Kind::logical_or : Condition::Kind::logical_and;
            comb.children.push_back(std::move(node));
            comb.children.push_back(std::move(extra));
            node = std::move(comb);
            break;  // further OR values handled by parse_or on the combined node
        }
        return node;
    }

    void count_opaque(const std::vector<Statement>& v) {
        for (const auto& s : v) {
            if (s.kind == StatementKind::opaque) ++prog_.opaque_count;
            count_opaque(s.then_block);
            count_opaque(s.else_block);
            for (const auto& a : s.arms) count_opaque(a.block);
            count_opaque(s.other_block);
        }
    }
};

}  // namespace

Program parse(const std::string& source) {
    auto lines = normalize_source(source);
    if (lines.empty()) throw ParseError("empty program", 1);
    return Parser(tokenize(lines)).run();
}

Program parse(const std::string& source, const std::vector<std::string>& copy_dirs) {
    return parse(expand_copybooks(source, copy_dirs));
}

}  // namespace specfid::cobol
