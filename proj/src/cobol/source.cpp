#include "specfid/cobol/source.hpp"

#include <cctype>
#include <filesystem>
#include <set>

#include "specfid/core/errors.hpp"
#include "specfid/core/io.hpp"
#include "specfid/core/text.hpp"

namespace fs = std::filesystem;

namespace specfid::cobol {

namespace {

bool blank(const std::string& s) {
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    return true;
}

bool fixed_sequence_area(const std::string& line) {
    // Columns 1-6: blanks and digits only.
    for (size_t i = 0; i < 6 && i < line.size(); ++i) {
        char c = line[i];
        if (c != ' ' && !std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

bool fixed_indicator(const std::string& line) {
    if (line.size() < 7) return true;  // short line: sequence area only
    char c = line[6];
    return c == ' ' || c == '*' || c == '/' || c == '-' || c == 'D' || c == 'd';
}

}  // namespace

bool detect_fixed_format(const std::string& source) {
    bool saw_line = false;
    for (const std::string& raw : text::split_lines(source)) {
        if (blank(raw)) continue;
        saw_line = true;
        if (!fixed_sequence_area(raw) || !fixed_indicator(raw)) return false;
    }
    return saw_line;
}

std::vector<SourceLine> normalize_source(const std::string& source) {
    const bool fixed = detect_fixed_format(source);
    std::vector<SourceLine> out;
    int n = 0;
    for (const std::string& raw : text::split_lines(source)) {
        ++n;
        if (fixed) {
            if (raw.size() <= 6 || blank(raw)) continue;
            char ind = raw[6];
            if (ind == '*' || ind == '/' || ind == 'D' || ind == 'd') continue;
            std::string body = raw.substr(7, raw.size() > 72 ? 72 - 7 : std::string::npos);
            // area through column 72 is space-padded so continuations splice
            // with the separator the reference format implies
            body.resize(72 - 7, ' ');
            if (ind == '-') {
                if (out.empty())
                    throw ParseError("continuation line with no predecessor", n);
                out.back().text += " " + text::trim(body);
                continue;
            }
            if (blank(body)) continue;
            out.push_back({body, n});
        } else {
            std::string body = raw;
            if (auto pos = body.find("*>"); pos != std::string::npos) body.erase(pos);
            std::string t = text::trim(body);
            if (t.empty() || t[0] == '*') continue;
            out.push_back({body, n});
        }
    }
    return out;
}

namespace {

// COPY member [.]; returns member name or empty if the line is no directive.
// A leading all-digit token is a fixed-format sequence number.
std::string copy_member(const std::string& line) {
    auto toks = text::split_ws(text::trim(line));
    size_t at = 0;
    if (!toks.empty() && toks[0].find_first_not_of("0123456789") == std::string::npos) at = 1;
    if (toks.size() < at + 2 || text::upper(toks[at]) != "COPY") return "";
    for (const auto& t : toks)
        if (text::upper(t) == "REPLACING")
            throw ValidationError("COPY REPLACING is not supported");
    std::string m = toks[at + 1];
    while (!m.empty() && m.back() == '.') m.pop_back();
    return m;
}

std::string find_member(const std::string& member, const std::vector<std::string>& dirs) {
    const std::string exts[] = {"", ".cpy", ".CPY", ".cbl", ".cob"};
    const std::string names[] = {member, text::upper(member), text::lower(member)};
    for (const auto& d : dirs)
        for (const auto& nm : names)
            for (const auto& ext : exts) {
                fs::path p = fs::path(d) / (nm + ext);
                if (fs::exists(p)) return p.string();
            }
    return "";
}

void expand_rec(const std::string& source, const std::vector<std::string>& dirs,
                std::vector<std::string>& chain, std::set<std::string>& active,
                std::string& out) {
    for (const std::string& line : text::split_lines(source)) {
        std::string member = copy_member(line);
        if (member.empty()) {
            out += line;
            out += '\n';
            continue;
        }
        std::string key = text::upper(member);
        if (active.count(key)) {
            std::string cyc;
            for (const auto& c : chain) cyc += c + " -> ";
            throw ValidationError("copybook cycle: " + cyc + member);
        }
        std::string path = find_member(member, dirs);
        if (path.empty())
            throw ValidationError("copybook not found: " + member +
                                        (chain.empty() ? "" : " (included from " + chain.back() + ")"));
        active.insert(key);
        chain.push_back(member);
        expand_rec(io::read_file(path), dirs, chain, active, out);
        chain.pop_back();
        active.erase(key);
    }
}

}  // namespace

std::string expand_copybooks(const std::string& source,
                             const std::vector<std::string>& search_dirs) {
    std::string out;
    std::vector<std::string> chain;
    std::set<std::string> active;
    expand_rec(source, search_dirs, chain, active, out);
    return out;
}

}  // namespace specfid::cobol
