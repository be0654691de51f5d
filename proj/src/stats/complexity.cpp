#include "specfid/stats/complexity.hpp"

#include <set>

#include "specfid/core/text.hpp"
#include "specfid/core/types.hpp"

namespace specfid::stats {

namespace {

std::size_t count_word(const std::string& hay, const std::string& word) {
    // Whole-word, case-insensitive occurrence count.
    const std::string t = text::lower(hay);
    const std::string w = text::lower(word);
    std::size_t count = 0, pos = 0;
    while ((pos = t.find(w, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !text::is_word_char(t[pos - 1]);
        const std::size_t end = pos + w.size();
        const bool right_ok = end == t.size() || !text::is_word_char(t[end]);
        if (left_ok && right_ok) ++count;
        ++pos;
    }
    return count;
}

}  // namespace

SpecComplexity spec_complexity(const std::string& txt) {
    SpecComplexity c;

    const std::vector<std::string> anchor_mentions = extract_anchor_ids(txt);
    const std::set<std::string> unique(anchor_mentions.begin(), anchor_mentions.end());
    c.anchors = unique.size();

    c.shall_clauses = count_word(txt, "shall");
    for (const char* kw : {"when", "if", "unless", "while", "until"})
        c.conditionals += count_word(txt, kw);

    const auto lines = text::split_lines(txt);
    c.total_lines = lines.size();
    for (const auto& line : lines) {
        const std::string t = text::trim(line);
        if (!t.empty() && t[0] == '#') ++c.section_headers;
    }
    return c;
}

void to_json(nlohmann::json& j, const SpecComplexity& c) {
    j = nlohmann::json{{"anchors", c.anchors},
                       {"shall_clauses", c.shall_clauses},
                       {"conditionals", c.conditionals},
                       {"section_headers", c.section_headers},
                       {"total_lines", c.total_lines}};
}

}  // namespace specfid::stats
