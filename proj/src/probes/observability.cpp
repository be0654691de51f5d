#include "specfid/probes/observability.hpp"

#include <cctype>

#include "specfid/core/io.hpp"
#include "specfid/core/text.hpp"

namespace specfid::probes {

std::vector<std::string> default_banned_lexicon() {
    return {"file",   "queue",  "buffer",  "paragraph", "record layout", "status code",
            "VSAM",   "cursor", "SQLCODE", "abend",     "copybook"};
}

std::vector<std::string> load_lexicon(const std::string& path) {
    std::vector<std::string> terms;
    for (const auto& line : text::split_lines(io::read_file(path))) {
        std::string t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        terms.push_back(t);
    }
    return terms;
}

namespace {

std::vector<std::string> word_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text::lower(s)) {
        if (text::is_word_char(c))
            cur.push_back(c);
        else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool numeric_token(const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// word-boundary term match; a trailing "code"/"codes" in a multiword term
// also matches a bare number, since codes surface numerically ("status 35")
bool matches_term(const std::string& truth, const std::string& term) {
    const auto words = word_tokens(term);
    if (words.empty()) return false;
    if (words.size() == 1) return text::contains_word(truth, words[0]);
    const auto tokens = word_tokens(truth);
    if (tokens.size() < words.size()) return false;
    for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < words.size(); ++j) {
            const std::string& w = words[j];
            const std::string& t = tokens[i + j];
            bool last = j + 1 == words.size();
            bool ok = t == w || (last && (w == "code" || w == "codes") && numeric_token(t));
            if (!ok) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

}  // namespace

ObservabilityVerdict observability_filter(const GraphFact& fact,
                                          const std::vector<std::string>& lexicon,
                                          const std::vector<std::string>& paragraph_names) {
    ObservabilityVerdict v;
    for (const auto& term : lexicon)
        if (matches_term(fact.truth, term)) v.rejected_terms.push_back(term);
    for (const auto& name : paragraph_names)
        if (text::contains_word(fact.truth, name)) v.rejected_terms.push_back(name);
    v.accepted = v.rejected_terms.empty();
    return v;
}

std::vector<std::string> paragraph_names(const cobol::Program& program) {
    std::vector<std::string> names;
    for (const auto& p : program.paragraphs) names.push_back(p.name);
    for (const auto& s : program.sections) names.push_back(s.name);
    return names;
}

std::vector<GraphFact> observable_facts(const cobol::Program& program,
                                        const graph::Acfg& acfg, const graph::Dfg& dfg,
                                        const graph::Sdg& sdg, Channel channel,
                                        const std::vector<std::string>& lexicon) {
    const auto names = paragraph_names(program);
    std::vector<GraphFact> out;
    for (auto& f : enumerate_facts(program, acfg, dfg, sdg, channel))
        if (observability_filter(f, lexicon, names).accepted) out.push_back(std::move(f));
    return out;
}

}  // namespace specfid::probes
