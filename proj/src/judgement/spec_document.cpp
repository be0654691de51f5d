#include "specfid/judgement/spec_document.hpp"

#include <vector>

#include "specfid/core/errors.hpp"
#include "specfid/core/io.hpp"
#include "specfid/core/text.hpp"
#include "specfid/core/types.hpp"

namespace specfid::judgement {

namespace {

// the anchor id leading the line, if any; list markers and a trailing
// ':' or '.' are tolerated
std::string leading_anchor(const std::string& line) {
    std::string t = text::trim(line);
    while (!t.empty() && (t[0] == '-' || t[0] == '*' || t[0] == '#'))
        t = text::trim(t.substr(1));
    const auto space = t.find_first_of(" \t");
    std::string tok = space == std::string::npos ? t : t.substr(0, space);
    while (!tok.empty() && (tok.back() == ':' || tok.back() == '.')) tok.pop_back();
    return is_anchor_id(tok) ? tok : "";
}

}  // namespace

SpecDocument make_spec_document(const std::string& text) {
    SpecDocument doc;
    doc.text = text;
    const auto lines = text::split_lines(text);

    std::vector<std::pair<std::string, int>> defs;  // (anchor, 1-based line)
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string a = leading_anchor(lines[i]);
        if (a.empty()) continue;
        if (doc.anchors.count(a)) throw ValidationError("duplicate anchor " + a);
        doc.anchors[a] = AnchorSpan{static_cast<int>(i) + 1, static_cast<int>(i) + 1};
        defs.emplace_back(a, static_cast<int>(i) + 1);
    }

    for (const auto& [anchor, begin] : defs) {
        int end = begin;
        while (static_cast<std::size_t>(end) < lines.size()) {
            const std::string& next = lines[end];  // 0-based index of line end+1
            if (text::trim(next).empty() || !leading_anchor(next).empty()) break;
            ++end;
        }
        doc.anchors[anchor].line_end = end;
    }
    return doc;
}

SpecDocument load_spec_document(const std::string& path) {
    return make_spec_document(io::read_file(path));
}

std::string anchor_text(const SpecDocument& spec, const std::string& anchor_id) {
    const auto it = spec.anchors.find(anchor_id);
    if (it == spec.anchors.end()) return "";
    const auto lines = text::split_lines(spec.text);
    std::vector<std::string> out;
    for (int i = it->second.line_begin; i <= it->second.line_end; ++i)
        out.push_back(lines[static_cast<std::size_t>(i) - 1]);
    return text::join(out, "\n");
}

}  // namespace specfid::judgement
