#pragma once

#include <map>
#include <string>

namespace specfid::judgement {

struct AnchorSpan {
    int line_begin = 0;  // 1-based, inclusive
    int line_end = 0;
};

// A candidate document B: raw text plus the anchor index. A line defines an
// anchor when its first token (after list markers) is an anchor id; mentions
// later in a line are references and never open a span. A span covers the
// contiguous non-blank block from the defining line and stops before the
// next definition, so spans never overlap.
struct SpecDocument {
    std::string text;
    std::map<std::string, AnchorSpan> anchors;
};

// Throws ValidationError when the same anchor id is defined twice.
SpecDocument make_spec_document(const std::string& text);
SpecDocument load_spec_document(const std::string& path);

// The span's lines joined with newlines; empty for unknown anchors.
std::string anchor_text(const SpecDocument& spec, const std::string& anchor_id);

}  // namespace specfid::judgement
