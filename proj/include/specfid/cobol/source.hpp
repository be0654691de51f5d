#pragma once

#include <string>
#include <vector>

namespace specfid::cobol {

// A source line after reference-format handling. `line` is 1-based and
// refers to the text handed to normalize_source (post copybook expansion).
struct SourceLine {
    std::string text;
    int line = 0;
};

// Fixed reference format is detected per file: every non-blank line must
// carry a sequence area (columns 1-6 all blank or all digits) and a known
// indicator in column 7 (space, '*', '/', '-', or 'D'). Files that start
// code in column 1 fail that test and are treated as free format.
bool detect_fixed_format(const std::string& source);

// Strips sequence area and columns 73-80 in fixed format, drops comment
// lines ('*' or '/' indicator; "*>" in free format), joins '-' continuation
// lines onto their predecessor. Original line numbers are preserved.
std::vector<SourceLine> normalize_source(const std::string& source);

// Textual COPY expansion. Replaces each `COPY member.` directive line with
// the member file's text, searching `search_dirs` in order for
// member{,.cpy,.CPY,.cbl,.cob} (exact, upper, lower case). Nested copies
// are expanded recursively; a cycle or a missing member raises
// ValidationError naming the member and include chain.
std::string expand_copybooks(const std::string& source,
                             const std::vector<std::string>& search_dirs);

}  // namespace specfid::cobol
