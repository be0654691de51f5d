#pragma once

#include <string>
#include <vector>

#include "specfid/cobol/ast.hpp"

namespace specfid::cobol {

// Parses one program of the supported subset. The source may be fixed or
// free reference format (auto-detected). COPY directives must be expanded
// first (see expand_copybooks); hitting one here is a parse error.
// Unsupported statements become opaque nodes with their text preserved.
// Structural faults (unbalanced END-IF/END-EVALUATE, missing PROGRAM-ID,
// bad level numbers, unknown condition names) raise ParseError with the
// offending line number.
Program parse(const std::string& source);

// Convenience: expand copybooks from search_dirs, then parse.
Program parse(const std::string& source, const std::vector<std::string>& copy_dirs);

}  // namespace specfid::cobol
