#pragma once

#include <string>

#include "specfid/cobol/ast.hpp"

namespace specfid::cobol {

// Emits a canonical free-format rendering of the program. Parsing the
// output yields a structurally identical AST (line numbers aside); opaque
// statements are reproduced verbatim so nothing is lost on a round trip.
std::string pretty_print(const Program& p);

}  // namespace specfid::cobol
