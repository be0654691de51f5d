#pragma once

#include <map>
#include <string>

namespace specfid::providers {

// Fills {placeholder} slots in a prompt template. Every placeholder in the
// template must be covered by the value map; leftovers raise
// ValidationError naming the missing keys.
std::string render_prompt(const std::string& template_text,
                          const std::map<std::string, std::string>& values);

}  // namespace specfid::providers
