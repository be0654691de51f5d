#pragma once

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

namespace specfid::stats {

// Size/shape metrics of a requirements document.
struct SpecComplexity {
    std::size_t anchors = 0;          // distinct anchor ids
    std::size_t shall_clauses = 0;    // case-insensitive whole-word "shall"
    std::size_t conditionals = 0;     // when/if/unless/while/until tokens
    std::size_t section_headers = 0;  // markdown '#' heading lines
    std::size_t total_lines = 0;
};

SpecComplexity spec_complexity(const std::string& text);

void to_json(nlohmann::json& j, const SpecComplexity& c);

}  // namespace specfid::stats
