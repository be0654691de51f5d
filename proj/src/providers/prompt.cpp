#include "specfid/providers/prompt.hpp"

#include <cctype>

#include "specfid/core/errors.hpp"

namespace specfid::providers {

std::string render_prompt(const std::string& template_text,
                          const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(template_text.size());
    std::string leftovers;
    for (std::size_t i = 0; i < template_text.size();) {
        if (template_text[i] != '{') {
            out.push_back(template_text[i++]);
            continue;
        }
        std::size_t close = template_text.find('}', i);
        if (close == std::string::npos) {
            out.append(template_text.substr(i));
            break;
        }
        std::string name = template_text.substr(i + 1, close - i - 1);
        bool ident = !name.empty();
        for (char c : name)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') ident = false;
        if (!ident) {  // not a placeholder, keep literal braces
            out.append(template_text.substr(i, close - i + 1));
            i = close + 1;
            continue;
        }
        auto it = values.find(name);
        if (it == values.end()) {
            if (!leftovers.empty()) leftovers += ", ";
            leftovers += name;
        } else {
            out += it->second;
        }
        i = close + 1;
    }
    if (!leftovers.empty())
        throw ValidationError("unfilled prompt placeholders: " + leftovers);
    return out;
}

}  // namespace specfid::providers
