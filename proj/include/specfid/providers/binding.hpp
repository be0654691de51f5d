#pragma once

#include <map>
#include <string>
#include <vector>

#include "specfid/providers/provider.hpp"

namespace specfid::providers {

enum class Backend { http, simulated, template_backend };

const char* to_string(Backend b);
Backend backend_from_string(const std::string& s);

// One LLM role wired to one backend. http rows carry the wire options;
// simulated rows carry the world parameters they need.
struct RoleBinding {
    Role role = Role::generator;
    Backend backend = Backend::simulated;
    std::string endpoint;              // http
    std::string model;                 // http
    std::string prompt_template_path;  // http / template
    std::map<std::string, double> params;  // simulation knobs (pi, r, d, ...)
};

// Every role bound exactly once; anything else is a ValidationError.
std::map<Role, RoleBinding> validate_bindings(const std::vector<RoleBinding>& bindings);

}  // namespace specfid::providers
