#include "specfid/providers/binding.hpp"

#include "specfid/core/errors.hpp"

namespace specfid {

Role role_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Role::reviser); ++i) {
        const auto r = static_cast<Role>(i);
        if (s == to_string(r)) return r;
    }
    throw ValidationError("unknown role: " + s);
}

}  // namespace specfid

namespace specfid::providers {

const char* to_string(Backend b) {
    switch (b) {
        case Backend::http: return "http";
        case Backend::simulated: return "simulated";
        case Backend::template_backend: return "template";
    }
    return "simulated";
}

Backend backend_from_string(const std::string& s) {
    if (s == "http") return Backend::http;
    if (s == "simulated") return Backend::simulated;
    if (s == "template") return Backend::template_backend;
    throw ValidationError("unknown backend: " + s);
}

std::map<Role, RoleBinding> validate_bindings(const std::vector<RoleBinding>& bindings) {
    std::map<Role, RoleBinding> out;
    for (const auto& b : bindings) {
        if (!out.emplace(b.role, b).second)
            throw ValidationError(std::string("role bound twice: ") + to_string(b.role));
    }
    for (int i = 0; i <= static_cast<int>(Role::reviser); ++i) {
        const auto r = static_cast<Role>(i);
        if (!out.count(r))
            throw ValidationError(std::string("role not bound: ") + to_string(r));
    }
    return out;
}

}  // namespace specfid::providers
