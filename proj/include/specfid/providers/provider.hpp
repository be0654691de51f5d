#pragma once

#include <cstddef>
#include <string>

#include "specfid/core/errors.hpp"
#include "specfid/core/types.hpp"

namespace specfid {

// The five LLM roles. Every role is bound to exactly one backend per run.
enum class Role { generator, informalizer, judge, comparator, reviser };

inline const char* to_string(Role r) {
    switch (r) {
        case Role::generator: return "generator";
        case Role::informalizer: return "informalizer";
        case Role::judge: return "judge";
        case Role::comparator: return "comparator";
        case Role::reviser: return "reviser";
    }
    return "generator";
}

Role role_from_string(const std::string& s);

struct Completion {
    std::string text;
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
};

// Text-completion backend. Implementations: HTTP wire client, deterministic
// simulation. Throws ProviderError on failure; callers decide retry policy.
class TextProvider {
  public:
    virtual ~TextProvider() = default;
    virtual Completion complete(Role role, const std::string& prompt) = 0;
};

// Answer-pair comparison backend (the comparator role, typed).
class AnswerComparator {
  public:
    virtual ~AnswerComparator() = default;
    virtual CompareLabel compare(const std::string& a, const std::string& b) = 0;
};

}  // namespace specfid
