#include "specfid/probes/informalize.hpp"

#include "specfid/core/text.hpp"
#include "specfid/providers/prompt.hpp"

namespace specfid::probes {

namespace {

// Built-in informalizer prompt; a config template may override it at the
// CLI layer but the contract is identical.
const char* kDefaultPrompt =
    "Turn one program behaviour into a single short question a reader of the "
    "functional specification could answer. Ask about the behaviour; do not "
    "reveal the answer, do not invent detail, do not mention internal code "
    "structure. Reply with the question only.\n\n"
    "kind: {kind}\ncategory: {category}\ncondition: {condition}\n"
    "variable: {variable}\nbehaviour: {truth}\n";

std::string first_line(const std::string& s) {
    for (const auto& line : text::split_lines(s)) {
        std::string t = text::trim(line);
        if (t.empty() || t == "```") continue;
        if (t.size() >= 2 && t.front() == '"' && t.back() == '"')
            t = text::trim(t.substr(1, t.size() - 2));
        return t;
    }
    return "";
}

}  // namespace

std::string template_question(const GraphFact& fact) {
    switch (fact.fact_kind) {
        case FactKind::guard_effect:
            return "When " + fact.condition + ", what happens?";
        case FactKind::def_use_transform:
            return "Where does " + fact.variable + " get its value, and how is it used?";
        case FactKind::event_successor:
            if (fact.category == Category::flow)
                return "Where does control transfer next, and what does it carry?";
            if (!fact.condition.empty())
                return "What depends on the outcome of: " + fact.condition + "?";
            return "Which external program is involved, and what data does it receive?";
    }
    return "What happens?";
}

Probe informalize(const GraphFact& fact, TextProvider* provider) {
    Probe p;
    p.id = fact.id;
    p.truth = fact.truth;  // mechanical copy: the provider cannot touch these
    p.category = fact.category;
    p.channel = fact.channel;
    p.program = fact.program;
    if (provider == nullptr) {
        p.question = template_question(fact);
        return p;
    }
    std::string prompt = providers::render_prompt(
        kDefaultPrompt, {{"kind", to_string(fact.fact_kind)},
                         {"category", to_string(fact.category)},
                         {"condition", fact.condition},
                         {"variable", fact.variable},
                         {"truth", fact.truth}});
    Completion c = provider->complete(Role::informalizer, prompt);
    std::string q = first_line(c.text);
    p.question = q.empty() ? template_question(fact) : q;
    return p;
}

}  // namespace specfid::probes
