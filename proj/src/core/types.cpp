#include "specfid/core/types.hpp"

#include <cctype>
#include <set>

#include "specfid/core/errors.hpp"

namespace specfid {

const char* to_string(Category c) {
    switch (c) {
        case Category::precondition: return "precondition";
        case Category::computation: return "computation";
        case Category::branching: return "branching";
        case Category::guard: return "guard";
        case Category::output: return "output";
        case Category::dependency: return "dependency";
        case Category::negative: return "negative";
        case Category::boundary: return "boundary";
        case Category::data: return "data";
        case Category::flow: return "flow";
    }
    return "?";
}

const char* to_string(Channel c) {
    switch (c) {
        case Channel::llm: return "llm";
        case Channel::cfg: return "cfg";
        case Channel::dfg: return "dfg";
        case Channel::sdg: return "sdg";
    }
    return "?";
}

const char* to_string(VerdictValue v) {
    switch (v) {
        case VerdictValue::agree: return "agree";
        case VerdictValue::contradict: return "contradict";
        case VerdictValue::gap: return "gap";
    }
    return "?";
}

const char* to_string(Confidence c) {
    switch (c) {
        case Confidence::confirmed: return "confirmed";
        case Confidence::contradicted: return "contradicted";
        case Confidence::not_addressed: return "not_addressed";
    }
    return "?";
}

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::fix: return "fix";
        case ActionKind::add: return "add";
        case ActionKind::remove: return "remove";
    }
    return "?";
}

const char* to_string(CompareLabel l) {
    switch (l) {
        case CompareLabel::equivalent: return "equivalent";
        case CompareLabel::contradictory: return "contradictory";
        case CompareLabel::unrelated: return "unrelated";
    }
    return "?";
}

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& s) {
    throw ValidationError(std::string("unknown ") + what + ": \"" + s + "\"");
}

}  // namespace

Category category_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Category::flow); ++i) {
        const auto c = static_cast<Category>(i);
        if (s == to_string(c)) return c;
    }
    bad_enum("category", s);
}

Channel channel_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Channel::sdg); ++i) {
        const auto c = static_cast<Channel>(i);
        if (s == to_string(c)) return c;
    }
    bad_enum("channel", s);
}

VerdictValue verdict_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(VerdictValue::gap); ++i) {
        const auto v = static_cast<VerdictValue>(i);
        if (s == to_string(v)) return v;
    }
    bad_enum("verdict", s);
}

Confidence confidence_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(Confidence::not_addressed); ++i) {
        const auto c = static_cast<Confidence>(i);
        if (s == to_string(c)) return c;
    }
    bad_enum("confidence", s);
}

ActionKind action_kind_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(ActionKind::remove); ++i) {
        const auto k = static_cast<ActionKind>(i);
        if (s == to_string(k)) return k;
    }
    bad_enum("action kind", s);
}

CompareLabel compare_label_from_string(const std::string& s) {
    for (int i = 0; i <= static_cast<int>(CompareLabel::unrelated); ++i) {
        const auto l = static_cast<CompareLabel>(i);
        if (s == to_string(l)) return l;
    }
    bad_enum("compare label", s);
}

bool channel_admits_category(Channel ch, Category cat) {
    switch (ch) {
        case Channel::llm: return true;
        case Channel::cfg: return cat == Category::guard;
        case Channel::dfg: return cat == Category::data || cat == Category::computation;
        case Channel::sdg: return cat == Category::flow || cat == Category::dependency;
    }
    return false;
}

// Anchor syntax: REQ-[A-Z0-9]+-[0-9]{3}.
bool is_anchor_id(const std::string& s) {
    if (s.size() < 4 + 1 + 1 + 3 || s.compare(0, 4, "REQ-") != 0) return false;
    const std::size_t last_dash = s.rfind('-');
    if (last_dash == std::string::npos || last_dash < 4) return false;
    const std::string mid = s.substr(4, last_dash - 4);
    const std::string num = s.substr(last_dash + 1);
    if (mid.empty() || num.size() != 3) return false;
    for (char c : mid) {
        if (!(std::isupper(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)))) return false;
    }
    for (char c : num) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::vector<std::string> extract_anchor_ids(const std::string& txt) {
    std::vector<std::string> out;
    const std::size_t n = txt.size();
    auto is_digit = [&](std::size_t i) {
        return i < n && std::isdigit(static_cast<unsigned char>(txt[i]));
    };
    auto is_alnum = [&](std::size_t i) {
        return i < n && std::isalnum(static_cast<unsigned char>(txt[i]));
    };
    std::size_t pos = 0;
    while ((pos = txt.find("REQ-", pos)) != std::string::npos) {
        std::size_t i = pos + 4;  // middle [A-Z0-9]+ run
        while (i < n && (std::isupper(static_cast<unsigned char>(txt[i])) ||
                         std::isdigit(static_cast<unsigned char>(txt[i])))) ++i;
        // Then '-' and exactly 3 digits; a trailing alnum means this is not
        // an id boundary (e.g. REQ-X-0015), but a trailing '-' is fine
        // (range mentions like REQ-DISC-001--003).
        if (i > pos + 4 && i < n && txt[i] == '-' &&
            is_digit(i + 1) && is_digit(i + 2) && is_digit(i + 3) && !is_alnum(i + 4)) {
            out.push_back(txt.substr(pos, i + 4 - pos));
            pos = i + 4;
        } else {
            pos += 4;
        }
    }
    return out;
}

FidelityReport fidelity(const std::vector<VerdictValue>& verdicts) {
    if (verdicts.empty()) throw ValidationError("empty probe set");
    FidelityReport r;
    r.n = verdicts.size();
    for (VerdictValue v : verdicts) {
        switch (v) {
            case VerdictValue::agree: ++r.agree_count; break;
            case VerdictValue::contradict: ++r.contradict_count; break;
            case VerdictValue::gap: ++r.gap_count; break;
        }
    }
    return r;
}

FidelityReport fidelity(const std::map<std::string, VerdictValue>& verdicts) {
    if (verdicts.empty()) throw ValidationError("empty probe set");
    FidelityReport r;
    r.n = verdicts.size();
    r.verdicts = verdicts;
    for (const auto& [id, v] : verdicts) {
        (void)id;
        switch (v) {
            case VerdictValue::agree: ++r.agree_count; break;
            case VerdictValue::contradict: ++r.contradict_count; break;
            case VerdictValue::gap: ++r.gap_count; break;
        }
    }
    return r;
}

MixtureWeights validate_weights(MixtureWeights w) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(w.alpha)) throw ValidationError("alpha out of [0,1]");
    if (!in01(w.beta_cfg) || !in01(w.beta_dfg) || !in01(w.beta_sdg))
        throw ValidationError("beta weight out of [0,1]");
    const double sum = w.beta_cfg + w.beta_dfg + w.beta_sdg;
    if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9)
        throw ValidationError("beta weights must sum to 1 (got " + std::to_string(sum) + ")");
    w.beta_cfg /= sum;
    w.beta_dfg /= sum;
    w.beta_sdg /= sum;
    return w;
}

ValidationReport validate_probe_set(const std::vector<Probe>& probes) {
    ValidationReport report;
    std::set<std::string> seen;
    for (const Probe& p : probes) {
        if (!seen.insert(p.id).second)
            report.violations.push_back("duplicate probe id: " + p.id);
        if (!channel_admits_category(p.channel, p.category))
            report.violations.push_back(
                "probe " + p.id + ": channel " + to_string(p.channel) +
                " does not admit category " + to_string(p.category));
        if (p.id.empty()) report.violations.push_back("probe with empty id");
    }
    return report;
}

}  // namespace specfid
