#include "specfid/core/json_io.hpp"

#include "specfid/core/errors.hpp"

namespace specfid {

namespace {

// Wraps nlohmann's type errors into ValidationError so malformed artifact
// files surface as exit code 1, not an unhandled json exception.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed ") + what + ": " + e.what());
    }
}

}  // namespace

void to_json(json& j, const Probe& p) {
    j = json{{"id", p.id},
             {"question", p.question},
             {"truth", p.truth},
             {"category", to_string(p.category)},
             {"channel", to_string(p.channel)},
             {"program", p.program}};
    if (!p.metadata.empty()) j["metadata"] = p.metadata;
}

void from_json(const json& j, Probe& p) {
    guarded("probe", [&] {
        p.id = j.at("id").get<std::string>();
        p.question = j.at("question").get<std::string>();
        p.truth = j.at("truth").get<std::string>();
        p.category = category_from_string(j.at("category").get<std::string>());
        p.channel = channel_from_string(j.at("channel").get<std::string>());
        p.program = j.at("program").get<std::string>();
        p.metadata.clear();
        if (j.contains("metadata"))
            p.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
        return 0;
    });
}

void to_json(json& j, const JudgeAnswer& a) {
    j = json{{"answer", a.answer ? json(*a.answer) : json(nullptr)},
             {"evidence", a.evidence},
             {"confidence", to_string(a.confidence)}};
    if (a.diagnostic) j["diagnostic"] = *a.diagnostic;
}

void from_json(const json& j, JudgeAnswer& a) {
    guarded("judge answer", [&] {
        if (j.at("answer").is_null())
            a.answer.reset();
        else
            a.answer = j.at("answer").get<std::string>();
        a.evidence = j.at("evidence").get<std::vector<std::string>>();
        a.confidence = confidence_from_string(j.at("confidence").get<std::string>());
        a.diagnostic.reset();
        if (j.contains("diagnostic")) a.diagnostic = j.at("diagnostic").get<std::string>();
        return 0;
    });
}

void to_json(json& j, const Action& a) {
    j = json{{"kind", to_string(a.kind)},
             {"anchors", a.anchors},
             {"guidance", a.guidance},
             {"evidence", a.evidence},
             {"probe_id", a.probe_id}};
}

void from_json(const json& j, Action& a) {
    guarded("action", [&] {
        a.kind = action_kind_from_string(j.at("kind").get<std::string>());
        a.anchors = j.at("anchors").get<std::vector<std::string>>();
        a.guidance = j.at("guidance").get<std::string>();
        a.evidence = j.at("evidence").get<std::string>();
        a.probe_id = j.at("probe_id").get<std::string>();
        return 0;
    });
}

void to_json(json& j, const FidelityReport& r) {
    json verdicts = json::object();
    for (const auto& [id, v] : r.verdicts) verdicts[id] = to_string(v);
    j = json{{"n", r.n},
             {"agree_count", r.agree_count},
             {"contradict_count", r.contradict_count},
             {"gap_count", r.gap_count},
             {"f", r.f()},
             {"c", r.c()},
             {"g", r.g()},
             {"verdicts", verdicts}};
}

void from_json(const json& j, FidelityReport& r) {
    guarded("fidelity report", [&] {
        r.n = j.at("n").get<std::size_t>();
        r.agree_count = j.at("agree_count").get<std::size_t>();
        r.contradict_count = j.at("contradict_count").get<std::size_t>();
        r.gap_count = j.at("gap_count").get<std::size_t>();
        r.verdicts.clear();
        for (const auto& [id, v] : j.at("verdicts").items())
            r.verdicts[id] = verdict_from_string(v.get<std::string>());
        if (r.agree_count + r.contradict_count + r.gap_count != r.n)
            throw ValidationError("fidelity counts do not sum to n");
        return 0;
    });
}

void to_json(json& j, const TransitionContingency& c) {
    j = json{{"held", c.held}, {"regr", c.regr}, {"impr", c.impr}, {"stuck", c.stuck}};
}

void from_json(const json& j, TransitionContingency& c) {
    guarded("contingency", [&] {
        c.held = j.at("held").get<std::size_t>();
        c.regr = j.at("regr").get<std::size_t>();
        c.impr = j.at("impr").get<std::size_t>();
        c.stuck = j.at("stuck").get<std::size_t>();
        return 0;
    });
}

void to_json(json& j, const MixtureWeights& w) {
    j = json{{"alpha", w.alpha},
             {"beta_cfg", w.beta_cfg},
             {"beta_dfg", w.beta_dfg},
             {"beta_sdg", w.beta_sdg}};
}

void from_json(const json& j, MixtureWeights& w) {
    guarded("mixture weights", [&] {
        w.alpha = j.at("alpha").get<double>();
        w.beta_cfg = j.at("beta_cfg").get<double>();
        w.beta_dfg = j.at("beta_dfg").get<double>();
        w.beta_sdg = j.at("beta_sdg").get<double>();
        return 0;
    });
}

namespace {

json opt_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> opt_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

void to_json(json& j, const RateEstimates& r) {
    j = json{{"k", r.k},
             {"pi_hat", opt_to_json(r.pi_hat)},
             {"r_hat", opt_to_json(r.r_hat)},
             {"gamma", opt_to_json(r.gamma)},
             {"f_dagger", opt_to_json(r.f_dagger)}};
}

void from_json(const json& j, RateEstimates& r) {
    guarded("rate estimates", [&] {
        r.k = j.at("k").get<int>();
        r.pi_hat = opt_from_json(j.at("pi_hat"));
        r.r_hat = opt_from_json(j.at("r_hat"));
        r.gamma = opt_from_json(j.at("gamma"));
        r.f_dagger = opt_from_json(j.at("f_dagger"));
        return 0;
    });
}

std::string canonical_dump(const json& j) {
    return j.dump(2) + "\n";
}

json probes_to_json(const std::vector<Probe>& probes) {
    json arr = json::array();
    for (const Probe& p : probes) arr.push_back(p);
    return arr;
}

std::vector<Probe> probes_from_json(const json& j) {
    return guarded("probe list", [&] {
        if (!j.is_array()) throw ValidationError("probe list must be a JSON array");
        std::vector<Probe> out;
        out.reserve(j.size());
        for (const auto& item : j) out.push_back(item.get<Probe>());
        return out;
    });
}

}  // namespace specfid
