#include "specfid/providers/sim.hpp"

#include <algorithm>
#include <set>

#include "specfid/core/errors.hpp"
#include "specfid/core/sha256.hpp"
#include "specfid/judgement/judge.hpp"

namespace specfid::providers {

const char* to_string(FactStatus s) {
    switch (s) {
        case FactStatus::correct: return "correct";
        case FactStatus::wrong: return "wrong";
        case FactStatus::missing: return "missing";
        case FactStatus::spurious: return "spurious";
    }
    return "missing";
}

std::size_t SyntheticWorld::correct_count() const {
    std::size_t n = 0;
    for (const auto& f : facts) n += f.status == FactStatus::correct;
    return n;
}

double SyntheticWorld::fidelity() const {
    return facts.empty() ? 0.0
                         : static_cast<double>(correct_count()) /
                               static_cast<double>(facts.size());
}

namespace {

void check_frac(const char* name, double v) {
    if (v < 0.0 || v > 1.0)
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

// what the document currently says about a fact; empty when silent
std::string document_wording(const WorldFact& f) {
    switch (f.status) {
        case FactStatus::correct: return f.truth;
        case FactStatus::wrong:
        case FactStatus::spurious: return f.wrong_text;
        case FactStatus::missing: return "";
    }
    return "";
}

const WorldFact& fact_for(const SyntheticWorld& world, const Probe& probe) {
    const auto it = probe.metadata.find("fact");
    const std::string id = it != probe.metadata.end() ? it->second : probe.id;
    // make_world deals ids in ascending order and revisions preserve it, so
    // binary search is the common case; hand-built worlds fall back to a scan
    const auto lo = std::lower_bound(
        world.facts.begin(), world.facts.end(), id,
        [](const WorldFact& f, const std::string& want) { return f.id < want; });
    if (lo != world.facts.end() && lo->id == id) return *lo;
    for (const auto& f : world.facts)
        if (f.id == id) return f;
    throw ValidationError("unknown fact id: " + id);
}

}  // namespace

SyntheticWorld make_world(std::size_t m, double wrong_frac, double missing_frac,
                          double spurious_frac, std::uint64_t seed) {
    if (m == 0) throw ValidationError("world needs at least one fact");
    check_frac("wrong_frac", wrong_frac);
    check_frac("missing_frac", missing_frac);
    check_frac("spurious_frac", spurious_frac);
    if (wrong_frac + missing_frac + spurious_frac > 1.0 + 1e-9)
        throw ValidationError("status fractions exceed 1");

    const auto md = static_cast<double>(m);
    const auto n_wrong = static_cast<std::size_t>(md * wrong_frac + 0.5);
    const auto n_missing = static_cast<std::size_t>(md * missing_frac + 0.5);
    const auto n_spurious = static_cast<std::size_t>(md * spurious_frac + 0.5);
    if (n_wrong + n_missing + n_spurious > m)
        throw ValidationError("status fractions exceed 1");

    std::vector<FactStatus> statuses(m, FactStatus::correct);
    std::size_t at = 0;
    for (std::size_t i = 0; i < n_wrong; ++i) statuses[at++] = FactStatus::wrong;
    for (std::size_t i = 0; i < n_missing; ++i) statuses[at++] = FactStatus::missing;
    for (std::size_t i = 0; i < n_spurious; ++i) statuses[at++] = FactStatus::spurious;

    Rng rng(seed);
    for (std::size_t i = m; i > 1; --i)  // Fisher-Yates on the status deck
        std::swap(statuses[i - 1], statuses[rng.next_below(i)]);

    static const Category kCycle[] = {
        Category::guard,  Category::computation, Category::output,
        Category::data,   Category::flow,        Category::branching,
        Category::precondition, Category::boundary, Category::dependency};

    SyntheticWorld world;
    world.facts.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        WorldFact f;
        char idbuf[32];
        std::snprintf(idbuf, sizeof(idbuf), "fct-%05zu", i);
        f.id = idbuf;
        f.truth = "behaviour " + f.id + " yields value v" + std::to_string(i);
        f.wrong_text = "behaviour " + f.id + " yields value w" + std::to_string(i);
        f.status = statuses[i];
        f.category = f.status == FactStatus::spurious
                         ? Category::negative
                         : kCycle[i % (sizeof(kCycle) / sizeof(kCycle[0]))];
        world.facts.push_back(std::move(f));
    }
    return world;
}

std::vector<Probe> sim_generate(const SyntheticWorld& world, std::size_t n,
                                std::uint64_t seed) {
    if (world.facts.empty()) throw ValidationError("world needs at least one fact");
    check_frac("d", world.d);
    Rng rng(seed);
    std::vector<Probe> probes;
    probes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = world.facts[rng.next_below(world.facts.size())];
        Probe p;
        p.id = f.id + "#" + std::to_string(i);
        p.question = "What does the program do for " + f.id + "?";
        p.truth = f.truth;
        p.category = f.category;
        p.channel = Channel::llm;
        p.program = "SYNTH";
        p.metadata["fact"] = f.id;
        // drift: the probe echoes the document instead of the code
        if (world.d > 0.0 && rng.bernoulli(world.d)) {
            const std::string wording = document_wording(f);
            if (!wording.empty()) {
                p.truth = wording;
                p.metadata["echoed"] = "1";
            }
        }
        probes.push_back(std::move(p));
    }
    return probes;
}

JudgeAnswer sim_judge(const SyntheticWorld& world, const Probe& probe) {
    const WorldFact& f = fact_for(world, probe);
    JudgeAnswer ja;
    switch (f.status) {
        case FactStatus::correct:
            ja.answer = f.truth;
            ja.confidence = Confidence::confirmed;
            break;
        case FactStatus::wrong:
        case FactStatus::spurious:
            ja.answer = f.wrong_text;
            ja.confidence = Confidence::confirmed;
            break;
        case FactStatus::missing:
            ja.answer.reset();
            ja.confidence = Confidence::not_addressed;
            break;
    }
    return ja;
}

SyntheticWorld sim_revise(const SyntheticWorld& world, const std::vector<Action>& actions,
                          std::uint64_t seed) {
    check_frac("pi", world.pi);
    check_frac("r", world.r);

    std::set<std::string> known;
    for (const auto& f : world.facts) known.insert(f.id);
    std::set<std::string> actioned;
    for (const auto& a : actions) {
        std::string id = a.probe_id.substr(0, a.probe_id.find('#'));
        if (!known.count(id)) throw ValidationError("unknown fact id: " + id);
        actioned.insert(std::move(id));
    }

    SyntheticWorld next = world;
    Rng rng(seed);
    // fixed iteration order (fact order) keeps the draw sequence stable
    for (auto& f : next.facts) {
        if (actioned.count(f.id)) {
            if (f.status != FactStatus::correct && rng.bernoulli(world.pi))
                f.status = FactStatus::correct;
        } else if (f.status == FactStatus::correct && rng.bernoulli(world.r)) {
            f.status = FactStatus::wrong;
        }
    }
    return next;
}

void SimTextProvider::set_reply(Role role, std::string reply) {
    replies_[role] = std::move(reply);
}

Completion SimTextProvider::complete(Role role, const std::string& prompt) {
    const auto it = replies_.find(role);
    const std::string text =
        it != replies_.end() ? it->second : "echo:" + sha256_hex(prompt).substr(0, 16);
    Completion c;
    c.text = text;
    c.input_tokens = prompt.size() / 4 + 1;
    c.output_tokens = text.size() / 4 + 1;
    return c;
}

CompareLabel SimComparator::compare(const std::string& a, const std::string& b) {
    return judgement::normalized_compare(a, b);
}

}  // namespace specfid::providers
