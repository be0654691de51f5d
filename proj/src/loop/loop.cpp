#include "specfid/loop/loop.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "specfid/core/errors.hpp"
#include "specfid/core/io.hpp"
#include "specfid/core/json_io.hpp"
#include "specfid/core/rng.hpp"
#include "specfid/stats/intervals.hpp"
#include "specfid/stats/rates.hpp"

namespace specfid::loop {

namespace {

namespace fs = std::filesystem;

// Seed streams. Train for iteration k is derive(master, k); the other two
// live far outside any plausible iteration range.
constexpr std::uint64_t kTestStream = 1'000'000'007ULL;
constexpr std::uint64_t kReviseStream = 2'000'000'011ULL;

// Probe ids become instance ids: unique within a set and disjoint across
// train/test, so verdict maps never collapse repeated draws and the
// test-leak assertion is meaningful.
void tag_ids(std::vector<Probe>& probes, const std::string& tag) {
    for (std::size_t i = 0; i < probes.size(); ++i)
        probes[i].id += "@" + tag + ":" + std::to_string(i);
}

struct JudgedSet {
    std::map<std::string, VerdictValue> verdicts;
    std::vector<Action> actions;
};

JudgedSet judge_set(AlignmentBackend& backend, const std::vector<Probe>& probes,
                    bool collect_actions) {
    JudgedSet out;
    for (const auto& probe : probes) {
        const JudgeAnswer answer = backend.judge_probe(probe);
        std::optional<CompareLabel> label;
        if (!answer.silent()) label = backend.compare_answers(probe.truth, *answer.answer);
        const VerdictValue v = judgement::verdict(answer, label);
        out.verdicts.emplace(probe.id, v);
        if (collect_actions)
            if (auto action = judgement::classify_action(probe, v, answer))
                out.actions.push_back(std::move(*action));
    }
    return out;
}

class ArtifactWriter {
  public:
    ArtifactWriter(const RunConfig& cfg, const StoppingConfig& resolved) : dir_(cfg.run_dir) {
        if (dir_.empty()) return;
        io::ensure_dir(dir_);
        json j{{"n_train", cfg.n_train},
               {"n_test", cfg.n_test},
               {"seed", cfg.seed},
               {"stopping",
                {{"delta", resolved.delta},
                 {"delta_max", resolved.delta_max},
                 {"max_iters", resolved.max_iters}}}};
        io::write_file(fs::path(dir_) / "config.json", canonical_dump(j) + "\n");
    }

    bool enabled() const { return !dir_.empty(); }

    void write_frozen(const FrozenTestSet& frozen) {
        if (enabled()) save_frozen(frozen, dir_);
    }

    // Disk-level freshness check: the file must still hash to the value
    // captured at k=0, which also defeats coordinated file+sidecar edits.
    void check_frozen_file(const FrozenTestSet& frozen) {
        if (!enabled()) return;
        FrozenTestSet disk;
        try {
            disk = load_frozen(dir_);
        } catch (const FrozenSetViolation&) {
            throw;
        } catch (const std::exception& e) {
            throw FrozenSetViolation(std::string("frozen-set violated: ") + e.what());
        }
        if (disk.sha256 != frozen.sha256)
            throw FrozenSetViolation("frozen-set violated: on-disk test set hash changed");
    }

    void write_iteration(const IterationState& st, const std::vector<Probe>& train,
                         const std::string& state_text) {
        if (!enabled()) return;
        const fs::path d = fs::path(dir_) / ("iter_" + std::to_string(st.k));
        io::ensure_dir(d);
        io::write_file(d / "spec.md", state_text);
        io::write_file(d / "train_probes.json", canonical_dump(probes_to_json(train)) + "\n");
        io::write_file(d / "train_verdicts.json", canonical_dump(json(st.train_report)) + "\n");
        io::write_file(d / "test_verdicts.json", canonical_dump(json(st.test_report)) + "\n");
        io::write_file(d / "actions.json", canonical_dump(json(st.actions)) + "\n");
        io::write_file(d / "contingency.json", canonical_dump(json(st.contingency)) + "\n");
        io::write_file(d / "rates.json", canonical_dump(json(st.rates)) + "\n");
    }

  private:
    std::string dir_;
};

}  // namespace

double default_delta_max(std::size_t n_test) {
    return stats::hoeffding_envelope(n_test, 0.05).two_sided;
}

SimBackend::SimBackend(providers::SyntheticWorld world) : world_(std::move(world)) {}

std::vector<Probe> SimBackend::sample_probes(std::size_t n, std::uint64_t seed) {
    return providers::sim_generate(world_, n, seed);
}

JudgeAnswer SimBackend::judge_probe(const Probe& probe) {
    return providers::sim_judge(world_, probe);
}

CompareLabel SimBackend::compare_answers(const std::string& truth, const std::string& answer) {
    return judgement::normalized_compare(truth, answer);
}

RevisionOutcome SimBackend::apply_revision(const std::vector<Action>& actions,
                                           std::uint64_t seed) {
    world_ = providers::sim_revise(world_, actions, seed);
    return {};
}

std::string SimBackend::render_state() const {
    std::string out = "# synthetic spec-state\n";
    for (const auto& f : world_.facts) {
        out += f.id;
        out += ": ";
        switch (f.status) {
            case providers::FactStatus::correct: out += f.truth; break;
            case providers::FactStatus::wrong:
            case providers::FactStatus::spurious: out += f.wrong_text; break;
            case providers::FactStatus::missing: out += "(silent)"; break;
        }
        out += "  [";
        out += providers::to_string(f.status);
        out += "]\n";
    }
    return out;
}

DocumentBackend::DocumentBackend(judgement::SpecDocument spec, ProbeSource source,
                                 TextProvider& judge_provider, AnswerComparator& comparator,
                                 TextProvider& reviser, judgement::RetryPolicy retry)
    : spec_(std::move(spec)),
      source_(std::move(source)),
      judge_provider_(judge_provider),
      comparator_(comparator),
      reviser_(reviser),
      retry_(retry) {}

std::vector<Probe> DocumentBackend::sample_probes(std::size_t n, std::uint64_t seed) {
    return source_(n, seed);
}

JudgeAnswer DocumentBackend::judge_probe(const Probe& probe) {
    return judgement::judge(spec_, probe, judge_provider_, retry_);
}

CompareLabel DocumentBackend::compare_answers(const std::string& truth,
                                              const std::string& answer) {
    return judgement::compare(truth, answer, comparator_, retry_);
}

RevisionOutcome DocumentBackend::apply_revision(const std::vector<Action>& actions,
                                                std::uint64_t seed) {
    (void)seed;  // provider-backed revision carries its own entropy
    auto result = revise(spec_, actions, reviser_, retry_);
    if (result.accepted) spec_ = std::move(result.spec);
    return {result.accepted, result.anchor_locality, result.reject_reason};
}

std::string DocumentBackend::render_state() const { return spec_.text; }

TransitionContingency record_transition(const std::map<std::string, VerdictValue>& prev,
                                        const std::map<std::string, VerdictValue>& curr) {
    if (prev.size() != curr.size())
        throw ValidationError("verdict sets cover different probe ids");
    TransitionContingency c;
    for (const auto& [id, before] : prev) {
        const auto it = curr.find(id);
        if (it == curr.end())
            throw ValidationError("verdict sets cover different probe ids: " + id);
        const bool was = before == VerdictValue::agree;
        const bool now = it->second == VerdictValue::agree;
        if (was && now)
            ++c.held;
        else if (was)
            ++c.regr;
        else if (now)
            ++c.impr;
        else
            ++c.stuck;
    }
    return c;
}

std::vector<IterationState> run_loop(AlignmentBackend& backend, const RunConfig& cfg) {
    if (cfg.n_train == 0 || cfg.n_test == 0)
        throw ValidationError("n_train and n_test must be positive");
    StoppingConfig stop = cfg.stopping;
    if (stop.delta_max <= 0.0) stop.delta_max = default_delta_max(cfg.n_test);
    if (stop.delta <= 0.0 || stop.delta > 1.0)
        throw ValidationError("delta must lie in (0, 1]");
    if (stop.max_iters == 0) throw ValidationError("max_iters must be positive");

    ArtifactWriter artifacts(cfg, stop);

    auto test_probes = backend.sample_probes(cfg.n_test, Rng::derive(cfg.seed, kTestStream));
    tag_ids(test_probes, "t");
    const FrozenTestSet frozen = freeze_test_set(std::move(test_probes));
    artifacts.write_frozen(frozen);
    std::set<std::string> test_ids;
    for (const auto& p : frozen.probes) test_ids.insert(p.id);

    std::vector<IterationState> states;
    std::map<std::string, VerdictValue> prev_test;
    double prev_test_f = 0.0;

    for (std::size_t k = 0;; ++k) {
        if (k > 0) {
            verify_frozen(frozen);
            artifacts.check_frozen_file(frozen);
        }

        IterationState st;
        st.k = static_cast<int>(k);

        auto train = backend.sample_probes(cfg.n_train, Rng::derive(cfg.seed, k));
        tag_ids(train, "k" + std::to_string(k));

        JudgedSet trained = judge_set(backend, train, true);
        st.train_report = fidelity(trained.verdicts);
        st.actions = std::move(trained.actions);

        JudgedSet tested = judge_set(backend, frozen.probes, false);
        st.test_report = fidelity(tested.verdicts);
        st.gap = st.train_report.f() - st.test_report.f();

        for (const auto& action : st.actions)
            if (test_ids.count(action.probe_id))
                throw ValidationError("test probe leaked into the action set: " +
                                      action.probe_id);

        if (k > 0) {
            st.contingency = record_transition(prev_test, tested.verdicts);
            st.rates = stats::estimate_rates(st.contingency, static_cast<int>(k));
        }

        const double test_f = st.test_report.f();
        if (std::fabs(st.gap) > stop.delta_max)
            st.halt_reason = "gap_exceeded";
        else if (k > 0 && test_f - prev_test_f < stop.delta)
            st.halt_reason = "delta_halt";
        else if (k == stop.max_iters)
            st.halt_reason = "max_iters";

        const std::string state_text = backend.render_state();  // B_k, pre-revision

        if (st.halt_reason.empty()) {
            try {
                const auto outcome = backend.apply_revision(
                    st.actions, Rng::derive(cfg.seed, kReviseStream + k));
                st.revision_accepted = outcome.accepted;
                st.anchor_locality = outcome.anchor_locality;
            } catch (...) {
                st.revision_accepted = false;
                artifacts.write_iteration(st, train, state_text);
                states.push_back(std::move(st));
                throw;  // provider exhaustion: partial artifacts are on disk
            }
        }

        artifacts.write_iteration(st, train, state_text);
        const bool halted = !st.halt_reason.empty();
        prev_test = std::move(tested.verdicts);
        prev_test_f = test_f;
        states.push_back(std::move(st));
        if (halted) break;
    }
    return states;
}

}  // namespace specfid::loop
