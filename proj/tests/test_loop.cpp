#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "check.hpp"
#include "specfid/core/errors.hpp"
#include "specfid/core/io.hpp"
#include "specfid/core/rng.hpp"
#include "specfid/core/text.hpp"
#include "specfid/core/types.hpp"
#include "specfid/judgement/judge.hpp"
#include "specfid/judgement/spec_document.hpp"
#include "specfid/loop/frozen.hpp"
#include "specfid/loop/loop.hpp"
#include "specfid/loop/revise.hpp"
#include "specfid/providers/provider.hpp"
#include "specfid/providers/sim.hpp"
#include "specfid/stats/rates.hpp"

using namespace specfid;
namespace lp = specfid::loop;
namespace pv = specfid::providers;
namespace jd = specfid::judgement;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
    return io::read_file(std::string(FIXTURES_DIR) + "/" + name);
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

struct FnProvider : TextProvider {
    std::function<Completion(Role, const std::string&)> fn;
    int calls = 0;
    explicit FnProvider(std::function<Completion(Role, const std::string&)> f)
        : fn(std::move(f)) {}
    Completion complete(Role role, const std::string& prompt) override {
        ++calls;
        return fn(role, prompt);
    }
};

struct NormComparator : AnswerComparator {
    CompareLabel compare(const std::string& a, const std::string& b) override {
        return jd::normalized_compare(a, b);
    }
};

Completion reply(const std::string& text) {
    Completion c;
    c.text = text;
    return c;
}

const jd::RetryPolicy kFastRetry{3, 0};

pv::SyntheticWorld drift_world(std::size_t m, double d, std::uint64_t seed) {
    auto world = pv::make_world(m, 0.3, 0.2, 0.1, seed);
    world.pi = 0.634;
    world.r = 0.052;
    world.d = d;
    return world;
}

std::map<std::string, VerdictValue> verdict_run(const std::vector<VerdictValue>& vs,
                                                const std::string& prefix) {
    std::map<std::string, VerdictValue> m;
    for (std::size_t i = 0; i < vs.size(); ++i) m[prefix + std::to_string(i)] = vs[i];
    return m;
}

void test_freeze_and_reload() {
    const auto world = drift_world(30, 0.0, 1);
    auto frozen = lp::freeze_test_set(pv::sim_generate(world, 50, 7));
    REQUIRE(frozen.probes.size() == 50);
    REQUIRE(frozen.sha256.size() == 64);
    lp::verify_frozen(frozen);

    // same sample, same hash; independent sample, different hash
    const auto again = lp::freeze_test_set(pv::sim_generate(world, 50, 7));
    REQUIRE(again.sha256 == frozen.sha256);
    const auto other = lp::freeze_test_set(pv::sim_generate(world, 50, 8));
    REQUIRE(other.sha256 != frozen.sha256);

    const auto dir = scratch_dir("specfid_frozen_test");
    lp::save_frozen(frozen, dir);
    const auto loaded = lp::load_frozen(dir);
    REQUIRE(loaded.sha256 == frozen.sha256);
    REQUIRE(loaded.probes.size() == frozen.probes.size());
    REQUIRE(loaded.probes[13].id == frozen.probes[13].id);
    REQUIRE(loaded.probes[13].truth == frozen.probes[13].truth);
    REQUIRE(loaded.probes[13].metadata == frozen.probes[13].metadata);

    // in-memory drift
    auto tampered = frozen;
    tampered.probes[0].truth += "!";
    REQUIRE_THROWS_AS(lp::verify_frozen(tampered), FrozenSetViolation);

    // single-byte file drift
    {
        std::ofstream out(dir / "frozen_test.json", std::ios::app);
        out << " ";
    }
    REQUIRE_THROWS_AS(lp::load_frozen(dir), FrozenSetViolation);

    // sidecar drift
    lp::save_frozen(frozen, dir);
    io::write_file(dir / "frozen_test.json.sha256", std::string(64, '0') + "\n");
    REQUIRE_THROWS_AS(lp::load_frozen(dir), FrozenSetViolation);
    fs::remove_all(dir);
}

void test_record_transition() {
    // Table-style contingency: 439 held, 24 regressed, 204 improved, 118 stuck
    std::vector<VerdictValue> prev, curr;
    auto push = [&](std::size_t n, VerdictValue a, VerdictValue b) {
        for (std::size_t i = 0; i < n; ++i) {
            prev.push_back(a);
            curr.push_back(b);
        }
    };
    push(439, VerdictValue::agree, VerdictValue::agree);
    push(24, VerdictValue::agree, VerdictValue::contradict);
    push(204, VerdictValue::gap, VerdictValue::agree);
    push(118, VerdictValue::contradict, VerdictValue::gap);
    const auto c =
        lp::record_transition(verdict_run(prev, "p"), verdict_run(curr, "p"));
    REQUIRE(c.held == 439);
    REQUIRE(c.regr == 24);
    REQUIRE(c.impr == 204);
    REQUIRE(c.stuck == 118);
    REQUIRE(c.n() == 785);
    const auto rates = stats::estimate_rates(c, 1);
    REQUIRE_NEAR(*rates.pi_hat, 0.634, 5e-4);
    REQUIRE_NEAR(*rates.r_hat, 0.052, 5e-4);
    REQUIRE_NEAR(*rates.f_dagger, 0.924, 5e-4);

    // identical lists: nothing moves
    const auto still = lp::record_transition(verdict_run(prev, "p"), verdict_run(prev, "p"));
    REQUIRE(still.regr == 0);
    REQUIRE(still.impr == 0);
    REQUIRE(still.held == 463);
    REQUIRE(still.stuck == 322);

    // all-agree to all-gap: everything regresses
    const std::vector<VerdictValue> agrees(12, VerdictValue::agree);
    const std::vector<VerdictValue> gaps(12, VerdictValue::gap);
    const auto wipe = lp::record_transition(verdict_run(agrees, "q"), verdict_run(gaps, "q"));
    REQUIRE(wipe.regr == 12);
    REQUIRE(wipe.held + wipe.impr + wipe.stuck == 0);

    REQUIRE_THROWS_AS(
        lp::record_transition(verdict_run(agrees, "q"), verdict_run(gaps, "z")),
        ValidationError);
    REQUIRE_THROWS_AS(
        lp::record_transition(verdict_run(agrees, "q"), verdict_run(prev, "p")),
        ValidationError);
}

void test_default_delta_max() {
    REQUIRE_NEAR(lp::default_delta_max(785), 0.097, 5e-4);
    REQUIRE_NEAR(lp::default_delta_max(50), 0.384, 1e-3);
}

void test_revise_document() {
    const auto spec = jd::make_spec_document(fixture("spec_calcdisc.md"));
    REQUIRE(spec.anchors.size() == 5);

    Action add;
    add.kind = ActionKind::add;
    add.probe_id = "sdg:call:P0.S2:AUDITDB:LS-DISCOUNT@k0:3";
    add.anchors = {"REQ-AUDIT-001"};
    add.guidance = "Add a clause stating: every discount change is audited.";

    // no actions: byte-identical document, provider untouched
    FnProvider idle([](Role, const std::string&) { return reply("unused"); });
    const auto untouched = lp::revise(spec, {}, idle, kFastRetry);
    REQUIRE(untouched.accepted);
    REQUIRE(untouched.spec.text == spec.text);
    REQUIRE_NEAR(untouched.anchor_locality, 1.0, 1e-12);
    REQUIRE(idle.calls == 0);

    // accepted revision: a clause appended right after the cited span
    std::string seen_prompt;
    FnProvider appender([&](Role role, const std::string& prompt) {
        REQUIRE(role == Role::reviser);
        seen_prompt = prompt;
        return reply(spec.text +
                     "\nREQ-AUDIT-002 Every discount change shall be written to the audit\n"
                     "trail before control returns.\n");
    });
    const auto revised = lp::revise(spec, {add}, appender, kFastRetry);
    REQUIRE(revised.accepted);
    REQUIRE(revised.spec.anchors.count("REQ-AUDIT-002") == 1);
    REQUIRE(revised.spec.anchors.count("REQ-DISC-001") == 1);
    REQUIRE_NEAR(revised.anchor_locality, 1.0, 1e-12);  // new lines sit near REQ-AUDIT-001
    REQUIRE(seen_prompt.find(spec.text) != std::string::npos);
    REQUIRE(seen_prompt.find("REQ-AUDIT-001") != std::string::npos);  // structured actions
    REQUIRE(seen_prompt.find("every discount change is audited") != std::string::npos);

    // fenced output is unwrapped before re-anchoring
    FnProvider fenced([&](Role, const std::string&) {
        return reply("```markdown\n" + spec.text + "\nREQ-AUDIT-002 Audit trail clause.\n```");
    });
    const auto unfenced = lp::revise(spec, {add}, fenced, kFastRetry);
    REQUIRE(unfenced.accepted);
    REQUIRE(unfenced.spec.anchors.count("REQ-AUDIT-002") == 1);

    // a change far from every cited span halves the locality
    auto lines = text::split_lines(spec.text);
    lines[0] = "# CALCDISC rules, revision B";  // title is far from REQ-AUDIT-001
    FnProvider drifter([&](Role, const std::string&) {
        return reply(text::join(lines, "\n") +
                     "\nREQ-AUDIT-002 Every discount change shall be audited.\n");
    });
    const auto drifted = lp::revise(spec, {add}, drifter, kFastRetry);
    REQUIRE(drifted.accepted);
    REQUIRE(drifted.anchor_locality < 1.0);
    REQUIRE(drifted.anchor_locality > 0.0);

    // losing 2 of 5 anchors (40%) trips the regeneration guard
    std::string gutted;
    for (const auto& line : text::split_lines(spec.text))
        if (line.find("REQ-DISC-002") == std::string::npos &&
            line.find("REQ-DISC-003") == std::string::npos)
            gutted += line + "\n";
    FnProvider regen([&](Role, const std::string&) { return reply(gutted); });
    const auto rejected = lp::revise(spec, {add}, regen, kFastRetry);
    REQUIRE(!rejected.accepted);
    REQUIRE(rejected.reject_reason.find("anchors") != std::string::npos);
    REQUIRE(rejected.spec.text == spec.text);  // input carried back unchanged

    // losing exactly 1 of 5 (20%) stays within the guard
    std::string trimmed;
    for (const auto& line : text::split_lines(spec.text))
        if (line.find("REQ-DISC-003") == std::string::npos) trimmed += line + "\n";
    FnProvider trimmer([&](Role, const std::string&) { return reply(trimmed); });
    REQUIRE(lp::revise(spec, {add}, trimmer, kFastRetry).accepted);

    // output that never re-anchors is rejected after the retries
    FnProvider noisy([&](Role, const std::string&) {
        return reply("REQ-A-001 dup\nREQ-A-001 dup again\n");
    });
    const auto unparseable = lp::revise(spec, {add}, noisy, kFastRetry);
    REQUIRE(!unparseable.accepted);
    REQUIRE(unparseable.reject_reason.find("unparseable") != std::string::npos);
    REQUIRE(noisy.calls == 3);

    // provider exhaustion surfaces; transient failures are retried
    FnProvider dead([](Role, const std::string&) -> Completion {
        throw ProviderError("down");
    });
    REQUIRE_THROWS_AS(lp::revise(spec, {add}, dead, kFastRetry), ProviderError);
    REQUIRE(dead.calls == 3);
    int flaky_calls = 0;
    FnProvider flaky([&](Role, const std::string&) -> Completion {
        if (++flaky_calls < 3) throw ProviderError("hiccup");
        return reply(spec.text + "\nREQ-AUDIT-002 Audit clause.\n");
    });
    REQUIRE(lp::revise(spec, {add}, flaky, kFastRetry).accepted);
    REQUIRE(flaky_calls == 3);
}

void test_sim_backend() {
    auto world = drift_world(20, 0.0, 3);
    lp::SimBackend backend(world);

    const auto probes = backend.sample_probes(10, 5);
    REQUIRE(probes.size() == 10);
    const auto& p = probes[0];
    const auto ja = backend.judge_probe(p);
    const auto rendered = backend.render_state();
    REQUIRE(rendered.find(world.facts[0].id) != std::string::npos);
    bool has_silent = false;
    for (const auto& f : world.facts) has_silent |= f.status == pv::FactStatus::missing;
    REQUIRE(has_silent);
    REQUIRE(rendered.find("(silent)") != std::string::npos);

    if (!ja.silent())
        REQUIRE(backend.compare_answers(p.truth, *ja.answer) != CompareLabel::unrelated);

    std::vector<Action> actions;
    for (const auto& f : backend.world().facts)
        if (f.status != pv::FactStatus::correct) {
            Action a;
            a.kind = ActionKind::fix;
            a.probe_id = f.id + "#0@k0:0";
            actions.push_back(a);
        }
    auto w2 = backend.world();
    w2.pi = 1.0;
    w2.r = 0.0;
    lp::SimBackend perfect(w2);
    const auto outcome = perfect.apply_revision(actions, 9);
    REQUIRE(outcome.accepted);
    REQUIRE_NEAR(perfect.world().fidelity(), 1.0, 1e-12);
}

void test_run_loop_halts() {
    // delta = 1.0: the first improvement check always fails, k* = 1
    lp::SimBackend backend(drift_world(50, 0.0, 11));
    lp::RunConfig cfg;
    cfg.n_train = 80;
    cfg.n_test = 80;
    cfg.seed = 101;
    cfg.stopping.delta = 1.0;
    const auto states = lp::run_loop(backend, cfg);
    REQUIRE(states.size() == 2);
    REQUIRE(states[0].k == 0);
    REQUIRE(states[0].halt_reason.empty());
    REQUIRE(states[1].k == 1);
    REQUIRE(states[1].halt_reason == "delta_halt");

    // a perfect spec yields no actions and constant fidelity
    auto perfect = pv::make_world(40, 0.0, 0.0, 0.0, 2);
    perfect.r = 0.0;
    lp::SimBackend calm(perfect);
    lp::RunConfig cfg2;
    cfg2.n_train = 60;
    cfg2.n_test = 60;
    cfg2.seed = 7;
    const auto flat = lp::run_loop(calm, cfg2);
    REQUIRE(flat.size() == 2);  // halts at the first delta check
    for (const auto& st : flat) {
        REQUIRE(st.actions.empty());
        REQUIRE_NEAR(st.test_report.f(), 1.0, 1e-12);
        REQUIRE_NEAR(st.train_report.f(), 1.0, 1e-12);
    }
    REQUIRE(flat.back().halt_reason == "delta_halt");

    // config validation
    lp::RunConfig bad = cfg;
    bad.n_test = 0;
    REQUIRE_THROWS_AS(lp::run_loop(backend, bad), ValidationError);
    bad = cfg;
    bad.stopping.delta = 1.5;
    REQUIRE_THROWS_AS(lp::run_loop(backend, bad), ValidationError);
    bad = cfg;
    bad.stopping.max_iters = 0;
    REQUIRE_THROWS_AS(lp::run_loop(backend, bad), ValidationError);
}

void test_run_loop_state_invariants() {
    lp::RunConfig cfg;
    cfg.n_train = 120;
    cfg.n_test = 120;
    cfg.seed = 404;
    cfg.stopping.delta = 0.005;
    cfg.stopping.max_iters = 6;

    lp::SimBackend backend(drift_world(60, 0.0, 21));
    const auto states = lp::run_loop(backend, cfg);
    REQUIRE(states.size() >= 2);
    REQUIRE(states.size() <= cfg.stopping.max_iters + 1);

    std::size_t prev_agree = 0;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& st = states[k];
        REQUIRE(st.k == static_cast<int>(k));
        REQUIRE(st.train_report.n == cfg.n_train);
        REQUIRE(st.test_report.n == cfg.n_test);
        REQUIRE_NEAR(st.gap, st.train_report.f() - st.test_report.f(), 1e-12);
        const bool last = k + 1 == states.size();
        REQUIRE(st.halt_reason.empty() != last);
        if (k > 0) {
            // conservation: rows partition the frozen set, margins match
            REQUIRE(st.contingency.n() == cfg.n_test);
            REQUIRE(st.contingency.held + st.contingency.regr == prev_agree);
            REQUIRE(st.contingency.held + st.contingency.impr ==
                    st.test_report.agree_count);
            REQUIRE(st.rates.k == st.k);
        }
        prev_agree = st.test_report.agree_count;
        for (const auto& action : st.actions)
            REQUIRE(action.probe_id.find("@k" + std::to_string(k) + ":") !=
                    std::string::npos);  // actions only ever cite train instances
    }

    // bit-reproducible: fresh backend, same config, same trajectory
    lp::SimBackend rerun(drift_world(60, 0.0, 21));
    const auto states2 = lp::run_loop(rerun, cfg);
    REQUIRE(states2.size() == states.size());
    for (std::size_t k = 0; k < states.size(); ++k) {
        REQUIRE(states2[k].train_report.agree_count == states[k].train_report.agree_count);
        REQUIRE(states2[k].test_report.agree_count == states[k].test_report.agree_count);
        REQUIRE(states2[k].actions.size() == states[k].actions.size());
        REQUIRE(states2[k].contingency.held == states[k].contingency.held);
        REQUIRE(states2[k].halt_reason == states[k].halt_reason);
    }
}

void test_run_loop_artifacts() {
    const auto dir = scratch_dir("specfid_loop_run");
    lp::RunConfig cfg;
    cfg.n_train = 60;
    cfg.n_test = 60;
    cfg.seed = 99;
    cfg.stopping.max_iters = 3;
    cfg.run_dir = dir.string();

    lp::SimBackend backend(drift_world(40, 0.0, 31));
    const auto states = lp::run_loop(backend, cfg);

    REQUIRE(fs::exists(dir / "config.json"));
    const auto config_text = io::read_file(dir / "config.json");
    REQUIRE(config_text.find("\"seed\":99") != std::string::npos);
    REQUIRE(config_text.find("\"delta_max\"") != std::string::npos);

    const auto frozen = lp::load_frozen(dir);  // hash verifies on load
    REQUIRE(frozen.probes.size() == cfg.n_test);

    for (const auto& st : states) {
        const fs::path d = dir / ("iter_" + std::to_string(st.k));
        for (const char* name : {"spec.md", "train_probes.json", "train_verdicts.json",
                                 "test_verdicts.json", "actions.json", "contingency.json",
                                 "rates.json"})
            REQUIRE_MSG(fs::exists(d / name), std::string("missing ") + (d / name).string());
    }
    REQUIRE(!fs::exists(dir / ("iter_" + std::to_string(states.size()))));

    // the iter_k spec snapshot is the candidate as judged, pre-revision
    const auto snap0 = io::read_file(dir / "iter_0" / "spec.md");
    const auto snap1 = io::read_file(dir / "iter_1" / "spec.md");
    REQUIRE(snap0 != snap1);  // the first revision moved the world
    fs::remove_all(dir);
}

// delegates to SimBackend but corrupts the frozen artifact during the first
// revision, as a crashed or meddling writer would
struct TamperBackend : lp::SimBackend {
    std::string dir;
    TamperBackend(pv::SyntheticWorld world, std::string d)
        : SimBackend(std::move(world)), dir(std::move(d)) {}
    lp::RevisionOutcome apply_revision(const std::vector<Action>& actions,
                                       std::uint64_t seed) override {
        auto out = SimBackend::apply_revision(actions, seed);
        std::ofstream f(dir + "/frozen_test.json", std::ios::app);
        f << " ";
        return out;
    }
};

void test_run_loop_frozen_violation() {
    const auto dir = scratch_dir("specfid_loop_tamper");
    lp::RunConfig cfg;
    cfg.n_train = 40;
    cfg.n_test = 40;
    cfg.seed = 5;
    cfg.run_dir = dir.string();

    TamperBackend backend(drift_world(30, 0.0, 41), dir.string());
    REQUIRE_THROWS_AS(lp::run_loop(backend, cfg), FrozenSetViolation);
    // partial artifacts persisted up to the violation
    REQUIRE(fs::exists(dir / "iter_0" / "actions.json"));
    REQUIRE(!fs::exists(dir / "iter_1"));
    fs::remove_all(dir);
}

void test_run_loop_convergence() {
    // Constant rates from a published contingency; world small relative to
    // the sample so nearly every defective fact is actioned each round. The
    // chain plateaus at pi/(pi+r) = 0.924; k=1 lands on the first forecast
    // step 0.819.
    const std::size_t seeds = 100;
    double final_sum = 0.0, first_sum = 0.0;
    std::size_t hit_plateau = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
        auto world = pv::make_world(120, 0.25, 0.11, 0.05, 9000 + s);
        world.pi = 0.634;
        world.r = 0.052;
        lp::SimBackend backend(world);
        lp::RunConfig cfg;
        cfg.n_train = 785;
        cfg.n_test = 785;
        cfg.seed = 9000 + s;
        cfg.stopping.delta = 0.0001;
        cfg.stopping.max_iters = 8;
        const auto states = lp::run_loop(backend, cfg);
        REQUIRE(states.size() >= 3);
        first_sum += states[1].test_report.f();
        const double final_f = states.back().test_report.f();
        final_sum += final_f;
        hit_plateau += std::fabs(final_f - 0.924) < 0.08;  // ~3 sigma per run
    }
    REQUIRE_NEAR(first_sum / seeds, 0.819, 0.015);
    REQUIRE_NEAR(final_sum / seeds, 0.924, 0.01);
    REQUIRE(hit_plateau >= 97);  // individual runs stay inside a 3-sigma band
}

void test_run_loop_monotone_r0() {
    // r = 0 is the perfect-repair regime: fact statuses only improve, so
    // each run's frozen-test fidelity is non-decreasing, not just the mean.
    const std::size_t seeds = 100, horizon = 6;
    std::vector<double> mean_f(horizon + 1, 0.0);
    std::vector<std::size_t> runs_at(horizon + 1, 0);
    for (std::size_t s = 0; s < seeds; ++s) {
        auto world = pv::make_world(100, 0.3, 0.2, 0.1, 500 + s);
        world.pi = 0.634;
        world.r = 0.0;
        lp::SimBackend backend(world);
        lp::RunConfig cfg;
        cfg.n_train = 200;
        cfg.n_test = 200;
        cfg.seed = 500 + s;
        cfg.stopping.delta = 0.001;
        cfg.stopping.delta_max = 1.0;  // isolate the delta mechanics
        cfg.stopping.max_iters = horizon;
        const auto states = lp::run_loop(backend, cfg);
        double prev = -1.0;
        double last = 0.0;
        for (const auto& st : states) {
            REQUIRE(st.test_report.f() >= prev);
            prev = st.test_report.f();
            last = prev;
            mean_f[st.k] += prev;
            ++runs_at[st.k];
        }
        for (std::size_t k = states.size(); k <= horizon; ++k) {
            mean_f[k] += last;  // carry the terminal value forward
            ++runs_at[k];
        }
    }
    double prev_mean = -1.0;
    for (std::size_t k = 0; k <= horizon; ++k) {
        const double mk = mean_f[k] / runs_at[k];
        REQUIRE(mk >= prev_mean - 1e-12);
        prev_mean = mk;
    }
}

void test_run_loop_stopping_bound() {
    // Proposition-style bound on monotone trajectories: k* <= ceil(1/delta)+1
    for (const double delta : {0.05, 0.1, 0.25}) {
        const std::size_t bound = static_cast<std::size_t>(std::ceil(1.0 / delta)) + 1;
        for (std::size_t s = 0; s < 50; ++s) {
            auto world = pv::make_world(80, 0.3, 0.2, 0.1, 700 + s);
            world.pi = 0.634;
            world.r = 0.0;
            lp::SimBackend backend(world);
            lp::RunConfig cfg;
            cfg.n_train = 160;
            cfg.n_test = 160;
            cfg.seed = 700 + s;
            cfg.stopping.delta = delta;
            cfg.stopping.delta_max = 1.0;
            cfg.stopping.max_iters = 30;
            const auto states = lp::run_loop(backend, cfg);
            REQUIRE(states.back().halt_reason == "delta_halt");
            REQUIRE(static_cast<std::size_t>(states.back().k) <= bound);
        }
    }
}

void test_run_loop_drift_discriminant() {
    // Smoke-scale version of the falsification signature; the acceptance
    // suite runs the full 200-seed protocol.
    std::size_t clean_ok = 0;
    for (std::size_t s = 0; s < 30; ++s) {
        lp::SimBackend backend(drift_world(300, 0.0, 3000 + s));
        lp::RunConfig cfg;
        cfg.n_train = 1200;
        cfg.n_test = 1200;
        cfg.seed = 3000 + s;
        cfg.stopping.max_iters = 8;
        const auto states = lp::run_loop(backend, cfg);
        bool inside = true;
        for (const auto& st : states) inside = inside && st.halt_reason != "gap_exceeded";
        clean_ok += inside;
    }
    REQUIRE(clean_ok >= 29);

    std::size_t drift_caught = 0;
    for (std::size_t s = 0; s < 30; ++s) {
        lp::SimBackend backend(drift_world(300, 0.3, 4000 + s));
        lp::RunConfig cfg;
        cfg.n_train = 1200;
        cfg.n_test = 1200;
        cfg.seed = 4000 + s;
        cfg.stopping.max_iters = 8;
        const auto states = lp::run_loop(backend, cfg);
        drift_caught += states.back().halt_reason == "gap_exceeded" && states.back().k <= 4;
    }
    REQUIRE(drift_caught >= 27);
}

void test_document_backend_loop() {
    const auto dir = scratch_dir("specfid_doc_run");
    const auto spec = jd::make_spec_document(fixture("spec_calcdisc.md"));

    Probe tier;
    tier.id = "cfg:P1.S0:when0";
    tier.question = "What discount applies to orders above 1000?";
    tier.truth = "a 20 percent discount";
    tier.category = Category::guard;
    tier.channel = Channel::cfg;
    tier.program = "CALCDISC";

    Probe audit;
    audit.id = "sdg:call:P0.S2:AUDITDB:LS-DISCOUNT";
    audit.question = "Is the computed discount audited?";
    audit.truth = "the discount is forwarded to the audit subsystem";
    audit.category = Category::dependency;
    audit.channel = Channel::sdg;
    audit.program = "CALCDISC";

    auto source = [&](std::size_t n, std::uint64_t) {
        std::vector<Probe> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(i % 2 ? audit : tier);
        return out;
    };

    FnProvider judge_provider([&](Role role, const std::string& prompt) {
        REQUIRE(role == Role::judge);
        if (prompt.find("above 1000") != std::string::npos)
            return reply("answer: a 20% discount\nevidence: REQ-DISC-001\n"
                         "confidence: confirmed");
        return reply("answer: SILENT\nevidence: REQ-AUDIT-001\nconfidence: not_addressed");
    });
    NormComparator comparator;
    FnProvider reviser([&](Role role, const std::string& prompt) {
        REQUIRE(role == Role::reviser);
        REQUIRE(prompt.find("add") != std::string::npos);  // the Add action rides along
        return reply(spec.text +
                     "\nREQ-AUDIT-002 The computed discount shall be forwarded to the\n"
                     "audit subsystem before control returns.\n");
    });

    lp::DocumentBackend backend(spec, source, judge_provider, comparator, reviser,
                                kFastRetry);
    lp::RunConfig cfg;
    cfg.n_train = 8;
    cfg.n_test = 8;
    cfg.seed = 1;
    cfg.stopping.delta = 0.005;
    cfg.stopping.delta_max = 1.0;  // tiny n, keep the gap rule out of the way
    cfg.stopping.max_iters = 4;
    cfg.run_dir = dir.string();

    const auto states = lp::run_loop(backend, cfg);
    REQUIRE(states.size() == 2);  // static judge: no improvement, delta halt at k=1
    REQUIRE_NEAR(states[0].test_report.f(), 0.5, 1e-12);
    REQUIRE(states[0].actions.size() == 4);  // every audit draw goes silent -> Add
    for (const auto& action : states[0].actions) {
        REQUIRE(action.kind == ActionKind::add);
        REQUIRE(action.anchors == std::vector<std::string>{"REQ-AUDIT-001"});
    }
    REQUIRE(states[0].revision_accepted);
    REQUIRE_NEAR(states[0].anchor_locality, 1.0, 1e-12);
    REQUIRE(backend.spec().anchors.count("REQ-AUDIT-002") == 1);

    const auto snap0 = io::read_file(dir / "iter_0" / "spec.md");
    const auto snap1 = io::read_file(dir / "iter_1" / "spec.md");
    REQUIRE(snap0 == spec.text);
    REQUIRE(snap1.find("REQ-AUDIT-002") != std::string::npos);
    fs::remove_all(dir);

    // rejection carries the candidate forward instead of aborting
    FnProvider regen([&](Role, const std::string&) {
        return reply("REQ-ZZZ-001 a fresh document with none of the old anchors.\n");
    });
    lp::DocumentBackend stubborn(spec, source, judge_provider, comparator, regen,
                                 kFastRetry);
    lp::RunConfig cfg2 = cfg;
    cfg2.run_dir.clear();
    const auto carried = lp::run_loop(stubborn, cfg2);
    REQUIRE(!carried[0].revision_accepted);
    REQUIRE(carried.back().halt_reason == "delta_halt");
    REQUIRE(stubborn.spec().text == spec.text);

    // provider exhaustion mid-revision halts the run with artifacts on disk
    const auto dir2 = scratch_dir("specfid_doc_dead");
    FnProvider dead([](Role, const std::string&) -> Completion {
        throw ProviderError("reviser down");
    });
    lp::DocumentBackend doomed(spec, source, judge_provider, comparator, dead, kFastRetry);
    lp::RunConfig cfg3 = cfg;
    cfg3.run_dir = dir2.string();
    REQUIRE_THROWS_AS(lp::run_loop(doomed, cfg3), ProviderError);
    REQUIRE(fs::exists(dir2 / "iter_0" / "actions.json"));
    fs::remove_all(dir2);
}

}  // namespace

int main() {
    RUN(test_freeze_and_reload);
    RUN(test_record_transition);
    RUN(test_default_delta_max);
    RUN(test_revise_document);
    RUN(test_sim_backend);
    RUN(test_run_loop_halts);
    RUN(test_run_loop_state_invariants);
    RUN(test_run_loop_artifacts);
    RUN(test_run_loop_frozen_violation);
    RUN(test_run_loop_convergence);
    RUN(test_run_loop_monotone_r0);
    RUN(test_run_loop_stopping_bound);
    RUN(test_run_loop_drift_discriminant);
    RUN(test_document_backend_loop);
    return finish();
}
