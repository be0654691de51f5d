#include <algorithm>

#include "check.hpp"
#include "specfid/core/errors.hpp"
#include "specfid/core/json_io.hpp"
#include "specfid/core/rng.hpp"
#include "specfid/core/text.hpp"
#include "specfid/core/types.hpp"

using namespace specfid;

namespace {

Probe mk_probe(const std::string& id, Channel ch, Category cat) {
    Probe p;
    p.id = id;
    p.question = "q-" + id;
    p.truth = "t-" + id;
    p.channel = ch;
    p.category = cat;
    p.program = "PROG";
    return p;
}

void test_validate_probe_set() {
    // duplicate ids
    std::vector<Probe> dup = {mk_probe("P1", Channel::cfg, Category::guard),
                              mk_probe("P1", Channel::cfg, Category::guard)};
    REQUIRE(validate_probe_set(dup).violations.size() == 1);

    // channel/category mismatch
    std::vector<Probe> mismatch = {mk_probe("P1", Channel::cfg, Category::data)};
    REQUIRE(validate_probe_set(mismatch).violations.size() == 1);

    // well-formed set
    std::vector<Probe> ok = {mk_probe("a", Channel::cfg, Category::guard),
                             mk_probe("b", Channel::dfg, Category::computation),
                             mk_probe("c", Channel::sdg, Category::flow)};
    REQUIRE(validate_probe_set(ok).valid());

    // llm admits every category
    for (int i = 0; i <= static_cast<int>(Category::flow); ++i) {
        std::vector<Probe> one = {mk_probe("x", Channel::llm, static_cast<Category>(i))};
        REQUIRE(validate_probe_set(one).valid());
    }
    REQUIRE(!channel_admits_category(Channel::dfg, Category::guard));
    REQUIRE(channel_admits_category(Channel::dfg, Category::data));
    REQUIRE(channel_admits_category(Channel::sdg, Category::dependency));
}

void test_fidelity_counts() {
    using V = VerdictValue;
    FidelityReport r = fidelity(std::vector<V>{V::agree, V::agree, V::gap, V::contradict});
    REQUIRE(r.n == 4);
    REQUIRE_NEAR(r.f(), 0.50, 1e-12);
    REQUIRE_NEAR(r.c(), 0.25, 1e-12);
    REQUIRE_NEAR(r.g(), 0.25, 1e-12);

    FidelityReport all = fidelity(std::vector<V>(10, V::agree));
    REQUIRE(all.agree_count == 10 && all.contradict_count == 0 && all.gap_count == 0);
    REQUIRE_NEAR(all.f(), 1.0, 0.0);

    // 785 verdicts with 492 agree -> F = 0.627 at 3 decimals
    std::vector<V> big(492, V::agree);
    big.insert(big.end(), 150, V::contradict);
    big.insert(big.end(), 143, V::gap);
    REQUIRE(big.size() == 785);
    FidelityReport t = fidelity(big);
    REQUIRE_NEAR(t.f(), 0.627, 0.0005);

    REQUIRE_THROWS_AS(fidelity(std::vector<V>{}), ValidationError);
}

void test_fidelity_exact_and_permutation_invariant() {
    using V = VerdictValue;
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.next_below(400);
        std::vector<V> vs;
        for (std::size_t i = 0; i < n; ++i)
            vs.push_back(static_cast<V>(rng.next_below(3)));
        FidelityReport r1 = fidelity(vs);
        // exact rational identity: counts partition n
        REQUIRE(r1.agree_count + r1.contradict_count + r1.gap_count == r1.n);

        // deterministic shuffle, counts unchanged
        std::vector<V> shuffled = vs;
        for (std::size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
        FidelityReport r2 = fidelity(shuffled);
        REQUIRE(r1.agree_count == r2.agree_count && r1.contradict_count == r2.contradict_count &&
                r1.gap_count == r2.gap_count);
    }
}

void test_mixture_weights() {
    MixtureWeights w{0.5, 0.2, 0.3, 0.5};
    MixtureWeights v = validate_weights(w);
    REQUIRE_NEAR(v.beta_cfg + v.beta_dfg + v.beta_sdg, 1.0, 0.0);

    // within 1e-9 of 1 is renormalized, beyond rejected
    MixtureWeights close{0.0, 0.2, 0.3, 0.5 + 5e-10};
    REQUIRE_NEAR(validate_weights(close).beta_sdg, 0.5, 1e-9);
    MixtureWeights off{0.0, 0.2, 0.3, 0.6};
    REQUIRE_THROWS_AS(validate_weights(off), ValidationError);
    MixtureWeights bad_alpha{1.5, 1.0, 0.0, 0.0};
    REQUIRE_THROWS_AS(validate_weights(bad_alpha), ValidationError);
}

void test_anchor_ids() {
    REQUIRE(is_anchor_id("REQ-DISC-001"));
    REQUIRE(is_anchor_id("REQ-AUDIT-001"));
    REQUIRE(is_anchor_id("REQ-F00042-999"));
    REQUIRE(!is_anchor_id("REQ-disc-001"));
    REQUIRE(!is_anchor_id("REQ-DISC-01"));
    REQUIRE(!is_anchor_id("REQ-DISC-0015"));
    REQUIRE(!is_anchor_id("REQ--001"));
    REQUIRE(!is_anchor_id("XREQ-DISC-001"));

    const auto ids = extract_anchor_ids(
        "Applies under REQ-DISC-001--003; see also REQ-AUDIT-001 and REQ-DISC-001 again. "
        "REQ-BAD-0015 is not an anchor.");
    REQUIRE(ids.size() == 3);
    REQUIRE(ids[0] == "REQ-DISC-001");
    REQUIRE(ids[1] == "REQ-AUDIT-001");
    REQUIRE(ids[2] == "REQ-DISC-001");
}

void test_judge_answer_well_formed() {
    JudgeAnswer silent;
    silent.answer.reset();
    silent.confidence = Confidence::not_addressed;
    REQUIRE(silent.silent() && silent.well_formed());

    JudgeAnswer spoken;
    spoken.answer = "20% base discount";
    spoken.confidence = Confidence::confirmed;
    REQUIRE(!spoken.silent() && spoken.well_formed());

    spoken.confidence = Confidence::not_addressed;
    REQUIRE(!spoken.well_formed());
}

void test_json_round_trips() {
    Probe p = mk_probe("cfg:P1.S0:arm0", Channel::cfg, Category::guard);
    p.metadata["difficulty"] = "medium";
    json jp = p;
    Probe p2 = jp.get<Probe>();
    REQUIRE(p2.id == p.id && p2.question == p.question && p2.truth == p.truth &&
            p2.category == p.category && p2.channel == p.channel &&
            p2.metadata.at("difficulty") == "medium");

    JudgeAnswer a;
    a.answer = "the discount is 20";
    a.evidence = {"REQ-DISC-001"};
    a.confidence = Confidence::confirmed;
    json ja = a;
    REQUIRE(ja.at("answer").get<std::string>() == "the discount is 20");
    JudgeAnswer a2 = ja.get<JudgeAnswer>();
    REQUIRE(!a2.silent() && a2.evidence.size() == 1);

    JudgeAnswer s;  // SILENT encodes as null
    json js = s;
    REQUIRE(js.at("answer").is_null());
    REQUIRE(js.get<JudgeAnswer>().silent());

    Action act;
    act.kind = ActionKind::remove;
    act.anchors = {"REQ-X-001"};
    act.guidance = "drop it";
    act.evidence = "spec says so";
    act.probe_id = "p9";
    json jact = act;
    REQUIRE(jact.at("kind") == "remove");
    Action act2 = jact.get<Action>();
    REQUIRE(act2.kind == ActionKind::remove && act2.probe_id == "p9");

    TransitionContingency c{439, 24, 204, 118};
    json jc = c;
    TransitionContingency c2 = jc.get<TransitionContingency>();
    REQUIRE(c2.held == 439 && c2.regr == 24 && c2.impr == 204 && c2.stuck == 118);
    REQUIRE(c2.n() == 785);

    RateEstimates r;
    r.k = 3;
    r.pi_hat = 0.5;  // r_hat left undefined
    json jr = r;
    REQUIRE(jr.at("r_hat").is_null());
    RateEstimates r2 = jr.get<RateEstimates>();
    REQUIRE(r2.pi_hat.has_value() && !r2.r_hat.has_value() && r2.k == 3);

    using V = VerdictValue;
    std::map<std::string, V> vm{{"a", V::agree}, {"b", V::gap}};
    FidelityReport fr = fidelity(vm);
    json jf = fr;
    FidelityReport fr2 = jf.get<FidelityReport>();
    REQUIRE(fr2.n == 2 && fr2.verdicts.at("b") == V::gap);

    // closed enums: unknown strings are rejected at validation
    json bad = jp;
    bad["category"] = "vibes";
    REQUIRE_THROWS_AS(bad.get<Probe>(), ValidationError);
}

void test_canonical_dump_is_stable() {
    Probe p = mk_probe("x", Channel::sdg, Category::flow);
    json j1 = p, j2 = p;
    REQUIRE(canonical_dump(j1) == canonical_dump(j2));
    // key order is sorted regardless of insertion order
    json a;
    a["zeta"] = 1;
    a["alpha"] = 2;
    REQUIRE(canonical_dump(a).find("alpha") < canonical_dump(a).find("zeta"));
}

void test_rng_determinism() {
    Rng a(123), b(123), c(124);
    bool diverged = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next_u64();
        REQUIRE(va == b.next_u64());
        if (va != c.next_u64()) diverged = true;
    }
    REQUIRE(diverged);

    Rng r(7);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(r.next_below(13) < 13);
        const double u = r.next_unit();
        REQUIRE(u >= 0.0 && u < 1.0);
    }
    // categorical respects zero weights
    Rng s(9);
    for (int i = 0; i < 200; ++i) {
        const std::size_t k = s.categorical({0.0, 1.0, 0.0});
        REQUIRE(k == 1);
    }
    REQUIRE(Rng::derive(1, 0) != Rng::derive(1, 1));
    REQUIRE(Rng::derive(1, 0) != Rng::derive(2, 0));
}

void test_text_utilities() {
    REQUIRE(text::contains_word("sets the FILE status", "file"));
    REQUIRE(!text::contains_word("user profile picture", "file"));
    REQUIRE(text::contains_word("calls 1000-CALC-BASE-TIER now", "1000-calc-base-tier"));
    REQUIRE(!text::contains_word("paragraphs are grouped", "paragraph"));
    REQUIRE(text::contains_phrase("bad record  layout here", "record layout"));
    REQUIRE(!text::contains_phrase("record the layout", "record layout"));
    REQUIRE(text::split_lines("a\r\nb\nc").size() == 3);
    REQUIRE(text::trim("  x \t") == "x");
}

}  // namespace

int main() {
    RUN(test_validate_probe_set);
    RUN(test_fidelity_counts);
    RUN(test_fidelity_exact_and_permutation_invariant);
    RUN(test_mixture_weights);
    RUN(test_anchor_ids);
    RUN(test_judge_answer_well_formed);
    RUN(test_json_round_trips);
    RUN(test_canonical_dump_is_stable);
    RUN(test_rng_determinism);
    RUN(test_text_utilities);
    return finish();
}
