#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specfid/core/types.hpp"
#include "specfid/judgement/judge.hpp"
#include "specfid/judgement/spec_document.hpp"
#include "specfid/loop/frozen.hpp"
#include "specfid/loop/revise.hpp"
#include "specfid/providers/provider.hpp"
#include "specfid/providers/sim.hpp"

namespace specfid::loop {

// delta_max <= 0 means "derive from n_test": twice the one-sided Hoeffding
// bound at confidence 0.05, the two-sided envelope for the train/test gap.
struct StoppingConfig {
    double delta = 0.005;  // minimum test-fidelity improvement
    double delta_max = 0.0;
    std::size_t max_iters = 16;
};

double default_delta_max(std::size_t n_test);

struct RunConfig {
    std::size_t n_train = 200;
    std::size_t n_test = 200;
    StoppingConfig stopping;
    std::uint64_t seed = 0;
    std::string run_dir;  // empty: keep everything in memory
};

struct RevisionOutcome {
    bool accepted = true;
    double anchor_locality = 1.0;
    std::string note;
};

// One iterate cycle against candidate B_k. contingency/rates cover the
// frozen test set versus iteration k-1 and stay empty at k=0. halt_reason
// is set on the final state only: delta_halt, gap_exceeded or max_iters.
struct IterationState {
    int k = 0;
    FidelityReport train_report;
    FidelityReport test_report;
    double gap = 0.0;  // train F - test F
    std::vector<Action> actions;
    TransitionContingency contingency;
    RateEstimates rates;
    bool revision_accepted = true;
    double anchor_locality = 1.0;
    std::string halt_reason;
};

// What the loop needs from a world: sample probes, judge them against the
// current candidate, compare answers, and apply a revision. Implementations
// keep the candidate (document or synthetic spec-state) as internal state.
class AlignmentBackend {
  public:
    virtual ~AlignmentBackend() = default;
    virtual std::vector<Probe> sample_probes(std::size_t n, std::uint64_t seed) = 0;
    virtual JudgeAnswer judge_probe(const Probe& probe) = 0;
    virtual CompareLabel compare_answers(const std::string& truth,
                                         const std::string& answer) = 0;
    virtual RevisionOutcome apply_revision(const std::vector<Action>& actions,
                                           std::uint64_t seed) = 0;
    virtual std::string render_state() const = 0;  // iter_<k>/spec.md content
};

// Deterministic backend over the synthetic world; makes the theorems
// testable offline. Rejections never happen here.
class SimBackend : public AlignmentBackend {
  public:
    explicit SimBackend(providers::SyntheticWorld world);

    std::vector<Probe> sample_probes(std::size_t n, std::uint64_t seed) override;
    JudgeAnswer judge_probe(const Probe& probe) override;
    CompareLabel compare_answers(const std::string& truth, const std::string& answer) override;
    RevisionOutcome apply_revision(const std::vector<Action>& actions,
                                   std::uint64_t seed) override;
    std::string render_state() const override;

    const providers::SyntheticWorld& world() const { return world_; }

  private:
    providers::SyntheticWorld world_;
};

// Live backend: judge/compare/revise through bound providers, probes from
// the caller-supplied source (the mixture sampler in the CLI).
class DocumentBackend : public AlignmentBackend {
  public:
    using ProbeSource = std::function<std::vector<Probe>(std::size_t, std::uint64_t)>;

    DocumentBackend(judgement::SpecDocument spec, ProbeSource source,
                    TextProvider& judge_provider, AnswerComparator& comparator,
                    TextProvider& reviser, judgement::RetryPolicy retry = {});

    std::vector<Probe> sample_probes(std::size_t n, std::uint64_t seed) override;
    JudgeAnswer judge_probe(const Probe& probe) override;
    CompareLabel compare_answers(const std::string& truth, const std::string& answer) override;
    RevisionOutcome apply_revision(const std::vector<Action>& actions,
                                   std::uint64_t seed) override;
    std::string render_state() const override;

    const judgement::SpecDocument& spec() const { return spec_; }

  private:
    judgement::SpecDocument spec_;
    ProbeSource source_;
    TextProvider& judge_provider_;
    AnswerComparator& comparator_;
    TextProvider& reviser_;
    judgement::RetryPolicy retry_;
};

// held = agree->agree, regr = agree->non-agree, impr = non-agree->agree,
// stuck = non-agree->non-agree. The two maps must cover the same probe ids.
TransitionContingency record_transition(const std::map<std::string, VerdictValue>& prev,
                                        const std::map<std::string, VerdictValue>& curr);

// The iterate cycle under the frozen-test protocol. Produces states
// k = 0..k*; revision failures mark the state and carry the candidate
// forward; frozen-set violations and provider exhaustion abort the run
// after the current iteration's artifacts are flushed.
std::vector<IterationState> run_loop(AlignmentBackend& backend, const RunConfig& cfg);

}  // namespace specfid::loop
