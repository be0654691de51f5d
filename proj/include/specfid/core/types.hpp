#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace specfid {

// ---------------------------------------------------------------------------
// Enums. The category set is closed: generators producing anything outside it
// are rejected at validation.
// ---------------------------------------------------------------------------

enum class Category : std::uint8_t {
    precondition,
    computation,
    branching,
    guard,
    output,
    dependency,
    negative,
    boundary,
    data,
    flow,
};

enum class Channel : std::uint8_t { llm, cfg, dfg, sdg };

enum class VerdictValue : std::uint8_t { agree, contradict, gap };

enum class Confidence : std::uint8_t { confirmed, contradicted, not_addressed };

enum class ActionKind : std::uint8_t { fix, add, remove };

enum class CompareLabel : std::uint8_t { equivalent, contradictory, unrelated };

const char* to_string(Category c);
const char* to_string(Channel c);
const char* to_string(VerdictValue v);
const char* to_string(Confidence c);
const char* to_string(ActionKind k);
const char* to_string(CompareLabel l);

Category category_from_string(const std::string& s);
Channel channel_from_string(const std::string& s);
VerdictValue verdict_from_string(const std::string& s);
Confidence confidence_from_string(const std::string& s);
ActionKind action_kind_from_string(const std::string& s);
CompareLabel compare_label_from_string(const std::string& s);

// Legal categories per channel (disjoint-support rule). llm may carry any.
bool channel_admits_category(Channel ch, Category cat);

// ---------------------------------------------------------------------------
// Probe: a question whose authoritative answer was read off the code.
// ---------------------------------------------------------------------------

struct Probe {
    std::string id;        // unique within a probe set
    std::string question;
    std::string truth;     // authoritative answer y
    Category category = Category::guard;
    Channel channel = Channel::cfg;
    std::string program;
    // Opaque passthrough (e.g. difficulty labels from a generator). Never
    // inspected by the engine.
    std::map<std::string, std::string> metadata;
};

// ---------------------------------------------------------------------------
// JudgeAnswer: answer == nullopt encodes SILENT.
// ---------------------------------------------------------------------------

struct JudgeAnswer {
    std::optional<std::string> answer;   // nullopt = SILENT
    std::vector<std::string> evidence;   // anchor ids cited from the spec
    Confidence confidence = Confidence::not_addressed;
    std::optional<std::string> diagnostic;  // unparseable output, unknown anchors

    bool silent() const { return !answer.has_value(); }
    // SILENT must travel with not_addressed and vice versa.
    bool well_formed() const {
        return silent() == (confidence == Confidence::not_addressed);
    }
};

// ---------------------------------------------------------------------------
// Action: structured spec edit dispatched from a non-agreeing probe.
// ---------------------------------------------------------------------------

struct Action {
    ActionKind kind = ActionKind::fix;
    std::vector<std::string> anchors;  // rho
    std::string guidance;              // gamma
    std::string evidence;              // epsilon, verbatim
    std::string probe_id;
};

// Anchor id syntax. Evidence not matching it is kept verbatim but never
// treated as an anchor.
bool is_anchor_id(const std::string& s);
std::vector<std::string> extract_anchor_ids(const std::string& text);

// ---------------------------------------------------------------------------
// FidelityReport: rates are integer count pairs; decimals are render-only so
// F + C + G = 1 holds exactly.
// ---------------------------------------------------------------------------

struct FidelityReport {
    std::size_t n = 0;
    std::size_t agree_count = 0;
    std::size_t contradict_count = 0;
    std::size_t gap_count = 0;
    std::map<std::string, VerdictValue> verdicts;  // per-probe, may be empty

    double f() const { return n ? static_cast<double>(agree_count) / n : 0.0; }
    double c() const { return n ? static_cast<double>(contradict_count) / n : 0.0; }
    double g() const { return n ? static_cast<double>(gap_count) / n : 0.0; }
};

FidelityReport fidelity(const std::vector<VerdictValue>& verdicts);
FidelityReport fidelity(const std::map<std::string, VerdictValue>& verdicts);

// ---------------------------------------------------------------------------
// TransitionContingency: verdict transitions over one frozen probe set.
// ---------------------------------------------------------------------------

struct TransitionContingency {
    std::size_t held = 0;   // agree -> agree
    std::size_t regr = 0;   // agree -> non-agree
    std::size_t impr = 0;   // non-agree -> agree
    std::size_t stuck = 0;  // non-agree -> non-agree

    std::size_t n() const { return held + regr + impr + stuck; }
};

// ---------------------------------------------------------------------------
// MixtureWeights: alpha picks llm vs symbolic, beta weights the channels.
// ---------------------------------------------------------------------------

struct MixtureWeights {
    double alpha = 0.0;
    double beta_cfg = 1.0;
    double beta_dfg = 0.0;
    double beta_sdg = 0.0;
};

// Checks ranges and that beta sums to 1 within 1e-9, then renormalizes
// exactly. Throws ValidationError otherwise.
MixtureWeights validate_weights(MixtureWeights w);

// ---------------------------------------------------------------------------
// RateEstimates: undefined denominators surface as empty optionals, not NaN.
// ---------------------------------------------------------------------------

struct RateEstimates {
    std::optional<double> pi_hat;
    std::optional<double> r_hat;
    std::optional<double> gamma;     // 1 - pi - r when both defined
    std::optional<double> f_dagger;  // pi/(pi+r) when pi+r > 0
    int k = 0;
};

// ---------------------------------------------------------------------------
// Probe-set validation (report-style: empty list == valid).
// ---------------------------------------------------------------------------

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

ValidationReport validate_probe_set(const std::vector<Probe>& probes);

}  // namespace specfid
