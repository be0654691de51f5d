#pragma once

#include <optional>
#include <string>

#include "specfid/core/types.hpp"
#include "specfid/judgement/spec_document.hpp"
#include "specfid/providers/provider.hpp"

namespace specfid::judgement {

struct RetryPolicy {
    int attempts = 3;
    int backoff_ms = 100;  // doubles per retry; 0 disables sleeping
};

// Answers one probe using only the candidate document. The provider reply
// must carry answer / evidence / confidence lines; output that stays
// unparseable through the retries is recorded as SILENT with a diagnostic
// instead of failing the run. Evidence anchors missing from the document
// are kept but flagged in the diagnostic.
JudgeAnswer judge(const SpecDocument& spec, const Probe& probe, TextProvider& provider,
                  const RetryPolicy& retry = {});

// Folds case, whitespace and punctuation, expands "%", drops articles.
std::string normalize_answer(const std::string& s);

// Deterministic comparison for simulated mode: equivalent when either
// normalized token set contains the other, contradictory when they merely
// overlap, unrelated when they share nothing.
CompareLabel normalized_compare(const std::string& truth, const std::string& answer);

// Comparison through the bound comparator backend, with retries. The caller
// guarantees the judge answered (no SILENT on this path).
CompareLabel compare(const std::string& truth, const std::string& answer,
                     AnswerComparator& comparator, const RetryPolicy& retry = {});

// Three-way verdict: SILENT -> gap, equivalent -> agree, any other answered
// outcome -> contradict. comparison must be present exactly when the judge
// answered; a mismatch is a ValidationError.
VerdictValue verdict(const JudgeAnswer& answer, const std::optional<CompareLabel>& comparison);

// Action dispatch: agree -> none, gap -> Add, contradict -> Remove for
// negative probes and Fix otherwise. rho = anchor ids cited in evidence,
// epsilon = the evidence verbatim, gamma = templated reviser guidance.
std::optional<Action> classify_action(const Probe& probe, VerdictValue v,
                                      const JudgeAnswer& answer);

}  // namespace specfid::judgement
