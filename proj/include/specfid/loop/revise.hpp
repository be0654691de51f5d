#pragma once

#include <string>
#include <vector>

#include "specfid/core/types.hpp"
#include "specfid/judgement/judge.hpp"
#include "specfid/judgement/spec_document.hpp"
#include "specfid/providers/provider.hpp"

namespace specfid::loop {

struct RevisionResult {
    judgement::SpecDocument spec;  // revised on accept, the input on reject
    bool accepted = false;
    double anchor_locality = 1.0;  // changed lines inside cited spans +-5
    std::string reject_reason;
};

// One reviser call: the document plus the structured action list go out,
// the full revised document comes back and is re-anchored. Outputs losing
// more than 20% of the existing anchors are rejected (whole-document
// regeneration guard); unparseable outputs are rejected after the retries.
// An empty action list returns the document unchanged without a call.
RevisionResult revise(const judgement::SpecDocument& spec, const std::vector<Action>& actions,
                      TextProvider& provider, const judgement::RetryPolicy& retry = {});

}  // namespace specfid::loop
