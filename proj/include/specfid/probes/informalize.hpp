#pragma once

#include <string>

#include "specfid/core/types.hpp"
#include "specfid/probes/facts.hpp"
#include "specfid/providers/provider.hpp"

namespace specfid::probes {

// Deterministic question rendering used when no provider is bound and as
// the fallback for malformed provider output.
std::string template_question(const GraphFact& fact);

// Phrases the fact as a question. The provider only words the question;
// truth, category, and channel are copied from the fact and cannot be
// altered. provider == nullptr selects the template; provider failures
// propagate as ProviderError (retriable by the caller).
Probe informalize(const GraphFact& fact, TextProvider* provider);

}  // namespace specfid::probes
