#pragma once

#include <map>
#include <string>
#include <vector>

#include "specfid/probes/facts.hpp"
#include "specfid/providers/provider.hpp"

namespace specfid::probes {

struct ChannelStability {
    std::size_t facts_n = 0;
    std::size_t successful_pairs = 0;  // both calls returned usable text
    std::size_t failed_pairs = 0;
    std::size_t exact_matches = 0;
    std::size_t equivalent = 0;  // comparator says the phrasings agree
    double exact_match_rate = 0.0;
    double semantic_equiv_rate = 0.0;
    std::pair<double, double> wilson = {0.0, 1.0};  // on the equivalence rate
};

struct StabilityReport {
    std::map<std::string, ChannelStability> per_channel;  // keyed by channel name
    ChannelStability pooled;
    double epsilon = 1.0;  // 1 - lower Wilson bound of pooled equivalence
};

// Informalizes every fact twice through independent provider calls and
// measures phrasing agreement. Provider failures drop the pair and are
// counted; Wilson intervals at 95%.
StabilityReport stability_harness(const std::vector<GraphFact>& facts, TextProvider& provider,
                                  AnswerComparator& comparator);

}  // namespace specfid::probes
