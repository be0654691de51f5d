#include "specfid/probes/stability.hpp"

#include "specfid/core/errors.hpp"
#include "specfid/probes/informalize.hpp"
#include "specfid/stats/intervals.hpp"

namespace specfid::probes {

namespace {

void finalize(ChannelStability& c) {
    if (c.successful_pairs > 0) {
        c.exact_match_rate =
            static_cast<double>(c.exact_matches) / static_cast<double>(c.successful_pairs);
        c.semantic_equiv_rate =
            static_cast<double>(c.equivalent) / static_cast<double>(c.successful_pairs);
        c.wilson = stats::wilson_ci(c.equivalent, c.successful_pairs, 0.95);
    }
}

}  // namespace

StabilityReport stability_harness(const std::vector<GraphFact>& facts, TextProvider& provider,
                                  AnswerComparator& comparator) {
    StabilityReport report;
    for (const auto& fact : facts) {
        auto& ch = report.per_channel[to_string(fact.channel)];
        ++ch.facts_n;
        ++report.pooled.facts_n;
        std::string q1, q2;
        try {
            q1 = informalize(fact, &provider).question;
            q2 = informalize(fact, &provider).question;
        } catch (const ProviderError&) {
            ++ch.failed_pairs;
            ++report.pooled.failed_pairs;
            continue;
        }
        ++ch.successful_pairs;
        ++report.pooled.successful_pairs;
        const bool exact = q1 == q2;
        const bool equiv = comparator.compare(q1, q2) == CompareLabel::equivalent;
        ch.exact_matches += exact;
        ch.equivalent += equiv;
        report.pooled.exact_matches += exact;
        report.pooled.equivalent += equiv;
    }
    for (auto& [name, ch] : report.per_channel) finalize(ch);
    finalize(report.pooled);
    report.epsilon = 1.0 - report.pooled.wilson.first;
    return report;
}

}  // namespace specfid::probes
