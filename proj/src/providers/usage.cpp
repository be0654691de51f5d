#include "specfid/providers/usage.hpp"

namespace specfid::providers {

void UsageLedger::record(int iteration, std::size_t input_tokens, std::size_t output_tokens,
                         double wall_seconds) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& r = rows_[iteration];
    r.calls += 1;
    r.input_tokens += input_tokens;
    r.output_tokens += output_tokens;
    r.wall_seconds += wall_seconds;
}

UsageRow UsageLedger::row(int iteration) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = rows_.find(iteration);
    return it == rows_.end() ? UsageRow{} : it->second;
}

UsageRow UsageLedger::total() const {
    std::lock_guard<std::mutex> lock(mu_);
    UsageRow t;
    for (const auto& [k, r] : rows_) {
        t.calls += r.calls;
        t.input_tokens += r.input_tokens;
        t.output_tokens += r.output_tokens;
        t.wall_seconds += r.wall_seconds;
    }
    return t;
}

std::map<int, UsageRow> UsageLedger::rows() const {
    std::lock_guard<std::mutex> lock(mu_);
    return rows_;
}

}  // namespace specfid::providers
