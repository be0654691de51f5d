#pragma once

#include <cstddef>
#include <map>
#include <mutex>

namespace specfid::providers {

struct UsageRow {
    std::size_t calls = 0;
    std::size_t input_tokens = 0;
    std::size_t output_tokens = 0;
    double wall_seconds = 0.0;
};

// Per-iteration accounting of provider traffic. Appends are serialized so
// concurrent judge workers can share one ledger; rows only ever grow.
class UsageLedger {
  public:
    void record(int iteration, std::size_t input_tokens, std::size_t output_tokens,
                double wall_seconds);
    UsageRow row(int iteration) const;
    UsageRow total() const;
    std::map<int, UsageRow> rows() const;

  private:
    mutable std::mutex mu_;
    std::map<int, UsageRow> rows_;
};

}  // namespace specfid::providers
