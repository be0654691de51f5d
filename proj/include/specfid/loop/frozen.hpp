#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "specfid/core/types.hpp"

namespace specfid::loop {

// Test probes sampled once at k=0. The hash covers the canonical JSON of
// the probe list; every later iteration re-verifies it before judging.
struct FrozenTestSet {
    std::vector<Probe> probes;
    std::string sha256;
};

FrozenTestSet freeze_test_set(std::vector<Probe> probes);

// Recomputes the hash over the in-memory probes; mismatch is fatal.
void verify_frozen(const FrozenTestSet& frozen);

// frozen_test.json plus a .sha256 sidecar in `dir`.
void save_frozen(const FrozenTestSet& frozen, const std::filesystem::path& dir);

// Reload and re-verify: any byte drift between file, sidecar and recomputed
// hash throws FrozenSetViolation.
FrozenTestSet load_frozen(const std::filesystem::path& dir);

}  // namespace specfid::loop
