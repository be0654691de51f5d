#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "specfid/core/rng.hpp"
#include "specfid/core/types.hpp"

namespace specfid::probes {

struct ProbePools {
    std::vector<Probe> cfg;
    std::vector<Probe> dfg;
    std::vector<Probe> sdg;
};

// Pure-LLM probe source for the alpha component of the mixture.
using LlmGenerator = std::function<Probe(std::size_t index, Rng& rng)>;

struct SampleResult {
    std::vector<Probe> probes;
    // beta after dropping empty channels; recorded in sampler metadata
    MixtureWeights effective;
};

// Two-level draw per probe: Bernoulli(alpha) -> llm, else categorical(beta)
// over channels, then uniform with replacement inside the channel pool.
// Empty channels with positive beta are renormalized away up front;
// ValidationError "no observable symbolic facts" when alpha < 1 and every
// weighted pool is empty. Bit-stable for a given seed.
SampleResult sample_mixture(const ProbePools& pools, const LlmGenerator& llm,
                            MixtureWeights weights, std::size_t n, std::uint64_t seed);

}  // namespace specfid::probes
