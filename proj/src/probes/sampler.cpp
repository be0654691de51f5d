#include "specfid/probes/sampler.hpp"

#include "specfid/core/errors.hpp"

namespace specfid::probes {

SampleResult sample_mixture(const ProbePools& pools, const LlmGenerator& llm,
                            MixtureWeights weights, std::size_t n, std::uint64_t seed) {
    const MixtureWeights w = validate_weights(weights);
    const std::vector<const std::vector<Probe>*> chans = {&pools.cfg, &pools.dfg, &pools.sdg};
    std::vector<double> beta = {w.beta_cfg, w.beta_dfg, w.beta_sdg};

    // channels that are weighted but empty drop out; beta renormalizes
    double live = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        if (chans[c]->empty()) beta[c] = 0.0;
        live += beta[c];
    }
    if (w.alpha < 1.0 && live <= 0.0)
        throw ValidationError("no observable symbolic facts");
    if (w.alpha > 0.0 && !llm)
        throw ValidationError("alpha > 0 requires an llm generator");
    for (auto& b : beta)
        if (live > 0.0) b /= live;

    SampleResult out;
    out.effective = w;
    out.effective.beta_cfg = beta[0];
    out.effective.beta_dfg = beta[1];
    out.effective.beta_sdg = beta[2];
    out.probes.reserve(n);

    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const bool use_llm =
            w.alpha >= 1.0 || (w.alpha > 0.0 && rng.bernoulli(w.alpha));
        if (use_llm) {
            Probe p = llm(i, rng);
            p.channel = Channel::llm;
            out.probes.push_back(std::move(p));
            continue;
        }
        const std::size_t c = rng.categorical(beta);
        const auto& pool = *chans[c];
        out.probes.push_back(pool[rng.next_below(pool.size())]);
    }
    return out;
}

}  // namespace specfid::probes
