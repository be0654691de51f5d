#pragma once

#include <cstddef>
#include <utility>

namespace specfid::stats {

struct HoeffdingEnvelope {
    double one_sided;  // sqrt(ln(2/delta) / (2n))
    double two_sided;  // 2 * one_sided
};

// Concentration envelope for the train/test gap at sample size n and
// confidence parameter delta in (0,1).
HoeffdingEnvelope hoeffding_envelope(std::size_t n, double delta);

// Wilson score interval for a binomial proportion, clamped to [0,1].
std::pair<double, double> wilson_ci(std::size_t successes, std::size_t n, double confidence);

// Standard normal quantile (Acklam's rational approximation, |err| < 1.2e-9).
double normal_quantile(double p);

}  // namespace specfid::stats
