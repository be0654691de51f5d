#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "specfid/core/types.hpp"

namespace specfid::stats {

struct FixedPointForecast {
    int fit_first_k = 0;  // inclusive transition index range used for the fit
    int fit_last_k = 0;
    double f_dagger = 0.0;
    std::pair<double, double> bootstrap_ci{0.0, 0.0};  // 95% percentile CI
    // Expected fidelity chained through the window's point rates; filled only
    // when a starting fidelity is supplied.
    std::vector<double> predicted_trajectory;
};

// Plateau estimate from a window of transitions. The point estimate is the
// median of the per-transition f_dagger values (robust to the window's
// early/late rate drift; pooling raw counts would let the largest transition
// dominate). Each bootstrap replicate resamples every window contingency as
// one multinomial over its four cells, recomputes per-row f_dagger, and takes
// the median again; rows that resample to a zero denominator drop out of that
// replicate's median.
FixedPointForecast bootstrap_fixed_point(const std::vector<TransitionContingency>& window,
                                         std::size_t resamples, std::uint64_t seed,
                                         std::optional<double> f0 = std::nullopt,
                                         int fit_first_k = 0);

}  // namespace specfid::stats
