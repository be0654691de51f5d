#pragma once

#include <utility>

#include "specfid/core/types.hpp"

namespace specfid::stats {

// pi_hat = impr/(impr+stuck), r_hat = regr/(held+regr). A zero denominator
// leaves the affected rate (and anything derived from it) undefined; both
// zero is an error.
RateEstimates estimate_rates(const TransitionContingency& c, int k = 0);

// Expected improvement/regression counts at fidelity F under the given
// rates: (n*(1-F)*pi_hat, n*F*r_hat). At F = f_dagger the two sides balance.
std::pair<double, double> balance_identity(double fidelity, const RateEstimates& rates,
                                           std::size_t n);

}  // namespace specfid::stats
