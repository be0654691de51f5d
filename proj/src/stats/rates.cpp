#include "specfid/stats/rates.hpp"

#include "specfid/core/errors.hpp"

namespace specfid::stats {

RateEstimates estimate_rates(const TransitionContingency& c, int k) {
    const std::size_t impr_den = c.impr + c.stuck;
    const std::size_t regr_den = c.held + c.regr;
    if (impr_den == 0 && regr_den == 0)
        throw ValidationError("degenerate transition: both contingency denominators are zero");

    RateEstimates r;
    r.k = k;
    if (impr_den > 0)
        r.pi_hat = static_cast<double>(c.impr) / static_cast<double>(impr_den);
    if (regr_den > 0)
        r.r_hat = static_cast<double>(c.regr) / static_cast<double>(regr_den);
    if (r.pi_hat && r.r_hat) {
        r.gamma = 1.0 - *r.pi_hat - *r.r_hat;
        const double denom = *r.pi_hat + *r.r_hat;
        if (denom > 0.0) r.f_dagger = *r.pi_hat / denom;
    }
    return r;
}

std::pair<double, double> balance_identity(double fidelity, const RateEstimates& rates,
                                           std::size_t n) {
    if (fidelity < 0.0 || fidelity > 1.0)
        throw ValidationError("balance_identity: fidelity out of [0,1]");
    if (!rates.pi_hat || !rates.r_hat)
        throw ValidationError("balance_identity: rates must define pi_hat and r_hat");
    const double nn = static_cast<double>(n);
    const double expected_impr = nn * (1.0 - fidelity) * *rates.pi_hat;
    const double expected_regr = nn * fidelity * *rates.r_hat;
    return {expected_impr, expected_regr};
}

}  // namespace specfid::stats
