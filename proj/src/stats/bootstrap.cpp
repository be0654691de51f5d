#include "specfid/stats/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "specfid/core/errors.hpp"
#include "specfid/core/rng.hpp"
#include "specfid/stats/forecast.hpp"
#include "specfid/stats/rates.hpp"

namespace specfid::stats {

namespace {

std::optional<double> row_f_dagger(const TransitionContingency& c) {
    const std::size_t impr_den = c.impr + c.stuck;
    const std::size_t regr_den = c.held + c.regr;
    if (impr_den == 0 || regr_den == 0) return std::nullopt;
    const double pi = static_cast<double>(c.impr) / static_cast<double>(impr_den);
    const double r = static_cast<double>(c.regr) / static_cast<double>(regr_den);
    if (pi + r <= 0.0) return std::nullopt;
    return pi / (pi + r);
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size();
    if (m % 2 == 1) return xs[m / 2];
    return 0.5 * (xs[m / 2 - 1] + xs[m / 2]);
}

// Linear-interpolation quantile over sorted data.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.size() == 1) return sorted[0];
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

TransitionContingency resample_multinomial(const TransitionContingency& c, Rng& rng) {
    const std::vector<double> weights = {
        static_cast<double>(c.held), static_cast<double>(c.regr),
        static_cast<double>(c.impr), static_cast<double>(c.stuck)};
    TransitionContingency out;
    const std::size_t n = c.n();
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng.categorical(weights)) {
            case 0: ++out.held; break;
            case 1: ++out.regr; break;
            case 2: ++out.impr; break;
            default: ++out.stuck; break;
        }
    }
    return out;
}

}  // namespace

FixedPointForecast bootstrap_fixed_point(const std::vector<TransitionContingency>& window,
                                         std::size_t resamples, std::uint64_t seed,
                                         std::optional<double> f0, int fit_first_k) {
    if (window.empty()) throw ValidationError("bootstrap_fixed_point: empty window");
    if (resamples < 1) throw ValidationError("bootstrap_fixed_point: resamples must be >= 1");

    std::vector<double> point_rows;
    for (const auto& c : window) {
        if (auto fd = row_f_dagger(c)) point_rows.push_back(*fd);
    }
    if (point_rows.empty())
        throw ValidationError("bootstrap_fixed_point: degenerate window (no defined f_dagger)");

    FixedPointForecast out;
    out.fit_first_k = fit_first_k;
    out.fit_last_k = fit_first_k + static_cast<int>(window.size()) - 1;
    out.f_dagger = median(point_rows);

    std::vector<double> replicates;
    replicates.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        Rng rng(Rng::derive(seed, b));
        std::vector<double> rows;
        for (const auto& c : window) {
            if (auto fd = row_f_dagger(resample_multinomial(c, rng))) rows.push_back(*fd);
        }
        if (!rows.empty()) replicates.push_back(median(rows));
    }
    if (replicates.empty())
        throw ValidationError("bootstrap_fixed_point: all replicates degenerate");
    std::sort(replicates.begin(), replicates.end());
    out.bootstrap_ci = {quantile_sorted(replicates, 0.025), quantile_sorted(replicates, 0.975)};

    if (f0) {
        std::vector<std::pair<double, double>> step_rates;
        for (const auto& c : window) {
            const RateEstimates r = estimate_rates(c);
            if (r.pi_hat && r.r_hat) step_rates.push_back({*r.pi_hat, *r.r_hat});
        }
        out.predicted_trajectory = forecast(*f0, step_rates);
    }
    return out;
}

}  // namespace specfid::stats
