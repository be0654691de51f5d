#include "specfid/stats/forecast.hpp"

#include "specfid/core/errors.hpp"

namespace specfid::stats {

std::vector<double> forecast(double f0, const std::vector<std::pair<double, double>>& step_rates) {
    if (f0 < 0.0 || f0 > 1.0) throw ValidationError("forecast: f0 out of [0,1]");
    std::vector<double> out;
    out.reserve(step_rates.size() + 1);
    out.push_back(f0);
    double f = f0;
    for (const auto& [pi, r] : step_rates) {
        if (pi < 0.0 || pi > 1.0 || r < 0.0 || r > 1.0)
            throw ValidationError("forecast: rate out of [0,1]");
        f = (1.0 - pi - r) * f + pi;
        out.push_back(f);
    }
    return out;
}

std::vector<double> forecast(double f0, double pi, double r, std::size_t steps) {
    return forecast(f0, std::vector<std::pair<double, double>>(steps, {pi, r}));
}

}  // namespace specfid::stats
