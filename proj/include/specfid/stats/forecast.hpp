#pragma once

#include <utility>
#include <vector>

namespace specfid::stats {

// Point forecast of the fidelity recursion, equality form:
//   F_{k+1} = (1 - pi_k - r_k) * F_k + pi_k.
// Returns the trajectory including the start: out[0] = f0, out[k] = forecast
// after k steps; one step per (pi, r) pair.
std::vector<double> forecast(double f0, const std::vector<std::pair<double, double>>& step_rates);

// Constant-rate convenience overload.
std::vector<double> forecast(double f0, double pi, double r, std::size_t steps);

}  // namespace specfid::stats
