#include "specfid/stats/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "specfid/core/errors.hpp"

namespace specfid::stats {

HoeffdingEnvelope hoeffding_envelope(std::size_t n, double delta) {
    if (n < 1) throw ValidationError("hoeffding_envelope: n must be >= 1");
    if (delta <= 0.0 || delta >= 1.0)
        throw ValidationError("hoeffding_envelope: delta must be in (0,1)");
    const double one = std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
    return {one, 2.0 * one};
}

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) throw ValidationError("normal_quantile: p must be in (0,1)");
    // Acklam's approximation: rational fits on the central region and tails.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    const double phigh = 1.0 - plow;
    double q, r, x;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= phigh) {
        q = p - 0.5;
        r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    return x;
}

std::pair<double, double> wilson_ci(std::size_t successes, std::size_t n, double confidence) {
    if (n < 1) throw ValidationError("wilson_ci: n must be >= 1");
    if (successes > n) throw ValidationError("wilson_ci: successes > n");
    if (confidence <= 0.0 || confidence >= 1.0)
        throw ValidationError("wilson_ci: confidence must be in (0,1)");
    const double z = normal_quantile(0.5 + confidence / 2.0);
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half =
        (z / denom) * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace specfid::stats
