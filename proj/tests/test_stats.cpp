#include <cmath>

#include "check.hpp"
#include "specfid/core/errors.hpp"
#include "specfid/core/io.hpp"
#include "specfid/core/rng.hpp"
#include "specfid/stats/bootstrap.hpp"
#include "specfid/stats/complexity.hpp"
#include "specfid/stats/forecast.hpp"
#include "specfid/stats/intervals.hpp"
#include "specfid/stats/rates.hpp"

using namespace specfid;
using namespace specfid::stats;

namespace {

// Reference transition table: seven contingencies with their expected
// (pi, r, f_dagger) at 3 decimals.
struct Row {
    TransitionContingency c;
    double pi, r, fd;
};

const Row kRows[] = {
    {{439, 24, 204, 118}, 0.634, 0.052, 0.924},
    {{622, 21, 80, 62}, 0.563, 0.033, 0.945},
    {{687, 15, 24, 59}, 0.289, 0.021, 0.931},
    {{698, 13, 18, 56}, 0.243, 0.018, 0.930},
    {{699, 17, 30, 39}, 0.435, 0.024, 0.948},
    {{716, 13, 18, 38}, 0.321, 0.018, 0.947},
    {{713, 21, 19, 32}, 0.373, 0.029, 0.929},
};

void test_estimate_rates_reference_rows() {
    for (const Row& row : kRows) {
        const RateEstimates r = estimate_rates(row.c);
        REQUIRE(r.pi_hat && r.r_hat && r.gamma && r.f_dagger);
        REQUIRE_NEAR(*r.pi_hat, row.pi, 0.0005);
        REQUIRE_NEAR(*r.r_hat, row.r, 0.0005);
        REQUIRE_NEAR(*r.f_dagger, row.fd, 0.0005);
        REQUIRE_NEAR(*r.gamma, 1.0 - *r.pi_hat - *r.r_hat, 1e-15);
        REQUIRE(*r.pi_hat >= 0.0 && *r.pi_hat <= 1.0);
        REQUIRE(*r.r_hat >= 0.0 && *r.r_hat <= 1.0);
        REQUIRE(*r.f_dagger >= 0.0 && *r.f_dagger <= 1.0);
        REQUIRE(*r.gamma >= -1.0 && *r.gamma <= 1.0);
    }
}

void test_estimate_rates_degenerate() {
    REQUIRE_THROWS_AS(estimate_rates({0, 0, 0, 0}), ValidationError);

    // perfect-repair regime: regr = 0 with a live denominator
    const RateEstimates perfect = estimate_rates({100, 0, 30, 10});
    REQUIRE_NEAR(*perfect.r_hat, 0.0, 0.0);
    REQUIRE_NEAR(*perfect.f_dagger, 1.0, 0.0);

    // no prior non-agree probes: pi undefined, r still defined
    const RateEstimates no_impr = estimate_rates({90, 10, 0, 0});
    REQUIRE(!no_impr.pi_hat.has_value());
    REQUIRE(no_impr.r_hat.has_value());
    REQUIRE(!no_impr.gamma.has_value() && !no_impr.f_dagger.has_value());
}

void test_forecast_reference_trajectory() {
    // single step, quoted arithmetic
    const auto one = forecast(0.590, {{0.634, 0.052}});
    REQUIRE_NEAR(one[1], 0.819, 0.001);

    // full chained trajectory against the predicted row
    std::vector<std::pair<double, double>> steps;
    for (const Row& row : kRows) {
        const RateEstimates r = estimate_rates(row.c);
        steps.push_back({*r.pi_hat, *r.r_hat});
    }
    const auto traj = forecast(0.590, steps);
    const double expected[] = {0.819, 0.894, 0.906, 0.912, 0.929, 0.935, 0.932};
    REQUIRE(traj.size() == 8);
    for (int k = 1; k <= 7; ++k) REQUIRE_NEAR(traj[k], expected[k - 1], 0.001);
}

void test_forecast_properties() {
    const auto flat = forecast(0.4, 0.0, 0.0, 10);
    for (double f : flat) REQUIRE_NEAR(f, 0.4, 0.0);

    // r = 0: monotone convergence to 1
    const auto up = forecast(0.2, 0.3, 0.0, 60);
    for (std::size_t i = 1; i < up.size(); ++i) REQUIRE(up[i] >= up[i - 1]);
    REQUIRE_NEAR(up.back(), 1.0, 1e-8);

    // constant rates: geometric approach to the fixed point
    const double pi = 0.3, r = 0.1;
    const double fd = pi / (pi + r);
    const double gamma = 1.0 - pi - r;
    const std::size_t K = 20;
    const auto traj = forecast(0.2, pi, r, K);
    REQUIRE(std::fabs(traj.back() - fd) < std::pow(gamma, static_cast<double>(K)));

    REQUIRE_THROWS_AS(forecast(1.5, 0.1, 0.1, 3), ValidationError);
}

void test_hoeffding_envelope() {
    const auto big = hoeffding_envelope(785, 0.05);
    REQUIRE_NEAR(big.two_sided, 0.097, 0.0005);
    REQUIRE_NEAR(big.two_sided, 2.0 * big.one_sided, 0.0);

    const auto small = hoeffding_envelope(50, 0.05);
    REQUIRE_NEAR(small.two_sided, 0.384, 0.001);

    // sqrt scaling: n -> 4n halves the bound
    REQUIRE_NEAR(hoeffding_envelope(200, 0.05).two_sided,
                 2.0 * hoeffding_envelope(800, 0.05).two_sided, 1e-12);

    // strictly decreasing in n, increasing as delta shrinks
    double prev = hoeffding_envelope(10, 0.05).one_sided;
    for (std::size_t n : {20, 40, 80, 160}) {
        const double cur = hoeffding_envelope(n, 0.05).one_sided;
        REQUIRE(cur < prev);
        prev = cur;
    }
    REQUIRE(hoeffding_envelope(100, 0.01).one_sided > hoeffding_envelope(100, 0.05).one_sided);

    REQUIRE_THROWS_AS(hoeffding_envelope(0, 0.05), ValidationError);
    REQUIRE_THROWS_AS(hoeffding_envelope(10, 0.0), ValidationError);
}

void test_wilson_ci() {
    const auto pooled = wilson_ci(280, 283, 0.95);
    REQUIRE_NEAR(pooled.first, 0.969, 0.001);
    REQUIRE_NEAR(pooled.second, 0.996, 0.001);

    const auto cfg = wilson_ci(99, 100, 0.95);
    REQUIRE_NEAR(cfg.first, 0.945, 0.001);
    REQUIRE_NEAR(cfg.second, 0.998, 0.001);

    const auto cfg2 = wilson_ci(98, 99, 0.95);
    REQUIRE_NEAR(cfg2.first, 0.945, 0.001);
    REQUIRE_NEAR(cfg2.second, 0.998, 0.001);

    REQUIRE_NEAR(wilson_ci(0, 25, 0.95).first, 0.0, 0.0);
    REQUIRE_NEAR(wilson_ci(25, 25, 0.95).second, 1.0, 1e-12);

    // contains the sample proportion; width shrinks with n
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng.next_below(500);
        const std::size_t s = rng.next_below(n + 1);
        const auto [lo, hi] = wilson_ci(s, n, 0.95);
        const double phat = static_cast<double>(s) / static_cast<double>(n);
        REQUIRE(lo <= phat + 1e-12 && phat <= hi + 1e-12);
    }
    const auto w100 = wilson_ci(90, 100, 0.95);
    const auto w1m = wilson_ci(900000, 1000000, 0.95);
    REQUIRE((w1m.second - w1m.first) < (w100.second - w100.first));
}

void test_balance_identity() {
    RateEstimates rates;
    rates.pi_hat = 0.373;
    rates.r_hat = 0.029;
    const auto [imp, reg] = balance_identity(0.935, rates, 785);
    REQUIRE_NEAR(imp, 19.0, 0.1);
    REQUIRE_NEAR(reg, 21.3, 0.1);

    // at the fixed point the two sides balance exactly
    const double fd = *rates.pi_hat / (*rates.pi_hat + *rates.r_hat);
    const auto [bi, br] = balance_identity(fd, rates, 785);
    REQUIRE(std::fabs(bi - br) < 1e-12);

    const auto [zi, zr] = balance_identity(0.0, rates, 100);
    REQUIRE_NEAR(zr, 0.0, 0.0);
    REQUIRE(zi > 0.0);

    RateEstimates missing;
    missing.pi_hat = 0.3;
    REQUIRE_THROWS_AS(balance_identity(0.5, missing, 10), ValidationError);
}

void test_bootstrap_fixed_point_window() {
    const std::vector<TransitionContingency> window = {kRows[0].c, kRows[1].c, kRows[2].c,
                                                       kRows[3].c};
    const FixedPointForecast fp = bootstrap_fixed_point(window, 2000, 20240901, 0.590);
    REQUIRE_NEAR(fp.f_dagger, 0.931, 0.002);
    REQUIRE(fp.bootstrap_ci.first <= fp.f_dagger && fp.f_dagger <= fp.bootstrap_ci.second);
    // observed plateau values lie inside the 95% CI
    for (double observed : {0.929, 0.935, 0.932}) {
        REQUIRE(fp.bootstrap_ci.first <= observed && observed <= fp.bootstrap_ci.second);
    }
    REQUIRE(fp.predicted_trajectory.size() == 5);
    REQUIRE_NEAR(fp.predicted_trajectory[1], 0.819, 0.001);
    REQUIRE(fp.fit_first_k == 0 && fp.fit_last_k == 3);

    // same seed, same forecast
    const FixedPointForecast fp2 = bootstrap_fixed_point(window, 2000, 20240901, 0.590);
    REQUIRE(fp.bootstrap_ci == fp2.bootstrap_ci);
}

void test_bootstrap_single_and_degenerate() {
    const FixedPointForecast one = bootstrap_fixed_point({kRows[0].c}, 1, 7);
    REQUIRE(one.bootstrap_ci.first == one.bootstrap_ci.second);
    REQUIRE(std::fabs(one.bootstrap_ci.first - one.f_dagger) < 0.05);

    REQUIRE_THROWS_AS(bootstrap_fixed_point({}, 100, 1), ValidationError);
    REQUIRE_THROWS_AS(bootstrap_fixed_point({TransitionContingency{5, 0, 0, 0}}, 100, 1),
                      ValidationError);
}

void test_bootstrap_coverage() {
    // Known truth: a multinomial contingency with rates pi* = 0.6, r* = 0.05.
    // CI coverage over repeated draws should sit near the nominal 95%.
    const double pi_true = 0.6, r_true = 0.05;
    const double fd_true = pi_true / (pi_true + r_true);
    const std::size_t n_agree = 400, n_non = 200;
    const std::vector<double> cell_p = {
        static_cast<double>(n_agree) * (1.0 - r_true),  // held
        static_cast<double>(n_agree) * r_true,          // regr
        static_cast<double>(n_non) * pi_true,           // impr
        static_cast<double>(n_non) * (1.0 - pi_true),   // stuck
    };
    const int trials = 500;
    int covered = 0;
    for (int t = 0; t < trials; ++t) {
        Rng rng(Rng::derive(987654, t));
        TransitionContingency c;
        for (std::size_t i = 0; i < n_agree + n_non; ++i) {
            switch (rng.categorical(cell_p)) {
                case 0: ++c.held; break;
                case 1: ++c.regr; break;
                case 2: ++c.impr; break;
                default: ++c.stuck; break;
            }
        }
        const FixedPointForecast fp = bootstrap_fixed_point({c}, 200, Rng::derive(13, t));
        if (fp.bootstrap_ci.first <= fd_true && fd_true <= fp.bootstrap_ci.second) ++covered;
    }
    const double coverage = static_cast<double>(covered) / trials;
    REQUIRE_MSG(coverage >= 0.90 && coverage <= 0.99, "coverage=" + std::to_string(coverage));
}

void test_spec_complexity() {
    const std::string doc = io::read_file(std::string(FIXTURES_DIR) + "/calcdisc_spec.md");
    const SpecComplexity c = spec_complexity(doc);
    REQUIRE(c.anchors == 5);
    REQUIRE(c.shall_clauses == 5);
    REQUIRE(c.conditionals == 4);
    REQUIRE(c.section_headers == 1);
    REQUIRE(c.total_lines > 0);

    const SpecComplexity empty = spec_complexity("");
    REQUIRE(empty.anchors == 0 && empty.shall_clauses == 0 && empty.conditionals == 0 &&
            empty.section_headers == 0 && empty.total_lines == 0);

    const SpecComplexity one =
        spec_complexity("When the lamp is lit, the system shall dim the display.");
    REQUIRE(one.conditionals == 1 && one.shall_clauses == 1 && one.total_lines == 1);
}

}  // namespace

int main() {
    RUN(test_estimate_rates_reference_rows);
    RUN(test_estimate_rates_degenerate);
    RUN(test_forecast_reference_trajectory);
    RUN(test_forecast_properties);
    RUN(test_hoeffding_envelope);
    RUN(test_wilson_ci);
    RUN(test_balance_identity);
    RUN(test_bootstrap_fixed_point_window);
    RUN(test_bootstrap_single_and_degenerate);
    RUN(test_bootstrap_coverage);
    RUN(test_spec_complexity);
    return finish();
}
