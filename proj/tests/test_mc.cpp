// Tests for the Monte Carlo oracle: reproducible success-rate simulation
// against analytic targets, and the Kolmogorov-Smirnov uniformity check.
//
// All simulations use fixed seeds, so every check here is deterministic.
// Analytic targets were computed with an independent reference before this
// module was written; tolerances are quoted in simulation standard errors.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sceptic/calibrate.hpp"
#include "sceptic/mc.hpp"
#include "sceptic/numeric.hpp"

using namespace sceptic;

namespace {

SimConfig base_config(Truth truth, SimMethod method, double mu, double c,
                      std::uint64_t n, std::uint64_t seed) {
    SimConfig cfg;
    cfg.truth = truth;
    cfg.method = method;
    cfg.mu = mu;
    cfg.c = c;
    cfg.alpha = 0.025;
    cfg.n_rep = n;
    cfg.rng.seed = seed;
    return cfg;
}

void check_close(const SimResult& res, double target, double sigmas) {
    double tol = sigmas * std::sqrt(target * (1.0 - target) /
                                    static_cast<double>(res.n_rep));
    CHECK(std::fabs(res.estimate - target) <= tol);
}

}  // namespace

TEST_CASE("simulation is reproducible") {
    SimConfig cfg = base_config(Truth::INTERSECTION_NULL, SimMethod::TWO_TRIALS, 0.0,
                                1.0, 200000, 7);
    SimResult a = simulate_rate(cfg);
    SimResult b = simulate_rate(cfg);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.seed == 7);
    CHECK(a.n_rep == 200000);
}

TEST_CASE("confidence interval brackets the estimate") {
    SimConfig cfg = base_config(Truth::INTERSECTION_NULL, SimMethod::FISHER, 0.0, 1.0,
                                100000, 11);
    SimResult res = simulate_rate(cfg);
    CHECK(res.ci95.first <= res.estimate);
    CHECK(res.ci95.second >= res.estimate);
    CHECK(res.ci95.first >= 0.0);
    CHECK(res.ci95.second <= 1.0);
    CHECK(res.std_error > 0.0);
}

TEST_CASE("intersection null sizes are alpha squared") {
    // 4 sigma at 10^6 draws is about 1e-4 around the 0.000625 target.
    for (SimMethod m : {SimMethod::TWO_TRIALS, SimMethod::SCEPTICAL_CONTROLLED,
                        SimMethod::FISHER, SimMethod::STOUFFER, SimMethod::PEARSON}) {
        SimResult res = simulate_rate(
            base_config(Truth::INTERSECTION_NULL, m, 0.0, 1.0, 1000000, 13));
        check_close(res, 0.000625, 4.0);
    }
    // The controlled criterion stays exact away from c = 1 as well.
    SimResult res = simulate_rate(base_config(
        Truth::INTERSECTION_NULL, SimMethod::SCEPTICAL_CONTROLLED, 0.0, 5.0, 1000000, 17));
    check_close(res, 0.000625, 4.0);
}

TEST_CASE("union null rate matches the partial Type-I error integral") {
    double gamma = calibrate_gamma_c(0.025, 1.0).gamma_c;
    T1eQuery q;
    q.gamma = gamma;
    q.c = 1.0;
    q.drift = 2.0;
    q.null_side = NullSide::ORIGINAL_NULL;
    double target = partial_t1e(q);
    SimResult res = simulate_rate(base_config(
        Truth::UNION_NULL_ORIGINAL, SimMethod::SCEPTICAL_CONTROLLED, 2.0, 1.0, 1000000, 19));
    check_close(res, target, 4.0);

    q.null_side = NullSide::REPLICATION_NULL;
    target = partial_t1e(q);
    res = simulate_rate(base_config(Truth::UNION_NULL_REPLICATION,
                                    SimMethod::SCEPTICAL_CONTROLLED, 2.0, 1.0, 1000000,
                                    23));
    check_close(res, target, 4.0);
}

TEST_CASE("equal-effects power matches the closed form") {
    // Both studies draw around the same standardized effect; the two-trials
    // rate factorizes into two normal tails.
    double mu = 2.8;
    double za = std_normal_isf(0.025);
    double target = std_normal_sf(za - mu) * std_normal_sf(za - mu);
    SimResult res = simulate_rate(
        base_config(Truth::EQUAL_EFFECTS, SimMethod::TWO_TRIALS, mu, 1.0, 1000000, 29));
    check_close(res, target, 4.0);
}

TEST_CASE("simulation validation") {
    SimConfig cfg = base_config(Truth::INTERSECTION_NULL, SimMethod::TWO_TRIALS, 1.0,
                                1.0, 100000, 1);
    // A drift under the intersection null is contradictory.
    CHECK_THROWS_AS(simulate_rate(cfg), std::invalid_argument);
    cfg.mu = 0.0;
    cfg.n_rep = 100;
    CHECK_THROWS_AS(simulate_rate(cfg), std::invalid_argument);
}

TEST_CASE("KS test accepts uniform grids and rejects skewed ones") {
    std::vector<double> grid(1000);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = (static_cast<double>(i) + 0.5) / 1000.0;
    }
    auto [d_grid, p_grid] = ks_uniformity(grid);
    CHECK(d_grid <= 0.001 + 1e-12);
    CHECK(p_grid > 0.98);

    std::vector<double> skewed = grid;
    for (double& x : skewed) x = x * x;
    auto [d_skew, p_skew] = ks_uniformity(skewed);
    CHECK(d_skew > 0.2);
    CHECK(p_skew < 1e-10);

    std::vector<double> tiny(50, 0.5);
    CHECK_THROWS_AS(ks_uniformity(tiny), std::invalid_argument);
}

TEST_CASE("null p-value scales are uniform") {
    RngStream rng;
    rng.seed = 31;
    for (double c : {0.0, 1.0, 10.0}) {
        std::vector<double> draws = sample_two_sided_4p(c, 50000, rng);
        auto [d, p] = ks_uniformity(draws);
        CHECK(d > 0.0);
        CHECK(p > 1e-4);
    }
    std::vector<double> lim = sample_4p_infinity(50000, rng);
    auto [d, p] = ks_uniformity(lim);
    CHECK(d > 0.0);
    CHECK(p > 1e-4);
}
