// Tests for replication design: conditional and predictive power, required
// relative sample size, project power, and the crossover points between the
// controlled sceptical criterion and the two-trials rule.

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sceptic/calibrate.hpp"
#include "sceptic/design.hpp"
#include "sceptic/errors.hpp"
#include "sceptic/numeric.hpp"

using namespace sceptic;

TEST_CASE("method levels") {
    CHECK(method_level(Method::TWO_TRIALS, 0.025, 1.0) == 0.025);
    CHECK(method_level(Method::SCEPTICAL_NOMINAL, 0.025, 1.0) == 0.025);
    CHECK(method_level(Method::SCEPTICAL_CONTROLLED, 0.025, 1.0) ==
          doctest::Approx(calibrate_gamma_c(0.025, 1.0).gamma_c).epsilon(1e-12));
    CHECK(method_level(Method::SCEPTICAL_GOLDEN, 0.025, 7.0) ==
          doctest::Approx(golden_level(0.025)).epsilon(1e-12));
}

TEST_CASE("conditional power anchors at z_o = 2, c = 1") {
    CHECK(conditional_power(2.0, 1.0, 0.025, Method::TWO_TRIALS) ==
          doctest::Approx(0.5159677934423317).epsilon(1e-10));
    CHECK(conditional_power(2.0, 1.0, 0.025, Method::SCEPTICAL_CONTROLLED) ==
          doctest::Approx(0.3787618941742914).epsilon(1e-8));
    CHECK(conditional_power(2.0, 1.0, 0.025, Method::SCEPTICAL_NOMINAL) ==
          doctest::Approx(2.168162721126758e-15).scale(0.0).epsilon(1e-7));
    CHECK(conditional_power(2.0, 1.0, 0.025, Method::SCEPTICAL_GOLDEN) ==
          doctest::Approx(0.33840502502075354).epsilon(1e-10));
    CHECK(conditional_power(2.0, 2.0, 0.025, Method::SCEPTICAL_GOLDEN) ==
          doctest::Approx(0.41197957824214126).epsilon(1e-10));
}

TEST_CASE("predictive power anchors at z_o = 2, c = 1") {
    CHECK(predictive_power(2.0, 1.0, 0.025, Method::TWO_TRIALS) ==
          doctest::Approx(0.5112924430528409).epsilon(1e-10));
    CHECK(predictive_power(2.0, 1.0, 0.025, Method::SCEPTICAL_CONTROLLED) ==
          doctest::Approx(0.4135945753325708).epsilon(1e-8));
    CHECK(predictive_power(2.0, 1.0, 0.025, Method::SCEPTICAL_NOMINAL) ==
          doctest::Approx(1.4521200514936797e-08).scale(0.0).epsilon(1e-7));
    CHECK(predictive_power(2.0, 1.0, 0.025, Method::SCEPTICAL_GOLDEN) ==
          doctest::Approx(0.3840976768478745).epsilon(1e-10));
}

TEST_CASE("power below the critical value") {
    // The two-trials rule never gates on the original study; the sceptical
    // criteria require z_o above their critical value.
    CHECK(conditional_power(0.5, 1.0, 0.025, Method::TWO_TRIALS) ==
          doctest::Approx(std_normal_sf(std_normal_isf(0.025) - 0.5)).epsilon(1e-12));
    CHECK(conditional_power(0.5, 1.0, 0.025, Method::SCEPTICAL_CONTROLLED) == 0.0);
    CHECK(predictive_power(0.5, 1.0, 0.025, Method::SCEPTICAL_NOMINAL) == 0.0);
}

TEST_CASE("predictive approaches conditional as c -> 0") {
    for (Method m : {Method::TWO_TRIALS, Method::SCEPTICAL_CONTROLLED}) {
        double cond = conditional_power(2.3, 1e-10, 0.025, m);
        double pred = predictive_power(2.3, 1e-10, 0.025, m);
        CHECK(pred == doctest::Approx(cond).epsilon(1e-4));
    }
}

TEST_CASE("predictive two-trials saturates at the original evidence") {
    // As c grows the predictive probability tends to Phi(z_o).
    double sup = std_normal_cdf(1.8);
    CHECK(predictive_power(1.8, 1e8, 0.025, Method::TWO_TRIALS) ==
          doctest::Approx(sup).epsilon(1e-3));
    CHECK(predictive_power(1.8, 1e4, 0.025, Method::TWO_TRIALS) < sup);
}

TEST_CASE("required sample size: two-trials closed form") {
    DesignRequest req;
    req.z_o = 2.5;
    req.alpha = 0.025;
    req.target_power = 0.9;
    req.power_kind = PowerKind::CONDITIONAL;
    req.method = Method::TWO_TRIALS;
    DesignResult res = required_relative_sample_size(req);
    CHECK(res.c_required == doctest::Approx(1.6811876898304996).epsilon(1e-8));
    CHECK(res.achieved_power == doctest::Approx(0.9).epsilon(1e-9));
    CHECK(res.gamma_used == 0.025);
    CHECK(res.conditional_t1e_at_design == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("required sample size round trips through the power function") {
    for (Method m : {Method::TWO_TRIALS, Method::SCEPTICAL_CONTROLLED,
                     Method::SCEPTICAL_GOLDEN}) {
        for (PowerKind kind : {PowerKind::CONDITIONAL, PowerKind::PREDICTIVE}) {
            DesignRequest req;
            req.z_o = 2.8;
            req.alpha = 0.025;
            req.target_power = 0.85;
            req.power_kind = kind;
            req.method = m;
            DesignResult res = required_relative_sample_size(req);
            double back = (kind == PowerKind::CONDITIONAL)
                              ? conditional_power(2.8, res.c_required, 0.025, m)
                              : predictive_power(2.8, res.c_required, 0.025, m);
            CHECK(back == doctest::Approx(0.85).epsilon(1e-6));
            CHECK(res.achieved_power == doctest::Approx(0.85).epsilon(1e-6));
            CHECK(res.gamma_used ==
                  doctest::Approx(method_level(m, 0.025, res.c_required)).epsilon(1e-10));
        }
    }
}

TEST_CASE("required sample size picks the smallest crossing") {
    // For the nominal criterion with z_o between the critical value and its
    // golden multiple, power rises and then falls in c; the target 0.04 is
    // crossed twice and the design must return the first crossing.
    DesignRequest req;
    req.z_o = 2.2;
    req.alpha = 0.025;
    req.target_power = 0.04;
    req.power_kind = PowerKind::CONDITIONAL;
    req.method = Method::SCEPTICAL_NOMINAL;
    DesignResult res = required_relative_sample_size(req);
    CHECK(res.c_required == doctest::Approx(0.014189336799961616).epsilon(1e-6));
}

TEST_CASE("infeasible targets throw with the supremum attached") {
    DesignRequest req;
    req.z_o = 2.2;
    req.alpha = 0.025;
    req.target_power = 0.3;
    req.power_kind = PowerKind::CONDITIONAL;
    req.method = Method::SCEPTICAL_NOMINAL;
    bool threw = false;
    try {
        required_relative_sample_size(req);
    } catch (const infeasibility_error& e) {
        threw = true;
        // The reachable maximum is about 0.054 at c near 0.127.
        CHECK(e.supremum == doctest::Approx(0.05399614449153807).epsilon(1e-4));
    }
    CHECK(threw);

    req.z_o = 0.5;
    req.target_power = 0.8;
    req.power_kind = PowerKind::PREDICTIVE;
    req.method = Method::TWO_TRIALS;
    threw = false;
    try {
        required_relative_sample_size(req);
    } catch (const infeasibility_error& e) {
        threw = true;
        CHECK(e.supremum < 0.8);
        CHECK(e.supremum == doctest::Approx(std_normal_cdf(0.5)).epsilon(2e-3));
    }
    CHECK(threw);
}

TEST_CASE("design request validation") {
    DesignRequest req;
    req.z_o = -1.0;
    CHECK_THROWS_AS(required_relative_sample_size(req), std::invalid_argument);
    req.z_o = 2.0;
    req.target_power = 1.0;
    CHECK_THROWS_AS(required_relative_sample_size(req), std::invalid_argument);
    CHECK_THROWS_AS(conditional_power(2.0, -1.0, 0.025, Method::TWO_TRIALS),
                    std::invalid_argument);
}

TEST_CASE("project power anchors") {
    ProjectPowerQuery q;
    q.alpha = 0.025;
    q.original_power = 0.8;
    q.c = 2.0;
    q.method = Method::TWO_TRIALS;
    CHECK(project_power(q) == doctest::Approx(0.781889).epsilon(1e-5));
    q.method = Method::SCEPTICAL_CONTROLLED;
    CHECK(project_power(q) == doctest::Approx(0.868508).epsilon(1e-5));
    q.method = Method::TWO_TRIALS;
    q.c = 1024.0;
    CHECK(project_power(q) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("project power at a powerless original design is the squared level") {
    // original_power = alpha makes the planning mean zero, so both studies
    // are null and the success probability is the exact overall size.
    ProjectPowerQuery q;
    q.alpha = 0.025;
    q.original_power = 0.025;
    q.c = 1.0;
    q.method = Method::TWO_TRIALS;
    CHECK(q.mu() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(project_power(q) == doctest::Approx(0.000625).scale(0.0).epsilon(1e-9));
    q.method = Method::SCEPTICAL_CONTROLLED;
    CHECK(project_power(q) == doctest::Approx(0.000625).scale(0.0).epsilon(1e-5));
}

TEST_CASE("crossover points") {
    CHECK(power_ratio_crossover(0.025) == doctest::Approx(0.00877531).scale(0.0).epsilon(1e-4));
    CHECK(sample_size_crossover(0.025, 0.8) == doctest::Approx(0.00851228).scale(0.0).epsilon(1e-4));
    CHECK(sample_size_crossover(0.025, 0.9) == doctest::Approx(0.00829922).scale(0.0).epsilon(1e-4));
    CHECK(sample_size_crossover(0.025, 0.95) ==
          doctest::Approx(0.00815514).scale(0.0).epsilon(1e-4));
    CHECK(sample_size_crossover_limit(0.025) ==
          doctest::Approx(0.00648739).scale(0.0).epsilon(1e-4));
    // Higher power targets move the crossover down, toward the limit.
    CHECK(sample_size_crossover(0.025, 0.9) < sample_size_crossover(0.025, 0.8));
    CHECK(sample_size_crossover_limit(0.025) < sample_size_crossover(0.025, 0.95));
}
