// Tests for the numerics layer: normal distribution helpers, quadrature,
// root finding, minimization, incomplete gamma, and the counter-based RNG.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sceptic/numeric.hpp"

using namespace sceptic;

TEST_CASE("normal cdf/sf anchors and symmetry") {
    CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std_normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(std_normal_sf(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    for (double x : {-8.0, -3.2, -0.7, 0.0, 0.4, 2.1, 6.5, 30.0}) {
        CHECK(std_normal_sf(x) == doctest::Approx(std_normal_cdf(-x)).epsilon(1e-14));
    }
    // Far-tail values stay accurate; relevant because study tables can hold
    // z-values beyond 6.
    CHECK(std_normal_sf(8.0) == doctest::Approx(6.22096057427174e-16).scale(0.0).epsilon(1e-9));
}

TEST_CASE("normal quantile round trips") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(std_normal_isf(0.025) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    for (double p : {1e-12, 1e-6, 0.025, 0.3, 0.5, 0.8, 0.999999}) {
        CHECK(std_normal_cdf(std_normal_quantile(p)) ==
              doctest::Approx(p).scale(0.0).epsilon(1e-9));
    }
    // The cdf route is well conditioned only up to about five sigma; past
    // that, rounding the cdf to the nearest double already moves the abscissa
    // by more than the tolerance. The upper tail round trips through sf.
    for (double x = -6.0; x <= 5.0; x += 0.5) {
        CHECK(std_normal_quantile(std_normal_cdf(x)) == doctest::Approx(x).epsilon(1e-10));
    }
    for (double x = -5.0; x <= 8.0; x += 0.5) {
        CHECK(std_normal_isf(std_normal_sf(x)) == doctest::Approx(x).epsilon(1e-10));
    }
    CHECK_THROWS_AS(std_normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("arcsine-weighted quadrature") {
    // The weight alone integrates to pi; the Beta(1/2,1/2) density to 1.
    CHECK(integrate_arcsine_weighted([](double) { return 1.0; }) ==
          doctest::Approx(3.14159265358979324).epsilon(1e-14));
    auto decay = [](double t) { return std::exp(-1.0 / std::sqrt(t)); };
    double fixed = integrate_arcsine_weighted(decay);
    double adaptive = integrate_arcsine_weighted_adaptive(decay);
    CHECK(fixed == doctest::Approx(adaptive).epsilon(1e-11));
    // Identity f(t) = t: integral of t/sqrt(t(1-t)) over (0,1) is pi/2.
    CHECK(integrate_arcsine_weighted([](double t) { return t; }) ==
          doctest::Approx(1.57079632679489662).epsilon(1e-13));
}

TEST_CASE("Gauss-Legendre rule") {
    auto poly = [](double t) { return ((3.0 * t - 2.0) * t + 5.0) * t * t; };
    // 3t^4 - 2t^3 + 5t^2 on [0,1]: 3/5 - 1/2 + 5/3 = 53/30.
    CHECK(integrate_gauss_legendre(poly, 0.0, 1.0) ==
          doctest::Approx(53.0 / 30.0).epsilon(1e-14));
    CHECK(integrate_gauss_legendre([](double x) { return std::sin(x); }, 0.0,
                                   3.14159265358979324) ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(integrate_gauss_legendre([](double x) { return std_normal_pdf(x); }, -10.0,
                                   10.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("bracketed root finder") {
    double r = find_root_bracketed([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
    CHECK(r == doctest::Approx(0.7390851332151607).epsilon(1e-10));
    r = find_root_bracketed([](double x) { return (x * x - 2.0) * x - 5.0; }, 2.0, 3.0);
    CHECK(r == doctest::Approx(2.0945514815423265).epsilon(1e-10));
    CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("scalar minimizer") {
    MinResult m = minimize_scalar([](double x) { return (x - 2.0) * (x - 2.0) + 3.0; },
                                  0.0, 5.0);
    CHECK(m.x == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(m.fx == doctest::Approx(3.0).epsilon(1e-10));
    m = minimize_scalar([](double x) { return ((x - 3.0) * x) * (x * x) + 2.0; }, 0.0, 3.0);
    CHECK(m.x == doctest::Approx(2.25).epsilon(1e-6));
    CHECK(m.fx == doctest::Approx(-6.54296875).epsilon(1e-9));
}

TEST_CASE("incomplete gamma and chi-squared") {
    // gamma_p(1/2, x) = erf(sqrt(x)).
    CHECK(gamma_p(0.5, 1.0) == doctest::Approx(0.842700792949715).epsilon(1e-12));
    CHECK(gamma_p(2.0, 1.5) + gamma_q(2.0, 1.5) == doctest::Approx(1.0).epsilon(1e-14));
    // Four degrees of freedom has the closed form 1 - e^{-x/2}(1 + x/2).
    for (double x : {0.3, 1.0, 3.0, 7.5, 19.5}) {
        double closed = 1.0 - std::exp(-0.5 * x) * (1.0 + 0.5 * x);
        CHECK(chi2_cdf(x, 4) == doctest::Approx(closed).epsilon(1e-12));
        CHECK(chi2_sf(x, 4) == doctest::Approx(1.0 - closed).epsilon(1e-12));
    }
    CHECK(chi2_cdf(3.0, 4) == doctest::Approx(0.4421745996289252).epsilon(1e-12));
    for (double p : {1e-4, 0.01, 0.3, 0.9, 0.999}) {
        CHECK(chi2_cdf(chi2_quantile(p, 4), 4) == doctest::Approx(p).epsilon(1e-9));
        CHECK(chi2_cdf(chi2_quantile(p, 2), 2) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(chi2_quantile(1.0 - 0.000625, 4) ==
          doctest::Approx(19.505875840765203).epsilon(1e-9));
}

TEST_CASE("counter RNG is a pure function of (seed, stream, index)") {
    RngStream a{42, 7, 0};
    std::vector<double> first;
    for (int i = 0; i < 64; ++i) first.push_back(a.next_u01());
    for (int i = 0; i < 64; ++i) {
        double again = RngStream::u01_at(42, 7, static_cast<std::uint64_t>(i));
        CHECK(again == first[static_cast<std::size_t>(i)]);
        CHECK(first[static_cast<std::size_t>(i)] > 0.0);
        CHECK(first[static_cast<std::size_t>(i)] < 1.0);
    }
    // Distinct streams and distinct seeds decorrelate immediately.
    CHECK(RngStream::u01_at(42, 7, 0) != RngStream::u01_at(42, 8, 0));
    CHECK(RngStream::u01_at(42, 7, 0) != RngStream::u01_at(43, 7, 0));
    CHECK(RngStream::normal_at(42, 7, 3) ==
          std_normal_quantile(RngStream::u01_at(42, 7, 3)));
}

TEST_CASE("uniform draws look uniform in the aggregate") {
    RngStream s{2026, 0, 0};
    int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = s.next_u01();
        sum += u;
        sumsq += u * u;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    // Mean 1/2 (se ~ 0.002) and variance 1/12 (se ~ 0.0006).
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
    CHECK(var == doctest::Approx(1.0 / 12.0).scale(0.0).epsilon(0.03));
}
