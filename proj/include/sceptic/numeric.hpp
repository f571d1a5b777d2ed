#pragma once

#include <cstdint>
#include <functional>

namespace sceptic {

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_iter = 200;
};

// Standard normal distribution. cdf/sf are erfc-based and keep full relative
// accuracy deep into the tails (|x| <= 38); the quantile is a rational
// approximation polished by one Halley step, |Phi(x) - p| <= 1e-12.
double std_normal_pdf(double x);
double std_normal_cdf(double x);
double std_normal_sf(double x);
double std_normal_quantile(double p);
// Phi^{-1}(1 - q) without forming 1 - q, so tiny upper-tail levels survive.
double std_normal_isf(double q);

// Integral of f(t) / sqrt(t (1-t)) over (0,1) via the substitution
// t = sin^2(u), evaluated with a fixed 201-node Gauss-Legendre rule.
double integrate_arcsine_weighted(const std::function<double(double)>& f);
// Adaptive-Simpson cross-check of the same integral (test oracle).
double integrate_arcsine_weighted_adaptive(const std::function<double(double)>& f,
                                           double tol = 1e-12);
// Plain 201-node Gauss-Legendre on [a, b] for smooth integrands.
double integrate_gauss_legendre(const std::function<double(double)>& f,
                                double a, double b);

// Brent-style bracketed root finder. Requires f(lo) * f(hi) <= 0.
double find_root_bracketed(const std::function<double(double)>& f,
                           double lo, double hi, Tolerance tol = {});

struct MinResult {
    double x;
    double fx;
};
// Golden-section search with parabolic acceleration on [lo, hi].
MinResult minimize_scalar(const std::function<double(double)>& f,
                          double lo, double hi,
                          Tolerance tol = {1e-8, 0.0, 200});

// Regularized incomplete gamma functions (series / continued fraction).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
double chi2_cdf(double x, double df);
double chi2_sf(double x, double df);
double chi2_quantile(double p, double df);

// Counter-based uniform generator: draw n of stream (seed, stream_id) is a
// pure function of (seed, stream_id, n), so parallel runs that partition the
// counter range reproduce the single-threaded sequence bit for bit.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::uint64_t counter = 0;

    static double u01_at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t n);
    static double normal_at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t n);

    double next_u01() { return u01_at(seed, stream_id, counter++); }
    double next_normal() { return normal_at(seed, stream_id, counter++); }
};

}  // namespace sceptic
