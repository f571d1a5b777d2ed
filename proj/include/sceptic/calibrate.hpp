#pragma once

namespace sceptic {

struct CalibrationResult {
    double alpha;
    double c;
    double gamma_c;               // controlled success level
    double z_gamma_c;             // critical value Phi^{-1}(1 - gamma_c)
    double achieved_overall_t1e;  // cross-check, alpha^2 within 1e-6
};

enum class NullSide { BOTH, ORIGINAL_NULL, REPLICATION_NULL };

struct T1eQuery {
    double gamma;
    double c;
    double drift = 0.0;  // standardized mean of the non-null study
    NullSide null_side = NullSide::BOTH;
};

// Smallest replication statistic achieving success at level gamma given z_o:
// z_gamma * sqrt(1 + c / (z_o^2 / z_gamma^2 - 1)). Throws infeasibility_error
// when z_o <= z_gamma.
double zr_min(double z_o, double c, double gamma);

// Probability of one-sided success under the intersection null.
double overall_t1e(double gamma, double c);

// Level gamma_c(alpha, c) with exact overall size alpha^2, found by
// inverting the null distribution at 1 - 4 alpha^2.
CalibrationResult calibrate_gamma_c(double alpha, double c);

// Success probability when exactly one study is null; bounded by gamma.
double partial_t1e(const T1eQuery& query);

// Probability of success under a null replication effect given p_o, at the
// controlled level for (alpha, c). Returns 0 when p_o >= gamma_c.
double conditional_t1e(double p_o, double c, double alpha);

// Largest p_r still achieving success at gamma_c; 0 when the region is empty.
double success_region_boundary(double p_o, double alpha, double c);

// gamma(alpha) = 1 - Phi(z_alpha / sqrt(phi)), the golden level.
double golden_level(double alpha);

}  // namespace sceptic
