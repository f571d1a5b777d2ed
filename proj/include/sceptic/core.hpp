#pragma once

#include <limits>

namespace sceptic {

// (sqrt(5) + 1) / 2; phi^2 = phi + 1.
inline constexpr double kGoldenPhi = 1.618033988749894848204586834365638118;

// A pair of standardized test statistics with variance ratio
// c = sigma_o^2 / sigma_r^2 (relative sample size n_r / n_o).
struct StudyPair {
    double z_o = 0.0;
    double z_r = 0.0;
    double c = 1.0;
};

// Direction requirement: both estimates strictly positive.
bool both_positive(const StudyPair& pair);

struct ScepticalResult {
    double z_s2;          // smallest root of the success equation
    double two_sided_4p;  // survival of the null statistic at z_s2
    double p_one_sided;   // two_sided_4p / 4
    double p_s_star;      // controlled sceptical p-value
    double p_s_nominal;
    double p_s_golden;
};

// Smallest positive root z_S^2 of (z_o^2/z^2 - 1)(z_r^2/z^2 - 1) = c,
// computed in the cancellation-free closed form
//   z_S^2 = z_H^2 / (1 + sqrt(((a-b)^2 + 4abc) / (a+b)^2)),
// exact at c = 0 (min) and c = 1 (z_H^2 / 2).
double solve_zs2(const StudyPair& pair);

// Null distribution of z_S^2 when both studies are null. The survival
// function is computed directly for tail accuracy; cdf = 1 - sf.
double null_sf(double y, double c);
double null_cdf(double y, double c);
double null_quantile(double q, double c);

ScepticalResult sceptical_pvalues(const StudyPair& pair);

// One-sided limiting p-value as c -> infinity; depends on the statistics
// only through the geometric mean |z_o z_r|.
double p_infinity(const StudyPair& pair);

// d(p_one_sided)/dc. Requires c > 0 and nonzero statistics; the derivative
// is unbounded as c -> 0.
double p_derivative_wrt_c(const StudyPair& pair);

enum class InfimumRegime { AT_ZERO, AT_INFINITY, INTERIOR };

struct InfimumResult {
    double c_inf;   // 0, infinity, or the interior minimizer
    double p_inf;   // infimum of p_s_star over c
    InfimumRegime regime;
};

// Infimum of p_s_star over c in (0, infinity), searched on log10 c in
// [-8, 8] with both limits evaluated: p_max at 0, sqrt(p_infinity) at inf.
InfimumResult infimum_over_c(double z_o, double z_r);

// E(Y) of the null statistic; 1 - 2/pi at c = 0, 1/4 at c = 1.
double expected_zs2(double c);

}  // namespace sceptic
