#include "sceptic/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sceptic/numeric.hpp"

namespace sceptic {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrtPhi = 1.272019649514068964252422461737491492;

void validate_pair(const StudyPair& pair) {
    if (!std::isfinite(pair.z_o) || !std::isfinite(pair.z_r)) {
        throw std::invalid_argument("study pair: non-finite test statistic");
    }
    if (!(pair.c >= 0.0)) {
        std::ostringstream s;
        s << "study pair: variance ratio c must be >= 0, got " << pair.c;
        throw std::invalid_argument(s.str());
    }
}

}  // namespace

bool both_positive(const StudyPair& pair) {
    return pair.z_o > 0.0 && pair.z_r > 0.0;
}

double solve_zs2(const StudyPair& pair) {
    validate_pair(pair);
    double a = pair.z_o * pair.z_o;
    double b = pair.z_r * pair.z_r;
    if (a == 0.0 || b == 0.0) return 0.0;
    double sum = a + b;
    double zh2 = 2.0 * a * b / sum;
    double arg = ((a - b) * (a - b) + 4.0 * a * b * pair.c) / (sum * sum);
    return zh2 / (1.0 + std::sqrt(arg));
}

double null_sf(double y, double c) {
    if (!(y >= 0.0)) throw std::invalid_argument("null_sf: y must be >= 0");
    if (!(c >= 0.0)) throw std::invalid_argument("null_sf: c must be >= 0");
    if (y == 0.0) return 1.0;
    if (c < 1e-12) {
        double q = std_normal_sf(std::sqrt(y));
        return std::min(1.0, 4.0 * q * q);
    }
    if (std::abs(c - 1.0) < 1e-6) {
        return std::min(1.0, 2.0 * std_normal_sf(2.0 * std::sqrt(y)));
    }
    double u = c - 1.0;
    double val = integrate_arcsine_weighted([y, u](double t) {
        double g = y * (std::sqrt(1.0 + u * t) + 1.0) / t;
        return std::exp(-g);
    }) / kPi;
    return std::clamp(val, 0.0, 1.0);
}

double null_cdf(double y, double c) {
    return 1.0 - null_sf(y, c);
}

double null_quantile(double q, double c) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("null_quantile: q outside (0,1)");
    double target = 1.0 - q;  // solve sf(y) = 1 - q
    double hi = 100.0;
    while (null_sf(hi, c) > target) {
        hi *= 2.0;
        if (hi > 1e6) throw std::runtime_error("null_quantile: failed to bracket");
    }
    return find_root_bracketed([c, target](double y) { return null_sf(y, c) - target; },
                               0.0, hi, {1e-12, 0.0, 200});
}

ScepticalResult sceptical_pvalues(const StudyPair& pair) {
    ScepticalResult r;
    r.z_s2 = solve_zs2(pair);
    r.two_sided_4p = null_sf(r.z_s2, pair.c);
    r.p_one_sided = 0.25 * r.two_sided_4p;
    double zs = std::sqrt(r.z_s2);
    double root = std::sqrt(r.p_one_sided);
    if (both_positive(pair)) {
        r.p_s_star = root;
        r.p_s_nominal = std_normal_sf(zs);
        r.p_s_golden = std_normal_sf(kSqrtPhi * zs);
    } else {
        r.p_s_star = 1.0 - root;
        r.p_s_nominal = std_normal_cdf(zs);
        r.p_s_golden = std_normal_cdf(kSqrtPhi * zs);
    }
    return r;
}

double p_infinity(const StudyPair& pair) {
    validate_pair(pair);
    double zg2 = std::abs(pair.z_o * pair.z_r);
    double val = integrate_arcsine_weighted([zg2](double t) {
        return std::exp(-zg2 / std::sqrt(t));
    }) / (4.0 * kPi);
    return std::clamp(val, 0.0, 0.25);
}

double p_derivative_wrt_c(const StudyPair& pair) {
    validate_pair(pair);
    if (!(pair.c > 0.0)) throw std::invalid_argument("p_derivative_wrt_c: c must be > 0");
    if (pair.z_o == 0.0 || pair.z_r == 0.0) {
        throw std::invalid_argument("p_derivative_wrt_c: statistics must be nonzero");
    }
    double a = pair.z_o * pair.z_o;
    double b = pair.z_r * pair.z_r;
    double sum = a + b;
    double zh2 = 2.0 * a * b / sum;
    double B = 4.0 * a * b / (sum * sum);
    double u = pair.c - 1.0;
    double one_uB = ((a - b) * (a - b) + 4.0 * a * b * pair.c) / (sum * sum);  // 1 + u B
    double s_uB = std::sqrt(one_uB);
    double y = zh2 / (1.0 + s_uB);

    if (std::abs(u) < 1e-6) {
        // Limit u -> 0: g -> z_H^2 / t, dg/du -> (y/2)(t - B)/t with y = z_H^2/2.
        double integral = integrate_arcsine_weighted([zh2, B](double t) {
            return std::exp(-zh2 / t) * (zh2 / 4.0) * (t - B) / t;
        });
        return -integral / (4.0 * kPi);
    }

    double integral = integrate_arcsine_weighted([y, u, B, s_uB](double t) {
        double s_ut = std::sqrt(1.0 + u * t);
        double g = y * (s_ut + 1.0) / t;
        double M = t * (s_uB + 1.0) + B * (s_ut + 1.0) + u * B * t;
        double D = t * s_ut * s_uB * (1.0 + s_uB);
        double dg_du = 0.5 * y * (t - B) * M / (D * (t * s_uB + B * s_ut));
        return std::exp(-g) * dg_du;
    });
    return -integral / (4.0 * kPi);
}

InfimumResult infimum_over_c(double z_o, double z_r) {
    StudyPair probe{z_o, z_r, 1.0};
    validate_pair(probe);
    if (!both_positive(probe)) {
        throw std::invalid_argument("infimum_over_c: both statistics must be positive");
    }
    double p_max = std::max(std_normal_sf(z_o), std_normal_sf(z_r));
    double p_inf_limit = std::sqrt(p_infinity(probe));

    auto ps_at = [z_o, z_r](double log10c) {
        return sceptical_pvalues({z_o, z_r, std::pow(10.0, log10c)}).p_s_star;
    };
    double best_lc = -8.0;
    double best_val = ps_at(best_lc);
    for (double lc = -7.9; lc <= 8.0 + 1e-9; lc += 0.1) {
        double v = ps_at(lc);
        if (v < best_val) {
            best_val = v;
            best_lc = lc;
        }
    }
    MinResult m = minimize_scalar(ps_at, std::max(-8.0, best_lc - 0.1),
                                  std::min(8.0, best_lc + 0.1), {1e-8, 0.0, 200});
    if (m.fx > best_val) m = {best_lc, best_val};

    double limit_min = std::min(p_max, p_inf_limit);
    if (m.fx < limit_min - 1e-9) {
        return {std::pow(10.0, m.x), m.fx, InfimumRegime::INTERIOR};
    }
    if (p_max <= p_inf_limit) {
        return {0.0, p_max, InfimumRegime::AT_ZERO};
    }
    return {std::numeric_limits<double>::infinity(), p_inf_limit,
            InfimumRegime::AT_INFINITY};
}

double expected_zs2(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("expected_zs2: c must be >= 0");
    if (c == 0.0) return 1.0 - 2.0 / kPi;
    if (c == 1.0) return 0.25;
    double u = c - 1.0;
    return integrate_arcsine_weighted([u](double t) {
        return t / (std::sqrt(1.0 + u * t) + 1.0);
    }) / kPi;
}

}  // namespace sceptic
