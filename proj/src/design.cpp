#include "sceptic/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sceptic/calibrate.hpp"
#include "sceptic/errors.hpp"
#include "sceptic/numeric.hpp"

namespace sceptic {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        std::ostringstream s;
        s << "alpha must lie in (0, 0.5), got " << alpha;
        throw std::invalid_argument(s.str());
    }
}

void check_power_inputs(double z_o, double c, double alpha) {
    check_alpha(alpha);
    if (!(z_o > 0.0)) throw std::invalid_argument("z_o must be > 0");
    if (!(c > 0.0)) throw std::invalid_argument("c must be > 0");
}

// Bound on z_r that the method requires for success, or +inf when the
// original already rules success out.
double success_bound(double z_o, double c, double alpha, Method method) {
    if (method == Method::TWO_TRIALS) return std_normal_isf(alpha);
    double gamma = method_level(method, alpha, c);
    double zg = std_normal_isf(gamma);
    if (z_o <= zg) return std::numeric_limits<double>::infinity();
    return zr_min(z_o, c, gamma);
}

}  // namespace

double ProjectPowerQuery::mu() const {
    return std_normal_isf(alpha) + std_normal_quantile(original_power);
}

double method_level(Method method, double alpha, double c) {
    check_alpha(alpha);
    switch (method) {
        case Method::SCEPTICAL_CONTROLLED:
            return calibrate_gamma_c(alpha, c).gamma_c;
        case Method::SCEPTICAL_GOLDEN:
            return golden_level(alpha);
        case Method::TWO_TRIALS:
        case Method::SCEPTICAL_NOMINAL:
            return alpha;
    }
    throw std::invalid_argument("unknown method");
}

double conditional_power(double z_o, double c, double alpha, Method method) {
    check_power_inputs(z_o, c, alpha);
    double bound = success_bound(z_o, c, alpha, method);
    if (std::isinf(bound)) return 0.0;
    return std_normal_sf(bound - std::sqrt(c) * z_o);
}

double predictive_power(double z_o, double c, double alpha, Method method) {
    check_power_inputs(z_o, c, alpha);
    double bound = success_bound(z_o, c, alpha, method);
    if (std::isinf(bound)) return 0.0;
    return std_normal_sf((bound - std::sqrt(c) * z_o) / std::sqrt(1.0 + c));
}

DesignResult required_relative_sample_size(const DesignRequest& req) {
    check_alpha(req.alpha);
    if (!(req.z_o > 0.0)) throw std::invalid_argument("z_o must be > 0");
    if (!(req.target_power > req.alpha && req.target_power < 1.0)) {
        std::ostringstream s;
        s << "target_power must lie in (alpha, 1), got " << req.target_power;
        throw std::invalid_argument(s.str());
    }

    auto power_at = [&req](double c) {
        return req.power_kind == PowerKind::CONDITIONAL
                   ? conditional_power(req.z_o, c, req.alpha, req.method)
                   : predictive_power(req.z_o, c, req.alpha, req.method);
    };
    auto deficit = [&](double lc) { return power_at(std::pow(10.0, lc)) - req.target_power; };

    auto finish = [&](double c_req) {
        DesignResult out;
        out.c_required = c_req;
        out.achieved_power = power_at(c_req);
        out.gamma_used = method_level(req.method, req.alpha, c_req);
        out.conditional_t1e_at_design =
            (req.method == Method::TWO_TRIALS)
                ? req.alpha
                : std_normal_sf(success_bound(req.z_o, c_req, req.alpha, req.method));
        return out;
    };

    // Scan log10(c), refining the first upcrossing of the target; one bracket
    // expansion before declaring the target unattainable.
    const double kStep = 0.05;
    double half_width = 4.0;
    for (int attempt = 0; attempt < 2; ++attempt, half_width = 8.0) {
        double prev_lc = -half_width;
        double prev_f = deficit(prev_lc);
        if (prev_f >= 0.0) return finish(std::pow(10.0, prev_lc));
        for (double lc = prev_lc + kStep; lc <= half_width + 1e-12; lc += kStep) {
            double f = deficit(lc);
            if (f >= 0.0) {
                double root = find_root_bracketed(deficit, prev_lc, lc, Tolerance{1e-12, 0.0, 200});
                return finish(std::pow(10.0, root));
            }
            prev_lc = lc;
            prev_f = f;
        }
    }

    // No crossing anywhere: report the best power reachable.
    double best_lc = -8.0;
    double best_p = power_at(std::pow(10.0, best_lc));
    for (double lc = -8.0 + kStep; lc <= 8.0 + 1e-12; lc += kStep) {
        double p = power_at(std::pow(10.0, lc));
        if (p > best_p) {
            best_p = p;
            best_lc = lc;
        }
    }
    MinResult m = minimize_scalar([&](double lc) { return -power_at(std::pow(10.0, lc)); },
                                  std::max(-8.0, best_lc - kStep), std::min(8.0, best_lc + kStep),
                                  Tolerance{1e-8, 0.0, 200});
    double supremum = std::max(best_p, -m.fx);
    std::ostringstream s;
    s << "target power " << req.target_power
      << " is unattainable for this original result; supremum is " << supremum;
    throw infeasibility_error(s.str(), supremum);
}

double project_power(const ProjectPowerQuery& q) {
    check_alpha(q.alpha);
    if (!(q.original_power > 0.0 && q.original_power < 1.0)) {
        throw std::invalid_argument("original_power must lie in (0, 1)");
    }
    if (!(q.c >= 0.0)) throw std::invalid_argument("c must be >= 0");
    double za = std_normal_isf(q.alpha);
    double mu = q.mu();
    double scmu = std::sqrt(q.c) * mu;
    if (q.method == Method::TWO_TRIALS) {
        return std_normal_sf(za - mu) * std_normal_sf(za - scmu);
    }
    double gamma = method_level(q.method, q.alpha, q.c);
    double zg = std_normal_isf(gamma);
    double c = q.c;
    return integrate_gauss_legendre(
        [c, gamma, mu, scmu](double z) {
            return std_normal_pdf(z - mu) * std_normal_sf(zr_min(z, c, gamma) - scmu);
        },
        zg, mu + 40.0);
}

double power_ratio_crossover(double alpha) {
    check_alpha(alpha);
    CalibrationResult cal = calibrate_gamma_c(alpha, 1.0);
    double za = std_normal_isf(alpha);
    double z = find_root_bracketed(
        [&cal, za](double x) { return zr_min(x, 1.0, cal.gamma_c) - za; },
        cal.z_gamma_c * (1.0 + 1e-9), 10.0, Tolerance{1e-12, 0.0, 200});
    return std_normal_sf(z);
}

double sample_size_crossover(double alpha, double target_power) {
    check_alpha(alpha);
    if (!(target_power > 0.5 && target_power < 1.0)) {
        throw std::invalid_argument("target_power must lie in (0.5, 1)");
    }
    double za = std_normal_isf(alpha);
    double zp = std_normal_quantile(target_power);
    auto h = [za, zp, alpha](double z) {
        double root_c = (za + zp) / z;
        double c2 = root_c * root_c;
        CalibrationResult cal = calibrate_gamma_c(alpha, c2);
        return zr_min(z, c2, cal.gamma_c) - za;
    };
    double z = find_root_bracketed(h, za + 0.05, 8.0, Tolerance{1e-12, 0.0, 200});
    return std_normal_sf(z);
}

double sample_size_crossover_limit(double alpha) {
    check_alpha(alpha);
    // As the target power grows, both methods need c -> infinity; there the
    // calibrated bound satisfies zr_min -> w/z with w the upper 4*alpha^2
    // quantile of the limiting null distribution, so the crossing z solves
    // w = z * z_alpha.
    auto sf_limit = [](double w) {
        return integrate_arcsine_weighted([w](double t) {
                   double g = w / std::sqrt(t);
                   return g > 700.0 ? 0.0 : std::exp(-g);
               }) /
               kPi;
    };
    double target = 4.0 * alpha * alpha;
    double wstar = find_root_bracketed([&](double w) { return sf_limit(w) - target; }, 1e-8,
                                       200.0, Tolerance{1e-12, 0.0, 200});
    double za = std_normal_isf(alpha);
    return std_normal_sf(wstar / za);
}

}  // namespace sceptic
