#include "sceptic/calibrate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sceptic/core.hpp"
#include "sceptic/errors.hpp"
#include "sceptic/numeric.hpp"

namespace sceptic {

namespace {

void check_level(double gamma, const char* name) {
    if (!(gamma > 0.0 && gamma < 0.5)) {
        std::ostringstream s;
        s << name << " must lie in (0, 0.5), got " << gamma;
        throw std::invalid_argument(s.str());
    }
}

}  // namespace

double zr_min(double z_o, double c, double gamma) {
    check_level(gamma, "gamma");
    if (!(c >= 0.0)) throw std::invalid_argument("zr_min: c must be >= 0");
    double zg = std_normal_isf(gamma);
    if (z_o <= zg) {
        std::ostringstream s;
        s << "zr_min: z_o = " << z_o << " does not exceed the critical value "
          << zg << "; success impossible";
        throw infeasibility_error(s.str());
    }
    double w = (z_o / zg) * (z_o / zg);
    return zg * std::sqrt(1.0 + c / (w - 1.0));
}

double overall_t1e(double gamma, double c) {
    check_level(gamma, "gamma");
    if (!(c >= 0.0)) throw std::invalid_argument("overall_t1e: c must be >= 0");
    double zg = std_normal_isf(gamma);
    return integrate_gauss_legendre(
        [c, gamma](double z) {
            return std_normal_pdf(z) * std_normal_sf(zr_min(z, c, gamma));
        },
        zg, 40.0);
}

CalibrationResult calibrate_gamma_c(double alpha, double c) {
    check_level(alpha, "alpha");
    if (!(c >= 0.0)) throw std::invalid_argument("calibrate_gamma_c: c must be >= 0");
    CalibrationResult r;
    r.alpha = alpha;
    r.c = c;
    if (c < 1e-12) {
        r.gamma_c = alpha;
        r.z_gamma_c = std_normal_isf(alpha);
        r.achieved_overall_t1e = alpha * alpha;
        return r;
    }
    double y = null_quantile(1.0 - 4.0 * alpha * alpha, c);
    r.z_gamma_c = std::sqrt(y);
    r.gamma_c = std_normal_sf(r.z_gamma_c);
    r.achieved_overall_t1e = overall_t1e(r.gamma_c, c);
    return r;
}

double partial_t1e(const T1eQuery& query) {
    check_level(query.gamma, "gamma");
    if (!(query.c >= 0.0)) throw std::invalid_argument("partial_t1e: c must be >= 0");
    if (!(query.drift >= 0.0)) throw std::invalid_argument("partial_t1e: drift must be >= 0");
    if (query.null_side == NullSide::BOTH) {
        throw std::invalid_argument("partial_t1e: null_side BOTH is overall_t1e's job");
    }
    // The success region is symmetric in the two statistics, so both partial
    // nulls reduce to the same integral. Integrating along the drifted axis
    // keeps the normal bump away from the steep zr_min wall at z_gamma, and
    // the split keeps it resolved once it sits deep inside the domain.
    double zg = std_normal_isf(query.gamma);
    double c = query.c;
    double gamma = query.gamma;
    double drift = query.drift;
    auto density = [c, gamma, drift](double z) {
        return std_normal_pdf(z - drift) * std_normal_sf(zr_min(z, c, gamma));
    };
    double cut = drift - 8.0;
    if (cut <= zg) return integrate_gauss_legendre(density, zg, drift + 40.0);
    return integrate_gauss_legendre(density, zg, cut) +
           integrate_gauss_legendre(density, cut, drift + 40.0);
}

double success_region_boundary(double p_o, double alpha, double c) {
    if (!(p_o > 0.0 && p_o < 1.0)) throw std::invalid_argument("success_region_boundary: p_o outside (0,1)");
    CalibrationResult cal = calibrate_gamma_c(alpha, c);
    if (p_o >= cal.gamma_c) return 0.0;
    double z_o = std_normal_isf(p_o);
    return std_normal_sf(zr_min(z_o, c, cal.gamma_c));
}

double conditional_t1e(double p_o, double c, double alpha) {
    return success_region_boundary(p_o, alpha, c);
}

double golden_level(double alpha) {
    check_level(alpha, "alpha");
    return std_normal_sf(std_normal_isf(alpha) / std::sqrt(kGoldenPhi));
}

}  // namespace sceptic
