#include "sceptic/combine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sceptic/numeric.hpp"

namespace sceptic {

namespace {

void check_p(double p, const char* name) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream s;
        s << name << " must lie in (0, 1), got " << p;
        throw std::invalid_argument(s.str());
    }
}

}  // namespace

CombinedVerdict two_trials(double p_o, double p_r) {
    check_p(p_o, "p_o");
    check_p(p_r, "p_r");
    double p_max = std::max(p_o, p_r);
    return {CombineMethod::TWO_TRIALS, p_max, p_max * p_max};
}

CombinedVerdict combine(CombineMethod method, double p_o, double p_r) {
    check_p(p_o, "p_o");
    check_p(p_r, "p_r");
    switch (method) {
        case CombineMethod::TWO_TRIALS:
            return two_trials(p_o, p_r);
        case CombineMethod::FISHER: {
            double stat = -2.0 * (std::log(p_o) + std::log(p_r));
            return {method, stat, chi2_sf(stat, 4)};
        }
        case CombineMethod::STOUFFER: {
            double stat = (std_normal_isf(p_o) + std_normal_isf(p_r)) / std::sqrt(2.0);
            return {method, stat, std_normal_sf(stat)};
        }
        case CombineMethod::PEARSON: {
            double stat = -2.0 * (std::log1p(-p_o) + std::log1p(-p_r));
            return {method, stat, chi2_cdf(stat, 4)};
        }
    }
    throw std::invalid_argument("unknown combination method");
}

double pearson_partial_bound(double alpha) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument("alpha must lie in (0, 0.5)");
    }
    return -std::expm1(-0.5 * chi2_quantile(alpha * alpha, 4));
}

}  // namespace sceptic
