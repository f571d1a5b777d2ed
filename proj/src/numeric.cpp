#include "sceptic/numeric.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sceptic {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
constexpr double kSqrt2Pi = 2.506628274631000502415765284811045253;

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        std::ostringstream s;
        s << name << " must be finite, got " << x;
        throw std::invalid_argument(s.str());
    }
}

}  // namespace

double std_normal_pdf(double x) {
    require_finite(x, "x");
    return std::exp(-0.5 * x * x) / kSqrt2Pi;
}

double std_normal_cdf(double x) {
    require_finite(x, "x");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_sf(double x) {
    require_finite(x, "x");
    return 0.5 * std::erfc(x / kSqrt2);
}

namespace {

// Acklam's rational approximation to the normal quantile, ~1.15e-9 relative,
// then one Halley step against the erfc-based cdf takes it below 1e-15.
double quantile_seed(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double quantile_refine(double x, double p) {
    // Halley step on Phi(x) - p = 0; in the far lower tail iterate on the
    // survival side to keep the residual in relative terms.
    double e = (x < -1.0) ? (std_normal_sf(-x) - p) : (std_normal_cdf(x) - p);
    double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream s;
        s << "quantile needs p in (0,1), got " << p;
        throw std::invalid_argument(s.str());
    }
    double x = quantile_seed(p);
    x = quantile_refine(x, p);
    return quantile_refine(x, p);
}

double std_normal_isf(double q) {
    return -std_normal_quantile(q);
}

namespace {

struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};

// Nodes by Newton iteration on the Legendre recurrence, Chebyshev guesses.
GaussLegendre make_gauss_legendre(int n) {
    GaussLegendre r;
    r.x.resize(n);
    r.w.resize(n);
    int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

const GaussLegendre& gl201() {
    static const GaussLegendre rule = make_gauss_legendre(201);
    return rule;
}

}  // namespace

double integrate_arcsine_weighted(const std::function<double(double)>& f) {
    const GaussLegendre& gl = gl201();
    double sum = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i) {
        double u = 0.25 * kPi * (gl.x[i] + 1.0);
        double s = std::sin(u);
        double t = s * s;
        double v = f(t);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "integrand not finite at t = " << t;
            throw std::runtime_error(msg.str());
        }
        sum += gl.w[i] * v;
    }
    return 0.5 * kPi * sum;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& h, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = h(lm), frm = h(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(h, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(h, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_arcsine_weighted_adaptive(const std::function<double(double)>& f,
                                           double tol) {
    auto h = [&f](double u) {
        double s = std::sin(u);
        return 2.0 * f(s * s);
    };
    double a = 0.0, b = 0.5 * kPi;
    double fa = h(a), fb = h(b), fm = h(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(h, a, b, fa, fm, fb, whole, tol, 60);
}

double integrate_gauss_legendre(const std::function<double(double)>& f,
                                double a, double b) {
    const GaussLegendre& gl = gl201();
    double hw = 0.5 * (b - a), mid = 0.5 * (a + b);
    double sum = 0.0;
    for (size_t i = 0; i < gl.x.size(); ++i) {
        sum += gl.w[i] * f(mid + hw * gl.x[i]);
    }
    return hw * sum;
}

double find_root_bracketed(const std::function<double(double)>& f,
                           double lo, double hi, Tolerance tol) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa * fb > 0.0) {
        std::ostringstream s;
        s << "root not bracketed: f(" << a << ") = " << fa
          << ", f(" << b << ") = " << fb;
        throw std::invalid_argument(s.str());
    }
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        if (fb * fc > 0.0) {
            c = a;
            fc = fa;
            e = d = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                      0.5 * tol.abs_tol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw std::runtime_error("find_root_bracketed: max_iter exceeded");
}

MinResult minimize_scalar(const std::function<double(double)>& f,
                          double lo, double hi, Tolerance tol) {
    // Brent's minimizer: parabolic steps guarded by golden-section fallback.
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        double m = 0.5 * (a + b);
        double tol1 = tol.abs_tol * std::abs(x) + 1e-12;
        double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) return {x, fx};
        double p = 0.0, q = 0.0, r = 0.0;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            r = (x - w) * (fx - fv);
            q = (x - v) * (fx - fw);
            p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
            }
        }
        if (!parabolic) {
            e = (x < m) ? (b - x) : (a - x);
            d = gold * e;
        }
        double u = (std::abs(d) >= tol1) ? (x + d) : (x + (d > 0 ? tol1 : -tol1));
        double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

namespace {

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double chi2_cdf(double x, double df) {
    if (x < 0.0) throw std::invalid_argument("chi2_cdf: x < 0");
    return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, double df) {
    if (x < 0.0) throw std::invalid_argument("chi2_sf: x < 0");
    return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("chi2_quantile: p outside (0,1)");
    double hi = df + 10.0;
    while (chi2_cdf(hi, df) < p) hi *= 2.0;
    return find_root_bracketed([&](double x) { return chi2_cdf(x, df) - p; },
                               0.0, hi, {1e-12, 0.0, 200});
}

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

double RngStream::u01_at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t n) {
    std::uint64_t key = mix64(seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
    std::uint64_t v = mix64(key + 0x9e3779b97f4a7c15ULL * (n + 1));
    return ((v >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal_at(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t n) {
    return std_normal_quantile(u01_at(seed, stream_id, n));
}

}  // namespace sceptic
