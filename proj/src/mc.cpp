#include "sceptic/mc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sceptic/calibrate.hpp"
#include "sceptic/core.hpp"

namespace sceptic {

namespace {

unsigned worker_count(std::uint64_t n) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 4;
    hw = std::min(hw, 16u);
    while (hw > 1 && n / hw < 65536) --hw;
    return hw;
}

// Runs fn(lo, hi) over a partition of [0, n) on worker threads. Bodies index
// draws by absolute position, so the split cannot change the result.
void parallel_ranges(std::uint64_t n,
                     const std::function<void(std::uint64_t, std::uint64_t, unsigned)>& fn) {
    unsigned workers = worker_count(n);
    if (workers <= 1) {
        fn(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::uint64_t chunk = n / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = w * chunk;
        std::uint64_t hi = (w + 1 == workers) ? n : lo + chunk;
        pool.emplace_back([&fn, lo, hi, w] { fn(lo, hi, w); });
    }
    for (auto& t : pool) t.join();
}

void validate(const SimConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 0.5)) {
        throw std::invalid_argument("alpha must lie in (0, 0.5)");
    }
    if (!(config.c >= 0.0)) throw std::invalid_argument("c must be >= 0");
    if (!(config.mu >= 0.0)) throw std::invalid_argument("mu must be >= 0");
    if (config.truth == Truth::INTERSECTION_NULL && config.mu != 0.0) {
        throw std::invalid_argument("mu must be 0 under the intersection null");
    }
    if (config.n_rep < 10000) throw std::invalid_argument("n_rep must be at least 10000");
}

std::function<bool(double, double)> make_verdict(const SimConfig& config) {
    double alpha = config.alpha;
    double c = config.c;
    switch (config.method) {
        case SimMethod::TWO_TRIALS: {
            double za = std_normal_isf(alpha);
            return [za](double zo, double zr) { return zo >= za && zr >= za; };
        }
        case SimMethod::SCEPTICAL_CONTROLLED:
        case SimMethod::SCEPTICAL_NOMINAL:
        case SimMethod::SCEPTICAL_GOLDEN: {
            double gamma = alpha;
            if (config.method == SimMethod::SCEPTICAL_CONTROLLED) {
                gamma = calibrate_gamma_c(alpha, c).gamma_c;
            } else if (config.method == SimMethod::SCEPTICAL_GOLDEN) {
                gamma = golden_level(alpha);
            }
            double zg2 = std_normal_isf(gamma);
            zg2 *= zg2;
            return [zg2, c](double zo, double zr) {
                double a = zo * zo / zg2 - 1.0;
                double b = zr * zr / zg2 - 1.0;
                return zo > 0.0 && zr > 0.0 && a > 0.0 && b > 0.0 && a * b >= c;
            };
        }
        case SimMethod::FISHER: {
            double threshold = chi2_quantile(1.0 - alpha * alpha, 4.0);
            return [threshold](double zo, double zr) {
                double stat = -2.0 * (std::log(std_normal_sf(zo)) + std::log(std_normal_sf(zr)));
                return stat >= threshold;
            };
        }
        case SimMethod::STOUFFER: {
            double threshold = std_normal_isf(alpha * alpha) * std::sqrt(2.0);
            return [threshold](double zo, double zr) { return zo + zr >= threshold; };
        }
        case SimMethod::PEARSON: {
            double threshold = chi2_quantile(alpha * alpha, 4.0);
            return [threshold](double zo, double zr) {
                double stat = -2.0 * (std::log(std_normal_cdf(zo)) + std::log(std_normal_cdf(zr)));
                return stat <= threshold;
            };
        }
    }
    throw std::invalid_argument("unknown simulation method");
}

}  // namespace

SimResult simulate_rate(const SimConfig& config) {
    validate(config);
    double mean_o = 0.0;
    double mean_r = 0.0;
    switch (config.truth) {
        case Truth::INTERSECTION_NULL:
            break;
        case Truth::UNION_NULL_ORIGINAL:
            mean_r = config.mu;
            break;
        case Truth::UNION_NULL_REPLICATION:
            mean_o = config.mu;
            break;
        case Truth::EQUAL_EFFECTS:
            mean_o = config.mu;
            mean_r = std::sqrt(config.c) * config.mu;
            break;
    }
    auto success = make_verdict(config);
    std::uint64_t n = config.n_rep;
    std::uint64_t seed = config.rng.seed;
    std::uint64_t stream = config.rng.stream_id;

    std::vector<std::uint64_t> hits(worker_count(n), 0);
    parallel_ranges(n, [&](std::uint64_t lo, std::uint64_t hi, unsigned w) {
        std::uint64_t k = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            double zo = mean_o + RngStream::normal_at(seed, stream, 2 * i);
            double zr = mean_r + RngStream::normal_at(seed, stream, 2 * i + 1);
            if (success(zo, zr)) ++k;
        }
        hits[w] = k;
    });
    std::uint64_t total = 0;
    for (std::uint64_t k : hits) total += k;

    SimResult out;
    out.estimate = static_cast<double>(total) / static_cast<double>(n);
    out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n));
    double half = 1.959964 * out.std_error;
    out.ci95 = {std::max(0.0, out.estimate - half), std::min(1.0, out.estimate + half)};
    out.n_rep = n;
    out.seed = seed;
    return out;
}

std::pair<double, double> ks_uniformity(const std::vector<double>& samples) {
    if (samples.size() < 100) {
        throw std::invalid_argument("ks_uniformity needs at least 100 samples");
    }
    for (double x : samples) {
        if (!(x >= 0.0 && x <= 1.0)) {
            std::ostringstream s;
            s << "sample outside [0, 1]: " << x;
            throw std::invalid_argument(s.str());
        }
    }
    std::vector<double> x = samples;
    std::sort(x.begin(), x.end());
    double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double up = (static_cast<double>(i) + 1.0) / n - x[i];
        double down = x[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(up, down));
    }
    double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
        p += (k % 2 == 1) ? term : -term;
    }
    return {d, std::clamp(p, 0.0, 1.0)};
}

std::vector<double> sample_two_sided_4p(double c, std::size_t n, const RngStream& rng) {
    if (!(c >= 0.0)) throw std::invalid_argument("c must be >= 0");
    std::vector<double> out(n);
    std::uint64_t seed = rng.seed;
    std::uint64_t stream = rng.stream_id;
    parallel_ranges(n, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            StudyPair pair;
            pair.z_o = RngStream::normal_at(seed, stream, 2 * i);
            pair.z_r = RngStream::normal_at(seed, stream, 2 * i + 1);
            pair.c = c;
            out[i] = null_sf(solve_zs2(pair), c);
        }
    });
    return out;
}

std::vector<double> sample_4p_infinity(std::size_t n, const RngStream& rng) {
    std::vector<double> out(n);
    std::uint64_t seed = rng.seed;
    std::uint64_t stream = rng.stream_id;
    parallel_ranges(n, [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            StudyPair pair;
            pair.z_o = RngStream::normal_at(seed, stream, 2 * i);
            pair.z_r = RngStream::normal_at(seed, stream, 2 * i + 1);
            pair.c = 1.0;
            out[i] = 4.0 * p_infinity(pair);
        }
    });
    return out;
}

}  // namespace sceptic
