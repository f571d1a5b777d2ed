#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sceptic/numeric.hpp"

namespace sceptic {

enum class Truth {
    INTERSECTION_NULL,
    UNION_NULL_ORIGINAL,
    UNION_NULL_REPLICATION,
    EQUAL_EFFECTS,
};

enum class SimMethod {
    TWO_TRIALS,
    SCEPTICAL_CONTROLLED,
    SCEPTICAL_NOMINAL,
    SCEPTICAL_GOLDEN,
    FISHER,
    STOUFFER,
    PEARSON,
};

struct SimConfig {
    Truth truth = Truth::INTERSECTION_NULL;
    double mu = 0.0;
    double c = 1.0;
    double alpha = 0.025;
    SimMethod method = SimMethod::SCEPTICAL_CONTROLLED;
    std::uint64_t n_rep = 1000000;
    RngStream rng;
};

struct SimResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::pair<double, double> ci95{0.0, 0.0};
    std::uint64_t n_rep = 0;
    std::uint64_t seed = 0;
};

// Brute-force success frequency of a method under the configured truth. The
// verdict is evaluated from the raw draws via each method's defining
// criterion, independent of the analytic p-value pipeline.
SimResult simulate_rate(const SimConfig& config);

// One-sample Kolmogorov-Smirnov test against the uniform law on [0, 1];
// returns (statistic, asymptotic p-value). Needs at least 100 samples.
std::pair<double, double> ks_uniformity(const std::vector<double>& samples);

// Intersection-null draws of distributional test statistics: the two-sided
// p-value scale at the given c, and four times the limiting p-value. Both are
// uniform on (0, 1) when the framework is correct.
std::vector<double> sample_two_sided_4p(double c, std::size_t n, const RngStream& rng);
std::vector<double> sample_4p_infinity(std::size_t n, const RngStream& rng);

}  // namespace sceptic
