#pragma once

namespace sceptic {

enum class Method {
    SCEPTICAL_CONTROLLED,
    TWO_TRIALS,
    SCEPTICAL_NOMINAL,
    SCEPTICAL_GOLDEN,
};

enum class PowerKind { CONDITIONAL, PREDICTIVE };

struct DesignRequest {
    double z_o = 0.0;
    double alpha = 0.025;
    double target_power = 0.8;
    PowerKind power_kind = PowerKind::CONDITIONAL;
    Method method = Method::SCEPTICAL_CONTROLLED;
};

struct DesignResult {
    double c_required = 0.0;
    double achieved_power = 0.0;
    double gamma_used = 0.0;
    double conditional_t1e_at_design = 0.0;
};

struct ProjectPowerQuery {
    double alpha = 0.025;
    double original_power = 0.8;
    double c = 1.0;
    Method method = Method::SCEPTICAL_CONTROLLED;

    // z_alpha + z_beta, the common standardized mean of the original study
    double mu() const;
};

// Success level used by a method: alpha itself for the two-trials rule and the
// nominal sceptical p-value, the calibrated level gamma_c for the controlled
// variant (depends on c), and the golden level otherwise.
double method_level(Method method, double alpha, double c);

// Probability that the replication succeeds given the observed z_o, treating
// the original estimate as the true effect (z_r ~ N(sqrt(c) z_o, 1)).
double conditional_power(double z_o, double c, double alpha, Method method);

// Same success probability under the predictive law of z_r given z_o, which
// inflates the variance to 1 + c to account for the original estimate's own
// sampling uncertainty.
double predictive_power(double z_o, double c, double alpha, Method method);

// Smallest relative sample size c whose power reaches the target; throws
// infeasibility_error (carrying the supremum power) when no c can reach it.
DesignResult required_relative_sample_size(const DesignRequest& req);

// Probability that both studies succeed when both effects are equal and
// non-null, with the original study powered at original_power.
double project_power(const ProjectPowerQuery& q);

// p_o at which the sceptical-controlled and two-trials conditional powers
// coincide at c = 1; the sceptical method is more powerful below it.
double power_ratio_crossover(double alpha);

// p_o at which both methods need the same relative sample size for the given
// target power; the sceptical method needs less below it.
double sample_size_crossover(double alpha, double target_power);

// Limit of sample_size_crossover as the target power tends to 1.
double sample_size_crossover_limit(double alpha);

}  // namespace sceptic
